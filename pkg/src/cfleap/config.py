"""
Global configuration and constants.

All bounds, horizons and default sizes live here.
Library code takes them as keyword defaults — never hardcodes.
"""

from typing import Final

# ──────────────────────────────────────────────
# Streaming arithmetic
# ──────────────────────────────────────────────

# Absorptions allowed without an emission before giving up.
STALL_BOUND: Final[int] = 10**6

DEFAULT_TERMS: Final[int] = 20

# ──────────────────────────────────────────────
# Classification and tail alignment
# ──────────────────────────────────────────────

DEFAULT_CLASSIFY_HORIZON: Final[int] = 64
DEFAULT_ALIGN_HORIZON: Final[int] = 200
MAX_ALIGN_OFFSET: Final[int] = 200

# Window used when applicability cannot be decided from the expressions.
APPLICABILITY_WINDOW: Final[int] = 64

# ──────────────────────────────────────────────
# Leaping verification
# ──────────────────────────────────────────────

DEFAULT_P_MAX: Final[int] = 30
RECURRENCE_P_MIN: Final[int] = 4
LEAPING_P_MIN: Final[int] = 3
EQCONV4_MAX_THRESHOLD: Final[int] = 10

# ──────────────────────────────────────────────
# Sweeps
# ──────────────────────────────────────────────

DEFAULT_SEED: Final[int] = 0

LEMMA_H_RANGE: Final[tuple[int, int]] = (-20, 20)

DECOMP_SWEEP_COUNT: Final[int] = 1000
DECOMP_ENTRY_BOUND: Final[int] = 50

BLOCK_SWEEP_MAX_QUOTIENT: Final[int] = 15

TAIL_SWEEP_INSTANCES: Final[int] = 50
TAIL_SWEEP_T_BOUND: Final[int] = 9
TAIL_SWEEP_VALUE_BOUND: Final[int] = 30

LEAPING_SWEEP_INSTANCES: Final[int] = 10
LEAPING_SWEEP_P_MAX: Final[int] = 30
LEAPING_SWEEP_DIAGONAL_P_MAX: Final[int] = 40

ORACLE_RATIONAL_COUNT: Final[int] = 500
ORACLE_UNIMODULAR_COUNT: Final[int] = 100
ORACLE_ENTRY_BOUND: Final[int] = 20

# ──────────────────────────────────────────────
# CLI exit codes
# ──────────────────────────────────────────────

EXIT_FAILURE: Final[int] = 1
EXIT_USAGE: Final[int] = 2
EXIT_NOT_APPLICABLE: Final[int] = 3
