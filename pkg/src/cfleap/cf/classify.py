"""
Parity classes of partial-quotient sequences.

    CF1  every aᵢ even
    CF2  every aᵢ odd
    CF3  aᵢ odd at even i, even at odd i
    CF4  aᵢ even at even i, odd at odd i

Classification of an unbounded stream can only be checked on a finite
window; the horizon used is part of the result. Quasi-periodic fractions
whose coefficients have a decidable parity are classified exactly.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum
from itertools import islice
from typing import Literal

from cfleap.cf.quasi import QuasiPeriodicCF
from cfleap.config import DEFAULT_CLASSIFY_HORIZON

logger = logging.getLogger(__name__)


class CFClass(str, Enum):
    CF1 = "CF1"
    CF2 = "CF2"
    CF3 = "CF3"
    CF4 = "CF4"
    UNKNOWN = "Unknown"

    def expected_parity(self, i: int) -> int:
        """Required parity of aᵢ (0 even, 1 odd)."""
        if self is CFClass.CF1:
            return 0
        if self is CFClass.CF2:
            return 1
        if self is CFClass.CF3:
            return 1 if i % 2 == 0 else 0
        if self is CFClass.CF4:
            return 0 if i % 2 == 0 else 1
        raise ValueError("Unknown class has no parity pattern")


PARITY_CLASSES: tuple[CFClass, ...] = (CFClass.CF1, CFClass.CF2, CFClass.CF3, CFClass.CF4)


@dataclass(frozen=True)
class Classification:
    cf_class: CFClass
    horizon: int | None
    method: Literal["window", "symbolic"]

    def __str__(self) -> str:
        if self.method == "symbolic":
            return f"{self.cf_class.value} (exact)"
        return f"{self.cf_class.value} (checked on {self.horizon} terms)"


def class_of(quotients: Sequence[int]) -> CFClass:
    """Parity class of a finite quotient list (a₀ ≥ 1 required)."""
    if len(quotients) < 2 or quotients[0] < 1:
        return CFClass.UNKNOWN
    for cls in PARITY_CLASSES:
        if all(q % 2 == cls.expected_parity(i) for i, q in enumerate(quotients)):
            return cls
    return CFClass.UNKNOWN


def classify(
    quotients: Iterable[int], horizon: int = DEFAULT_CLASSIFY_HORIZON
) -> Classification:
    """Classify from the first *horizon* quotients."""
    if horizon < 2:
        raise ValueError(f"horizon must be ≥ 2, got {horizon}")
    window = list(islice(quotients, horizon))
    if len(window) < horizon:
        logger.warning(
            "Classification window has %d terms (horizon %d)", len(window), horizon
        )
    return Classification(class_of(window), len(window), "window")


def classify_qp(
    qp: QuasiPeriodicCF, horizon: int = DEFAULT_CLASSIFY_HORIZON
) -> Classification:
    """Exact class when every coefficient's parity is decidable, else window."""
    symbolic = _symbolic_class(qp)
    if symbolic is not None:
        logger.debug("Classified %s symbolically as %s", qp, symbolic.value)
        return Classification(symbolic, None, "symbolic")
    logger.debug("Falling back to a %d-term window for %s", horizon, qp)
    return classify(qp.stream(), horizon)


def _symbolic_class(qp: QuasiPeriodicCF) -> CFClass | None:
    if qp.is_finite:
        return None
    first = qp.prefix[0] if qp.prefix else qp.period[0].evaluate(qp.start)
    if first < 1:
        return CFClass.UNKNOWN
    parities = [expr.parity(qp.start) for expr in qp.period]
    if any(None in pair for pair in parities):
        return None
    plen = len(qp.prefix)
    ell = len(qp.period)
    for cls in PARITY_CLASSES:
        if any(q % 2 != cls.expected_parity(i) for i, q in enumerate(qp.prefix)):
            continue
        ok = True
        for j, pair in enumerate(parities):
            # position of period entry j at k; its parity flips with k when ℓ is odd
            for k in (qp.start, qp.start + 1):
                i = plen + j + ell * (k - qp.start)
                if pair[k % 2] != cls.expected_parity(i):
                    ok = False
        if ok:
            return cls
    return CFClass.UNKNOWN
