"""
Integer matrices of determinant ±2.

Every such S factors as T·W with T unimodular and W one of

    M      = [[1, 1], [1, -1]]
    M·R    = [[1, 2], [1, 0]]
    M·R·J  = [[2, 1], [0, 1]]

decided by the parity pattern of S's entries. The rewriting identities
below let M move rightwards through an R/L word, which is how the tails of
σ(x) are derived.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum
from typing import Literal

from cfleap.exact import (
    AUX_A,
    AUX_B,
    AUX_C,
    IDENTITY,
    J,
    L,
    M,
    R,
    Matrix2x2,
    Word,
    l_power,
    r_power,
)
from cfleap.errors import BadDeterminant, ParityError
from cfleap.report import VerificationReport

logger = logging.getLogger(__name__)


class DecompCase(str, Enum):
    TM = "TM"
    TMR = "TMR"
    TMRJ = "TMRJ"

    @property
    def word(self) -> Matrix2x2:
        if self is DecompCase.TM:
            return M
        if self is DecompCase.TMR:
            return M * R
        return M * R * J


@dataclass(frozen=True)
class Decomposition:
    t: Matrix2x2
    case: DecompCase

    def reconstruct(self) -> Matrix2x2:
        return self.t * self.case.word

    def __str__(self) -> str:
        return f"case={self.case.value} T={self.t}"


def case_predicates(s: Matrix2x2) -> dict[DecompCase, bool]:
    """The three parity patterns; exactly one holds when |det S| = 2."""
    a, b, c, d = s.a % 2, s.b % 2, s.c % 2, s.d % 2
    return {
        DecompCase.TM: a == b and c == d,
        DecompCase.TMR: (a or c) and b == 0 and d == 0,
        DecompCase.TMRJ: (b or d) and a == 0 and c == 0,
    }


def decompose(s: Matrix2x2) -> Decomposition:
    """Factor S = T·W with T unimodular; S must have det ±2."""
    if abs(s.det) != 2:
        raise BadDeterminant(f"{s} has det {s.det}; decomposition needs ±2")
    holding = [case for case, ok in case_predicates(s).items() if ok]
    if len(holding) != 1:
        raise BadDeterminant(f"{s} matches cases {holding}; expected exactly one")
    case = holding[0]
    A, B, C, D = s.a, s.b, s.c, s.d
    if case is DecompCase.TM:
        t = Matrix2x2((A + B) // 2, (A - B) // 2, (C + D) // 2, (C - D) // 2)
    elif case is DecompCase.TMR:
        t = Matrix2x2(B // 2, (2 * A - B) // 2, D // 2, (2 * C - D) // 2)
    else:
        t = Matrix2x2(A // 2, (2 * B - A) // 2, C // 2, (2 * D - C) // 2)
    result = Decomposition(t, case)
    assert result.reconstruct() == s and abs(t.det) == 1
    return result


def t_word_if_nonneg(t: Matrix2x2) -> Word | None:
    """
    R/L factorisation of T when det T = 1 and every entry is ≥ 0.

    Peels R (row 1 dominates row 2) or L (row 2 dominates) off the left,
    taking whole powers at a time; None for any other T.
    """
    if t.det != 1 or min(t.a, t.b, t.c, t.d) < 0:
        return None
    word: Word = []
    a, b, c, d = t.a, t.b, t.c, t.d
    while (a, b, c, d) != (1, 0, 0, 1):
        if a >= c and b >= d:
            letter = "R"
            n = min(x // y for x, y in ((a, c), (b, d)) if y)
            a, b = a - n * c, b - n * d
        elif c >= a and d >= b:
            letter = "L"
            n = min(x // y for x, y in ((c, a), (d, b)) if y)
            c, d = c - n * a, d - n * b
        else:
            return None
        if word and word[-1][0] == letter:
            word[-1] = (letter, word[-1][1] + n)
        else:
            word.append((letter, n))
    return word


# ──────────────────────────────────────────────
# Rewriting identities
# ──────────────────────────────────────────────

Parity = Literal["any", "odd", "even"]


@dataclass(frozen=True)
class Identity:
    name: str
    formula: str
    parity: Parity
    lhs: Callable[[int], Matrix2x2]
    rhs: Callable[[int], Matrix2x2]

    def applies_to(self, h: int) -> bool:
        if self.parity == "odd":
            return h % 2 == 1
        if self.parity == "even":
            return h % 2 == 0
        return True


_IDENTITIES: tuple[Identity, ...] = (
    Identity("a1", "J·R^h = L^h·J", "any",
             lambda h: J * r_power(h), lambda h: l_power(h) * J),
    Identity("a2", "J·L^h = R^h·J", "any",
             lambda h: J * l_power(h), lambda h: r_power(h) * J),
    Identity("a3", "A·L^h = R^(2h)·A", "any",
             lambda h: AUX_A * l_power(h), lambda h: r_power(2 * h) * AUX_A),
    Identity("a4", "B·R^h = L^(2h)·B", "any",
             lambda h: AUX_B * r_power(h), lambda h: l_power(2 * h) * AUX_B),
    Identity("b1", "M·R^h = R·L^((h-1)/2)·A", "odd",
             lambda h: M * r_power(h), lambda h: R * l_power((h - 1) // 2) * AUX_A),
    Identity("b2", "A·R^h = L^((h-1)/2)·C", "odd",
             lambda h: AUX_A * r_power(h), lambda h: l_power((h - 1) // 2) * AUX_C),
    Identity("b3", "B·L^h = R^((h-1)/2)·L·M", "odd",
             lambda h: AUX_B * l_power(h), lambda h: r_power((h - 1) // 2) * L * M),
    Identity("b4", "C·L^h = R·L·R^((h-1)/2)·B", "odd",
             lambda h: AUX_C * l_power(h),
             lambda h: R * L * r_power((h - 1) // 2) * AUX_B),
    Identity("c1", "M·R^h = R·L^((h-2)/2)·C", "even",
             lambda h: M * r_power(h), lambda h: R * l_power((h - 2) // 2) * AUX_C),
    Identity("c2", "A·R^h = L^(h/2)·A", "even",
             lambda h: AUX_A * r_power(h), lambda h: l_power(h // 2) * AUX_A),
    Identity("c3", "C·L^h = R·L·R^((h-2)/2)·L·M", "even",
             lambda h: AUX_C * l_power(h),
             lambda h: R * L * r_power((h - 2) // 2) * L * M),
)  # fmt: skip

IDENTITIES: dict[str, Identity] = {ident.name: ident for ident in _IDENTITIES}


def lemma_identities() -> list[Identity]:
    return list(_IDENTITIES)


def verify_identity(name: str, h: int) -> VerificationReport:
    """Check one rewriting identity at h (any integer of the right parity)."""
    if name not in IDENTITIES:
        available = ", ".join(IDENTITIES)
        raise KeyError(f"Unknown identity '{name}'. Available: {available}")
    ident = IDENTITIES[name]
    if not ident.applies_to(h):
        raise ParityError(f"Identity {name} needs {ident.parity} h, got {h}")
    report = VerificationReport(branch=f"identity:{name}", p_range=(h, h))
    report.record(h, ident.lhs(h), ident.rhs(h), label=ident.formula)
    return report


def unit_matrix_check() -> bool:
    """Sanity anchors used by the self-test: M² = 2I and J² = I."""
    return M * M == Matrix2x2(2, 0, 0, 2) and J * J == IDENTITY
