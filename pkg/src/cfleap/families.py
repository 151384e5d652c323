"""
Concrete quasi-periodic families and their tails.

    h(a, n)        = [a(1 + kn)]         k = 0, 1, …     (Hurwitz)
    t1(u, a)       = [u·a^k]             k = 1, 2, …     (Tasoev)
    t2(u, v, a)    = [u·a^k, v·a^k]      k = 1, 2, …     (Tasoev)

For each family the parity class follows from the parameters, and the tail
of σ(x) for each decomposition case is tabulated below in the text
notation. The tables are specialisations of ``tails.predicted_tail``;
combinations outside them raise NotApplicable.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction
from math import comb, prod
from typing import ClassVar, Union

from cfleap.cf.classify import CFClass
from cfleap.cf.dsl import parse_cf
from cfleap.cf.quasi import QuasiPeriodicCF
from cfleap.cf.stream import Convergent, Replay
from cfleap.config import DEFAULT_ALIGN_HORIZON
from cfleap.det2 import DecompCase
from cfleap.errors import NotApplicable
from cfleap.exact import LFT, M
from cfleap.gosper import apply_lft_stream
from cfleap.leaping import ConvergentTable, TransformedConvergent, transformed_convergent
from cfleap.report import VerificationReport
from cfleap.tails import applicability, first_applicable_start, tail_case

logger = logging.getLogger(__name__)


def _require_positive(**params: int) -> None:
    for name, value in params.items():
        if value < 1:
            raise ValueError(f"{name} must be ≥ 1, got {value}")


@dataclass(frozen=True)
class HurwitzHN:
    a: int
    n: int

    kind: ClassVar[str] = "hurwitz"

    def __post_init__(self) -> None:
        _require_positive(a=self.a, n=self.n)

    @property
    def params(self) -> dict[str, int]:
        return {"a": self.a, "n": self.n}

    def __str__(self) -> str:
        return f"h({self.a},{self.n})"


@dataclass(frozen=True)
class TasoevT1:
    u: int
    a: int

    kind: ClassVar[str] = "tasoev1"

    def __post_init__(self) -> None:
        _require_positive(u=self.u, a=self.a)

    @property
    def params(self) -> dict[str, int]:
        return {"u": self.u, "a": self.a}

    def __str__(self) -> str:
        return f"t1({self.u},{self.a})"


@dataclass(frozen=True)
class TasoevT2:
    u: int
    v: int
    a: int

    kind: ClassVar[str] = "tasoev2"

    def __post_init__(self) -> None:
        _require_positive(u=self.u, v=self.v, a=self.a)

    @property
    def params(self) -> dict[str, int]:
        return {"u": self.u, "v": self.v, "a": self.a}

    def __str__(self) -> str:
        return f"t2({self.u},{self.v},{self.a})"


Family = Union[HurwitzHN, TasoevT1, TasoevT2]

_STREAMS: dict[str, str] = {
    "hurwitz": "[; {a}*(1+k*{n}) @ k=0..]",
    "tasoev1": "[; {u}*{a}^k @ k=1..]",
    "tasoev2": "[; {u}*{a}^k, {v}*{a}^k @ k=1..]",
}


def family_stream(f: Family) -> QuasiPeriodicCF:
    """The family as a quasi-periodic fraction."""
    return parse_cf(_STREAMS[f.kind].format(**f.params))


def family_class(f: Family) -> CFClass:
    """Parity class read off the parameters."""
    if isinstance(f, HurwitzHN):
        if f.a % 2 == 0:
            return CFClass.CF1
        return CFClass.CF2 if f.n % 2 == 0 else CFClass.CF3
    if isinstance(f, TasoevT1):
        return CFClass.CF2 if f.u % 2 and f.a % 2 else CFClass.CF1
    if f.a % 2 == 0:
        return CFClass.CF1
    return {
        (0, 0): CFClass.CF1,
        (1, 1): CFClass.CF2,
        (1, 0): CFClass.CF3,
        (0, 1): CFClass.CF4,
    }[(f.u % 2, f.v % 2)]


# ──────────────────────────────────────────────
# Tail tables
# ──────────────────────────────────────────────

_C1, _C2, _C3, _C4 = CFClass.CF1, CFClass.CF2, CFClass.CF3, CFClass.CF4
_TM, _TMR, _TMRJ = DecompCase.TM, DecompCase.TMR, DecompCase.TMRJ

TailKey = tuple[str, CFClass, DecompCase]

FAMILY_TAILS: dict[TailKey, str] = {
    ("hurwitz", _C1, _TM): "({a}*(1+{n}*(k-1))-2)/2, 1, 1",
    ("hurwitz", _C1, _TMR): "{a}*(1+{n}*(2*k-2))/2, 2*{a}*(1+{n}*(2*k-1))",
    ("hurwitz", _C1, _TMRJ): "{a}*(1+{n}*(2*k-1))/2, 2*{a}*(1+2*k*{n})",
    ("hurwitz", _C2, _TM): (
        "({a}*(1+3*{n}*(k-1))-1)/2, 2*{a}*(1+{n}*(3*k-2)), "
        "({a}*(1+{n}*(3*k-1))-1)/2, 1, 1"
    ),
    ("hurwitz", _C2, _TMR): (
        "({a}*(1+{n}*(3*k-2))-1)/2, 2*{a}*(1+{n}*(3*k-1)), "
        "({a}*(1+3*k*{n})-1)/2, 1, 1"
    ),
    ("hurwitz", _C2, _TMRJ): (
        "({a}*(1+{n}*(3*k-1))-1)/2, 2*{a}*(1+3*k*{n}), "
        "({a}*(1+{n}*(3*k+1))-1)/2, 1, 1"
    ),
    ("hurwitz", _C3, _TM): (
        "({a}*(1+(4*k-4)*{n})-1)/2, 2*{a}*(1+(4*k-3)*{n}), "
        "({a}*(1+(4*k-2)*{n})-1)/2, 1, 1, ({a}*(1+(4*k-1)*{n})-2)/2, 1, 1"
    ),
    ("hurwitz", _C3, _TMR): (
        "({a}*(1+(4*k-2)*{n})-1)/2, 2*{a}*(1+(4*k-1)*{n}), "
        "({a}*(1+4*k*{n})-1)/2, 1, 1, ({a}*(1+(4*k+1)*{n})-2)/2, 1, 1"
    ),
    ("hurwitz", _C3, _TMRJ): "{a}*(1+{n}*(2*k-1))/2, 2*{a}*(1+2*k*{n})",
    ("tasoev1", _C1, _TM): "({u}*{a}^k-2)/2, 1, 1",
    ("tasoev1", _C1, _TMR): "{u}*{a}^(2*k-1)/2, 2*{u}*{a}^(2*k)",
    ("tasoev1", _C1, _TMRJ): "{u}*{a}^(2*k)/2, 2*{u}*{a}^(2*k+1)",
    ("tasoev1", _C2, _TM): (
        "({u}*{a}^(3*k-2)-1)/2, 2*{u}*{a}^(3*k-1), ({u}*{a}^(3*k)-1)/2, 1, 1"
    ),
    ("tasoev1", _C2, _TMR): (
        "({u}*{a}^(3*k-1)-1)/2, 2*{u}*{a}^(3*k), ({u}*{a}^(3*k+1)-1)/2, 1, 1"
    ),
    ("tasoev1", _C2, _TMRJ): (
        "({u}*{a}^(3*k)-1)/2, 2*{u}*{a}^(3*k+1), ({u}*{a}^(3*k+2)-1)/2, 1, 1"
    ),
    ("tasoev2", _C1, _TM): "({u}*{a}^k-2)/2, 1, 1, ({v}*{a}^k-2)/2, 1, 1",
    ("tasoev2", _C1, _TMR): "{u}*{a}^k/2, 2*{v}*{a}^k",
    ("tasoev2", _C1, _TMRJ): "{v}*{a}^k/2, 2*{u}*{a}^(k+1)",
    ("tasoev2", _C2, _TM): (
        "({u}*{a}^(3*k-2)-1)/2, 2*{v}*{a}^(3*k-2), ({u}*{a}^(3*k-1)-1)/2, 1, 1, "
        "({v}*{a}^(3*k-1)-1)/2, 2*{u}*{a}^(3*k), ({v}*{a}^(3*k)-1)/2, 1, 1"
    ),
    ("tasoev2", _C2, _TMR): (
        "({v}*{a}^(3*k-2)-1)/2, 2*{u}*{a}^(3*k-1), ({v}*{a}^(3*k-1)-1)/2, 1, 1, "
        "({u}*{a}^(3*k)-1)/2, 2*{v}*{a}^(3*k), ({u}*{a}^(3*k+1)-1)/2, 1, 1"
    ),
    ("tasoev2", _C2, _TMRJ): (
        "({u}*{a}^(3*k-1)-1)/2, 2*{v}*{a}^(3*k-1), ({u}*{a}^(3*k)-1)/2, 1, 1, "
        "({v}*{a}^(3*k)-1)/2, 2*{u}*{a}^(3*k+1), ({v}*{a}^(3*k+1)-1)/2, 1, 1"
    ),
    ("tasoev2", _C3, _TM): (
        "({u}*{a}^(2*k-1)-1)/2, 2*{v}*{a}^(2*k-1), ({u}*{a}^(2*k)-1)/2, 1, 1, "
        "({v}*{a}^(2*k)-2)/2, 1, 1"
    ),
    ("tasoev2", _C3, _TMR): (
        "({u}*{a}^(2*k)-1)/2, 2*{v}*{a}^(2*k), ({u}*{a}^(2*k+1)-1)/2, 1, 1, "
        "({v}*{a}^(2*k+1)-2)/2, 1, 1"
    ),
    ("tasoev2", _C3, _TMRJ): "{v}*{a}^k/2, 2*{u}*{a}^(k+1)",
    ("tasoev2", _C4, _TM): (
        "({v}*{a}^(2*k-1)-1)/2, 2*{u}*{a}^(2*k), ({v}*{a}^(2*k)-1)/2, 1, 1, "
        "({u}*{a}^(2*k+1)-2)/2, 1, 1"
    ),
    ("tasoev2", _C4, _TMR): "{u}*{a}^k/2, 2*{v}*{a}^k",
    ("tasoev2", _C4, _TMRJ): (
        "({v}*{a}^(2*k)-1)/2, 2*{u}*{a}^(2*k+1), ({v}*{a}^(2*k+1)-1)/2, 1, 1, "
        "({u}*{a}^(2*k+2)-2)/2, 1, 1"
    ),
}

_Condition = tuple[str, Callable[[dict[str, int]], bool]]


def _products(ua: int, va: int | None = None) -> _Condition:
    text = f"ua ≥ {ua}" + (f", va ≥ {va}" if va is not None else "")

    def check(p: dict[str, int]) -> bool:
        if p["u"] * p["a"] < ua:
            return False
        return va is None or p["v"] * p["a"] >= va

    return text, check


_HURWITZ_ODD: _Condition = ("a, n ≥ 5", lambda p: p["a"] >= 5 and p["n"] >= 5)

# Size conditions under which a tabulated tail holds from k0 = 1 on.
SIZE_CONDITIONS: dict[TailKey, _Condition] = {
    **{("hurwitz", _C3, case): _HURWITZ_ODD for case in DecompCase},
    ("tasoev1", _C1, _TM): _products(4),
    **{("tasoev1", _C2, case): _products(3) for case in DecompCase},
    ("tasoev2", _C1, _TM): _products(4, 4),
    **{("tasoev2", _C2, case): _products(3, 3) for case in DecompCase},
    **{("tasoev2", _C3, case): _products(3, 4) for case in DecompCase},
    **{("tasoev2", _C4, case): _products(4, 3) for case in DecompCase},
}


def family_tail(f: Family, case: DecompCase, k0: int | None = None) -> QuasiPeriodicCF:
    """
    The tabulated tail of σ(f) for a σ of decomposition *case*.

    Tasoev tails start at k0 = 1 once their size conditions hold; Hurwitz
    tails start by default at the first k where every coefficient is ≥ 1.
    """
    cls = family_class(f)
    key = (f.kind, cls, case)
    if key not in FAMILY_TAILS:
        raise NotApplicable(f"No tabulated tail for {f} ({cls.value}, {case.value})")
    condition = SIZE_CONDITIONS.get(key)
    if condition is not None and not condition[1](f.params):
        raise NotApplicable(f"Tail of {f} for {case.value} needs {condition[0]}")

    x = family_stream(f)
    tc = tail_case(cls, case)
    if k0 is None:
        k0 = first_applicable_start(tc, x) if isinstance(f, HurwitzHN) else 1
    elif k0 < 1 or not applicability(tc, x, k0):
        raise NotApplicable(f"Tail of {f} for {case.value} does not hold from k0={k0}")
    tail = parse_cf(f"[; {FAMILY_TAILS[key].format(**f.params)} @ k={k0}..]")
    logger.debug("Tail of %s for %s: %s", f, case.value, tail)
    return tail


# ──────────────────────────────────────────────
# Closed forms for h(a, n)
# ──────────────────────────────────────────────


def _rising(n: int, lo: int, hi: int) -> int:
    """∏ (kn + 1) for k = lo..hi; 1 when the range is empty."""
    return prod(k * n + 1 for k in range(lo, hi + 1))


def hurwitz_Hp_closed(a: int, n: int, p: int) -> Convergent:
    """Unreduced p-th convergent of h(a, n) from its binomial sums."""
    if p < 0:
        raise ValueError(f"p must be ≥ 0, got {p}")
    num = sum(
        a ** (p - 2 * i + 1) * comb(p - i + 1, i) * _rising(n, i, p - i)
        for i in range((p + 1) // 2 + 1)
    )
    den = sum(
        a ** (p - 2 * i) * comb(p - i, i) * _rising(n, i + 1, p - i)
        for i in range(p // 2 + 1)
    )
    return Convergent(num, den)


def hurwitz_Bp_closed(sigma: LFT, a: int, n: int, p: int) -> Fraction:
    """σ(H_p(a, n)) from the closed form; PoleError when the denominator vanishes."""
    if p < 0:
        raise ValueError(f"p must be ≥ 0, got {p}")
    A, B, C, D = sigma.mat.a, sigma.mat.b, sigma.mat.c, sigma.mat.d
    delta = p % 2
    num = den = 0
    for i in range(p // 2 + 1):
        scale = a ** (p - 2 * i) * _rising(n, i + 1, p - i)
        upper = a * (i * n + 1) * comb(p - i + 1, i)
        lower = comb(p - i, i)
        num += scale * (A * upper + B * lower)
        den += scale * (C * upper + D * lower)
    return TransformedConvergent(num + A * delta, den + C * delta).value


def komatsu_special_check(
    a: int, n: int, p_max: int, *, horizon: int = DEFAULT_ALIGN_HORIZON
) -> VerificationReport:
    """
    M(h(a, n)) for even a is [1, αk + β, 1, 1]_{k≥1} with α = an/2 and
    β = (a(1 − n) − 2)/2; along every third convergent it meets σ applied to
    the convergents of h(a, n): U_{3p}/V_{3p} = B_{p−1}.
    """
    if a % 2:
        raise NotApplicable(f"The special case needs even a, got {a}")
    _require_positive(a=a, n=n)
    alpha, beta = a * n // 2, (a * (1 - n) - 2) // 2
    if alpha + beta < 1:
        raise NotApplicable(f"α + β = {alpha + beta} for (a, n) = ({a}, {n}); quotient must be ≥ 1")

    sigma = LFT(M)
    x = Replay(family_stream(HurwitzHN(a, n)).stream())
    y = Replay(apply_lft_stream(sigma, x.replay()))
    length = max(horizon, 3 * p_max + 1)
    expected = [1]
    k = 1
    while len(expected) < length:
        expected.extend((alpha * k + beta, 1, 1))
        k += 1
    observed = y.prefix(length)
    if observed != expected[:length]:
        raise NotApplicable(f"M(h({a},{n})) does not start as [1, αk + β, 1, 1]")

    x_table, y_table = ConvergentTable(x), ConvergentTable(y)
    report = VerificationReport(branch=f"komatsu:h({a},{n})", p_range=(1, p_max))
    report.details.update({"alpha": alpha, "beta": beta})
    for p in range(1, p_max + 1):
        u, v = y_table[3 * p]
        rhs = transformed_convergent(sigma, x_table, p - 1).value
        report.record(p, Fraction(u, v), rhs, label=f"U/V_{3 * p}")
    logger.info("%s: %d passed, %d failed", report.branch, report.pass_count, report.fail_count)
    return report
