"""
Tails of σ(x) for det ±2 transforms σ = T·W.

For x in one of the four parity classes and W one of the three
decomposition words, σ(x) = T(y) where y has an explicit expansion: a short
head followed by blocks built from x's partial quotients. Since T is
unimodular, σ(x) and y share their tails. Twelve (class, case) pairs give
twelve tail shapes, labelled t1.1 … t4.3.

A tail block k consumes c consecutive quotients of x (c is the block's
arity) and maps each through one of a few affine maps:

    (q - 1)/2   (q - 2)/2   q/2   2q   2q + 1   or the constant 1
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable, Iterator, Sequence
from dataclasses import dataclass
from math import lcm

from cfleap.cf.classify import CFClass, classify_qp
from cfleap.cf.expr import K, Expr, Num, fold_constants
from cfleap.cf.quasi import QuasiPeriodicCF
from cfleap.cf.stream import Replay
from cfleap.config import APPLICABILITY_WINDOW, DEFAULT_ALIGN_HORIZON, MAX_ALIGN_OFFSET
from cfleap.det2 import DecompCase, decompose
from cfleap.exact import AUX_A, LFT, J, M, Matrix2x2, cf_word, rl_word_to_matrix
from cfleap.errors import (
    ArityError,
    BadDeterminant,
    ClassMismatch,
    NonIntegerCoefficient,
    NotApplicable,
    ParityError,
)
from cfleap.gosper import apply_lft_stream
from cfleap.report import VerificationReport

logger = logging.getLogger(__name__)

QuotientAt = Callable[[int], int]


# ──────────────────────────────────────────────
# Quotient maps
# ──────────────────────────────────────────────


@dataclass(frozen=True)
class QuotientMap:
    """q ↦ (mul·q + add)/div applied to quotient *index*; a constant if index is None."""

    index: int | None
    mul: int = 1
    add: int = 0
    div: int = 1

    def apply(self, q: int) -> int:
        value, rem = divmod(self.mul * q + self.add, self.div)
        if rem:
            raise NonIntegerCoefficient(f"({self.mul}·{q} + {self.add})/{self.div}")
        return value

    def value(self, quotient_at: QuotientAt, base: int = 0) -> int:
        if self.index is None:
            return self.add
        return self.apply(quotient_at(base + self.index))

    def to_expr(self, source: Expr) -> Expr:
        if self.index is None:
            return Num(self.add)
        expr = source if self.mul == 1 else self.mul * source
        if self.add > 0:
            expr = expr + self.add
        elif self.add < 0:
            expr = expr - (-self.add)
        if self.div != 1:
            expr = expr / self.div
        return expr


ONE = QuotientMap(None, 0, 1, 1)


def sub1_half(i: int) -> QuotientMap:
    return QuotientMap(i, 1, -1, 2)


def sub2_half(i: int) -> QuotientMap:
    return QuotientMap(i, 1, -2, 2)


def half(i: int) -> QuotientMap:
    return QuotientMap(i, 1, 0, 2)


def double(i: int) -> QuotientMap:
    return QuotientMap(i, 2, 0, 1)


def double_plus_one(i: int) -> QuotientMap:
    return QuotientMap(i, 2, 1, 1)


# ──────────────────────────────────────────────
# Tail templates
# ──────────────────────────────────────────────


@dataclass(frozen=True)
class TailTemplate:
    """Block k of the tail uses quotient indices arity·k + slot.index."""

    label: str
    arity: int
    slots: tuple[QuotientMap, ...]
    # leaping branch of the convergent identities
    branch: str

    def block(self, quotient_at: QuotientAt, k: int) -> list[int]:
        return [slot.value(quotient_at, self.arity * k) for slot in self.slots]

    @property
    def first_offset(self) -> int:
        return min(s.index for s in self.slots if s.index is not None)


_S1, _S2, _H, _D = sub1_half, sub2_half, half, double

TAIL_TEMPLATES: dict[str, TailTemplate] = {
    t.label: t
    for t in (
        TailTemplate("t1.1", 1, (_S2(-1), ONE, ONE), "eqconv1"),
        TailTemplate("t1.2", 2, (_H(-2), _D(-1)), "eqconv4"),
        TailTemplate("t1.3", 2, (_H(-1), _D(0)), "eqconv4"),
        TailTemplate("t2.1", 3, (_S1(-3), _D(-2), _S1(-1), ONE, ONE), "eqconv2"),
        TailTemplate("t2.2", 3, (_S1(-2), _D(-1), _S1(0), ONE, ONE), "eqconv2"),
        TailTemplate("t2.3", 3, (_S1(-1), _D(0), _S1(1), ONE, ONE), "eqconv2"),
        TailTemplate(
            "t3.1", 4, (_S1(-4), _D(-3), _S1(-2), ONE, ONE, _S2(-1), ONE, ONE), "eqconv3"
        ),
        TailTemplate(
            "t3.2", 4, (_S1(-2), _D(-1), _S1(0), ONE, ONE, _S2(1), ONE, ONE), "eqconv3"
        ),
        TailTemplate("t3.3", 2, (_H(-1), _D(0)), "eqconv4"),
        TailTemplate(
            "t4.1", 4, (_S1(-3), _D(-2), _S1(-1), ONE, ONE, _S2(0), ONE, ONE), "eqconv3"
        ),
        TailTemplate("t4.2", 2, (_H(-2), _D(-1)), "eqconv4"),
        TailTemplate(
            "t4.3", 4, (_S1(-1), _D(0), _S1(1), ONE, ONE, _S2(2), ONE, ONE), "eqconv3"
        ),
    )
}

_C1, _C2, _C3, _C4 = CFClass.CF1, CFClass.CF2, CFClass.CF3, CFClass.CF4
_TM, _TMR, _TMRJ = DecompCase.TM, DecompCase.TMR, DecompCase.TMRJ

TAIL_LABELS: dict[tuple[CFClass, DecompCase], str] = {
    (_C1, _TM): "t1.1", (_C1, _TMR): "t1.2", (_C1, _TMRJ): "t1.3",
    (_C2, _TM): "t2.1", (_C2, _TMR): "t2.2", (_C2, _TMRJ): "t2.3",
    (_C3, _TM): "t3.1", (_C3, _TMR): "t3.2", (_C3, _TMRJ): "t3.3",
    (_C4, _TM): "t4.1", (_C4, _TMR): "t4.2", (_C4, _TMRJ): "t4.3",
}  # fmt: skip

# Quotients of y before tail block 1, with T = I.
HEADS: dict[tuple[CFClass, DecompCase], tuple[QuotientMap, ...]] = {
    (_C1, _TM): (ONE,),
    (_C1, _TMR): (ONE,),
    (_C1, _TMRJ): (double_plus_one(0),),
    (_C2, _TM): (ONE,),
    (_C2, _TMR): (ONE, _S1(0), ONE, ONE),
    (_C2, _TMRJ): (double_plus_one(0), _S1(1), ONE, ONE),
    (_C3, _TM): (ONE,),
    (_C3, _TMR): (ONE, _S1(0), ONE, ONE, _S2(1), ONE, ONE),
    (_C3, _TMRJ): (double_plus_one(0),),
    (_C4, _TM): (ONE, _S2(0), ONE, ONE),
    (_C4, _TMR): (ONE,),
    (_C4, _TMRJ): (double_plus_one(0), _S1(1), ONE, ONE, _S2(2), ONE, ONE),
}


@dataclass(frozen=True)
class TailCase:
    cf_class: CFClass
    case: DecompCase

    @property
    def label(self) -> str:
        return TAIL_LABELS[(self.cf_class, self.case)]

    @property
    def template(self) -> TailTemplate:
        return TAIL_TEMPLATES[self.label]

    @property
    def head(self) -> tuple[QuotientMap, ...]:
        return HEADS[(self.cf_class, self.case)]

    def __str__(self) -> str:
        return f"{self.label} ({self.cf_class.value}, {self.case.value})"


def tail_case(cf_class: CFClass, case: DecompCase) -> TailCase:
    if cf_class is CFClass.UNKNOWN:
        raise ClassMismatch("Input is not in any of the classes CF1–CF4")
    return TailCase(cf_class, case)


def tail_block(label: str, quotient_at: QuotientAt, k: int) -> list[int]:
    """Block k of tail *label* evaluated on x's quotients."""
    if label not in TAIL_TEMPLATES:
        available = ", ".join(TAIL_TEMPLATES)
        raise KeyError(f"Unknown tail '{label}'. Available: {available}")
    return TAIL_TEMPLATES[label].block(quotient_at, k)


def transformed_quotients(tc: TailCase, quotient_at: QuotientAt, blocks: int) -> list[int]:
    """The expansion of y = W(x): head then tail blocks 1..blocks."""
    head = [slot.value(quotient_at) for slot in tc.head]
    body: list[int] = []
    for k in range(1, blocks + 1):
        body.extend(tc.template.block(quotient_at, k))
    return head + body


def transformed_quotient(tc: TailCase, quotient_at: QuotientAt, i: int) -> int:
    """Quotient i of y = W(x)."""
    if i < len(tc.head):
        return tc.head[i].value(quotient_at)
    block, r = divmod(i - len(tc.head), len(tc.template.slots))
    return tc.template.block(quotient_at, block + 1)[r]


def block_position(tc: TailCase, k: int) -> int:
    """Index in the expansion of y where tail block k starts."""
    return len(tc.head) + (k - 1) * len(tc.template.slots)


# ──────────────────────────────────────────────
# Block identities
# ──────────────────────────────────────────────

_LetterMap = tuple[str, QuotientMap]


@dataclass(frozen=True)
class BlockIdentity:
    """
    (case word)·(R/L word of the block's quotients) = (output word)·residual.

    Covers the rewrite from the case word through at least one steady
    period, ending on the residual the steady state keeps.
    """

    name: str
    cf_class: CFClass
    case: DecompCase
    arity: int
    output: tuple[_LetterMap, ...]
    residual: Matrix2x2

    def output_word(self, quotients: Sequence[int]) -> list[tuple[str, int]]:
        return [(letter, qm.value(quotients.__getitem__)) for letter, qm in self.output]


def _rl(*maps: QuotientMap) -> tuple[_LetterMap, ...]:
    return tuple(("R" if i % 2 == 0 else "L", qm) for i, qm in enumerate(maps))


_DP1 = double_plus_one

BLOCK_IDENTITIES: dict[str, BlockIdentity] = {
    b.name: b
    for b in (
        BlockIdentity("CF1-TM", _C1, _TM, 2,
                      _rl(ONE, _S2(0), ONE, ONE, _S2(1), ONE), M),
        BlockIdentity("CF1-TMR", _C1, _TMR, 4,
                      _rl(ONE, _H(0), _D(1), _H(2), _D(3)), AUX_A),
        BlockIdentity("CF1-TMRJ", _C1, _TMRJ, 4,
                      _rl(_DP1(0), _H(1), _D(2), _H(3)), AUX_A * J),
        BlockIdentity("CF2-TM", _C2, _TM, 6,
                      _rl(ONE, _S1(0), _D(1), _S1(2), ONE, ONE,
                          _S1(3), _D(4), _S1(5), ONE), M),
        BlockIdentity("CF2-TMR", _C2, _TMR, 4,
                      _rl(ONE, _S1(0), ONE, ONE, _S1(1), _D(2), _S1(3), ONE), M),
        BlockIdentity("CF2-TMRJ", _C2, _TMRJ, 5,
                      _rl(_DP1(0), _S1(1), ONE, ONE, _S1(2), _D(3), _S1(4), ONE), M * J),
        BlockIdentity("CF3-TM", _C3, _TM, 4,
                      _rl(ONE, _S1(0), _D(1), _S1(2), ONE, ONE, _S2(3), ONE), M),
        BlockIdentity("CF3-TMR", _C3, _TMR, 2,
                      _rl(ONE, _S1(0), ONE, ONE, _S2(1), ONE), M),
        BlockIdentity("CF3-TMRJ", _C3, _TMRJ, 4,
                      _rl(_DP1(0), _H(1), _D(2), _H(3)), AUX_A * J),
        BlockIdentity("CF4-TM", _C4, _TM, 4,
                      _rl(ONE, _S2(0), ONE, ONE, _S1(1), _D(2), _S1(3), ONE), M),
        BlockIdentity("CF4-TMR", _C4, _TMR, 4,
                      _rl(ONE, _H(0), _D(1), _H(2), _D(3)), AUX_A),
        BlockIdentity("CF4-TMRJ", _C4, _TMRJ, 3,
                      _rl(_DP1(0), _S1(1), ONE, ONE, _S2(2), ONE), M * J),
    )
}  # fmt: skip


def block_identity_check(bi: BlockIdentity, quotients: Sequence[int]) -> VerificationReport:
    """Multiply out both sides of a block identity for concrete quotients."""
    if len(quotients) != bi.arity:
        raise ArityError(f"{bi.name} takes {bi.arity} quotients, got {len(quotients)}")
    for i, q in enumerate(quotients):
        if q < 1 or q % 2 != bi.cf_class.expected_parity(i):
            raise ParityError(
                f"{bi.name}: quotient {i} = {q} breaks the {bi.cf_class.value} pattern"
            )
    lhs = bi.case.word * rl_word_to_matrix(cf_word(quotients))
    rhs = rl_word_to_matrix(bi.output_word(quotients)) * bi.residual
    report = VerificationReport(branch=f"block:{bi.name}", p_range=(0, 0))
    report.record(0, lhs, rhs, label=",".join(str(q) for q in quotients))
    return report


# ──────────────────────────────────────────────
# Predicted tails of quasi-periodic inputs
# ──────────────────────────────────────────────


@dataclass(frozen=True)
class _Grouping:
    """How tail blocks line up with the coefficient period of x."""

    arity: int
    ell: int
    prefix_len: int
    start: int

    @property
    def span(self) -> int:
        return lcm(self.arity, self.ell)

    @property
    def blocks_per_period(self) -> int:
        return self.span // self.arity

    def offsets(self, template: TailTemplate) -> list[tuple[int, QuotientMap]]:
        """(index offset, slot) for one grouped period; index = span·k + offset."""
        m = self.blocks_per_period
        out = []
        for j in range(m):
            for slot in template.slots:
                if slot.index is None:
                    out.append((0, slot))
                else:
                    out.append((self.arity * (1 - m + j) + slot.index, slot))
        return out


def _grouping(tc: TailCase, coeffs: QuasiPeriodicCF) -> _Grouping:
    if coeffs.is_finite:
        raise NotApplicable("Tails are only predicted for unbounded expansions")
    return _Grouping(tc.template.arity, len(coeffs.period), len(coeffs.prefix), coeffs.start)


def min_tail_start(tc: TailCase, coeffs: QuasiPeriodicCF) -> int:
    """Smallest k0 ≥ 1 whose blocks read only periodic quotients of x."""
    g = _grouping(tc, coeffs)
    lowest = min(off for off, slot in g.offsets(tc.template) if slot.index is not None)
    need = g.prefix_len - lowest
    return max(1, -(-need // g.span))


def predicted_tail(tc: TailCase, coeffs: QuasiPeriodicCF, k0: int | None = None) -> QuasiPeriodicCF:
    """
    The tail of σ(x) as a quasi-periodic fraction starting at k = k0.

    When the period length ℓ of x does not divide into whole blocks, m =
    lcm(arity, ℓ)/arity consecutive blocks form one period and k counts
    those groups.
    """
    cls = classify_qp(coeffs).cf_class
    if cls is not tc.cf_class:
        raise ClassMismatch(f"{coeffs} is {cls.value}, tail {tc.label} needs {tc.cf_class.value}")
    g = _grouping(tc, coeffs)
    lowest_start = min_tail_start(tc, coeffs)
    if k0 is None:
        k0 = lowest_start
    elif k0 < lowest_start:
        raise NotApplicable(
            f"Tail {tc.label} at k0={k0} reads into the prefix of {coeffs}; "
            f"smallest admissible k0 is {lowest_start}"
        )
    stretch = g.span // g.ell
    exprs: list[Expr] = []
    for offset, slot in g.offsets(tc.template):
        if slot.index is None:
            exprs.append(slot.to_expr(K))
            continue
        pos = (offset - g.prefix_len) % g.ell
        shift = g.start + (offset - g.prefix_len) // g.ell
        source = coeffs.period[pos].substitute(_affine_k(stretch, shift))
        exprs.append(fold_constants(slot.to_expr(source)))
    return QuasiPeriodicCF((), tuple(exprs), k0)


def _affine_k(stretch: int, shift: int) -> Expr:
    expr: Expr = K if stretch == 1 else stretch * K
    if shift > 0:
        return expr + shift
    if shift < 0:
        return expr - (-shift)
    return expr


def _tail_values_ok(tail: QuasiPeriodicCF, k: int) -> bool:
    try:
        return all(e.evaluate(k) >= 1 for e in tail.period)
    except NonIntegerCoefficient:
        return False


def applicability(
    tc: TailCase,
    coeffs: QuasiPeriodicCF,
    k0: int,
    *,
    window: int = APPLICABILITY_WINDOW,
) -> bool:
    """
    Whether the size conditions of tail *tc* hold for every block k ≥ k0.

    Decided exactly when every tail coefficient is nondecreasing in k (the
    first group is then the worst case), otherwise on *window* groups.
    """
    try:
        tail = predicted_tail(tc, coeffs, k0)
    except NotApplicable:
        return False
    if all(e.is_nondecreasing() for e in tail.period):
        ok = _tail_values_ok(tail, k0)
        logger.debug("Applicability of %s at k0=%d decided symbolically: %s", tc.label, k0, ok)
        return ok
    ok = all(_tail_values_ok(tail, k) for k in range(k0, k0 + window))
    logger.debug("Applicability of %s at k0=%d checked on %d groups: %s", tc.label, k0, window, ok)
    return ok


def first_applicable_start(
    tc: TailCase, coeffs: QuasiPeriodicCF, *, limit: int = APPLICABILITY_WINDOW
) -> int:
    """Smallest admissible k0 at which the tail conditions hold."""
    k0 = min_tail_start(tc, coeffs)
    for k in range(k0, k0 + limit):
        if applicability(tc, coeffs, k):
            return k
    raise NotApplicable(f"Tail {tc.label} does not apply to {coeffs} for k0 < {k0 + limit}")


def first_applicable_block(
    tc: TailCase, quotient_at: QuotientAt, *, window: int = APPLICABILITY_WINDOW
) -> int:
    """Numeric version: smallest k ≥ 1 with valid blocks on k .. k + window."""

    def valid(k: int) -> bool:
        try:
            return all(v >= 1 for v in tc.template.block(quotient_at, k))
        except NonIntegerCoefficient:
            return False

    checked = {k: valid(k) for k in range(1, 2 * window + 1)}
    for k in range(1, window + 1):
        if all(checked[j] for j in range(k, k + window)):
            return k
    raise NotApplicable(f"No block window of {window} satisfies tail {tc.label}")


# ──────────────────────────────────────────────
# Alignment
# ──────────────────────────────────────────────


@dataclass(frozen=True)
class TailAlignment:
    """observed[n + t] == predicted tail from k = predicted_k, for t < horizon."""

    observed_offset: int
    predicted_k: int
    horizon: int

    def __str__(self) -> str:
        return f"n={self.observed_offset} k'={self.predicted_k} (horizon {self.horizon})"


def _matches(
    observed: Replay,
    values: Sequence[int],
    block_len: int,
    k_first: int,
    k_count: int,
    horizon: int,
    max_offset: int,
) -> Iterator[tuple[int, int]]:
    """Every (n, k) with observed[n:n+horizon] equal to the values from block k, n ascending."""
    for n in range(max_offset + 1):
        window = observed.window(n, horizon)
        if len(window) < horizon:
            return
        for i in range(k_count):
            at = i * block_len
            if values[at] != window[0]:
                continue
            if list(values[at : at + horizon]) == window:
                yield (n, k_first + i)


def align_tail(
    predicted: QuasiPeriodicCF,
    observed: Iterable[int] | Replay,
    horizon: int = DEFAULT_ALIGN_HORIZON,
    *,
    max_offset: int = MAX_ALIGN_OFFSET,
) -> TailAlignment | None:
    """
    Smallest (n, k′) in lexicographic order with k′ ≥ predicted.start such
    that the observed stream from index n agrees with the predicted period
    evaluated from k′ for *horizon* terms; None if there is none.
    """
    if predicted.is_finite:
        raise ValueError("Predicted tail must have a period")
    replay = observed if isinstance(observed, Replay) else Replay(observed)
    ell = len(predicted.period)
    k_count = max_offset // ell + 2
    groups = k_count + horizon // ell + 1
    values: list[int] = []
    for k in range(predicted.start, predicted.start + groups):
        values.extend(e.evaluate(k) for e in predicted.period)
    found = next(
        _matches(replay, values, ell, predicted.start, k_count, horizon, max_offset), None
    )
    if found is None:
        logger.debug("No alignment of %s within offset %d", predicted, max_offset)
        return None
    return TailAlignment(found[0], found[1], horizon)


def align_blocks(
    tc: TailCase,
    quotient_at: QuotientAt,
    observed: Replay,
    horizon: int = DEFAULT_ALIGN_HORIZON,
    *,
    k_min: int = 1,
    max_offset: int = MAX_ALIGN_OFFSET,
    accept: Callable[[int, int], bool] | None = None,
) -> TailAlignment | None:
    """
    align_tail against numeric blocks k ≥ k_min in x's own block numbering.

    With *accept*, the first match (n, k) it approves is returned instead of
    the first match outright.
    """
    block_len = len(tc.template.slots)
    k_count = max_offset // block_len + 2
    values: list[int] = []
    k = k_min
    while len(values) < k_count * block_len + horizon:
        values.extend(tc.template.block(quotient_at, k))
        k += 1
    for n, k in _matches(observed, values, block_len, k_min, k_count, horizon, max_offset):
        if accept is None or accept(n, k):
            return TailAlignment(n, k, horizon)
    return None


def verify_tail(
    sigma: LFT,
    x: QuasiPeriodicCF,
    horizon: int = DEFAULT_ALIGN_HORIZON,
    *,
    k0: int | None = None,
    max_offset: int = MAX_ALIGN_OFFSET,
) -> VerificationReport:
    """Stream σ(x) and compare it term by term with the predicted tail."""
    try:
        decomposition = decompose(sigma.mat)
    except BadDeterminant as e:
        raise NotApplicable(str(e)) from e
    tc = tail_case(classify_qp(x).cf_class, decomposition.case)
    if k0 is None:
        k0 = first_applicable_start(tc, x)
    predicted = predicted_tail(tc, x, k0)
    observed = Replay(apply_lft_stream(sigma, x.stream()))

    report = VerificationReport(branch=f"{tc.label}:tail", p_range=(0, horizon - 1))
    report.details.update({"case": str(tc), "k0": k0, "predicted": str(predicted)})
    alignment = align_tail(predicted, observed, horizon, max_offset=max_offset)
    if alignment is None:
        report.fail(0, observed.window(0, 10), predicted, label=f"no alignment within {max_offset}")
        return report

    n, k = alignment.observed_offset, alignment.predicted_k
    report.details.update({"n": n, "k_prime": k})
    expected: list[int] = []
    while len(expected) < horizon:
        expected.extend(predicted.period_values(k))
        k += 1
    for t in range(horizon):
        report.record(t, observed[n + t], expected[t])
    logger.info("%s aligned at %s", tc, alignment)
    return report
