"""
Leaping convergents of σ(x) for det ±2 transforms.

Let u_t/v_t be the convergents of x, U_t/V_t those of σ(x), and
B_t = σ(u_t/v_t). In general B_t is not a convergent of σ(x), but once the
tail of σ(x) is known some of them are: U_{f(p)}/V_{f(p)} = B_{l(p)} for
index functions f, l fixed by the tail shape. Along f the convergents also
satisfy three-term recurrences whose coefficients come from x's quotients.

Index functions, with p0 = n − 1 where n is the position of tail block k0
in the expansion of σ(x):

    s(p)   = p0 + 3p
    g(p)   = p0 + p + 2⌊p/3⌋
    h(p)   = p0 + 2p − 1 + sin((p + 1)π/2)
    l1(p)  = k0 + p − 2
    l2(p)  = 3k0 + p − 4 | −3 | −2          (t2.1 | t2.2 | t2.3)
    l34(p) = 4k0 + p − 5 | −3 | −4 | −2     (t3.1 | t3.2 | t4.1 | t4.3)

Every sine term is an integer in {−1, 0, 1}, looked up by residue.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from fractions import Fraction

from cfleap.cf.classify import classify, classify_qp
from cfleap.cf.quasi import QuasiPeriodicCF
from cfleap.cf.stream import Replay
from cfleap.config import (
    DEFAULT_ALIGN_HORIZON,
    DEFAULT_CLASSIFY_HORIZON,
    EQCONV4_MAX_THRESHOLD,
    LEAPING_P_MIN,
    MAX_ALIGN_OFFSET,
    RECURRENCE_P_MIN,
)
from cfleap.det2 import Decomposition, decompose
from cfleap.exact import IDENTITY, LFT, Matrix2x2
from cfleap.gosper import apply_lft_stream
from cfleap.errors import (
    AlignmentError,
    BadDeterminant,
    BranchRequired,
    IndexOutOfRange,
    NotApplicable,
    ParityError,
    PoleError,
)
from cfleap.report import VerificationReport
from cfleap.tails import (
    TailAlignment,
    TailCase,
    align_blocks,
    block_position,
    first_applicable_block,
    tail_case,
    transformed_quotient,
)

logger = logging.getLogger(__name__)

# ──────────────────────────────────────────────
# Residue tables
# ──────────────────────────────────────────────

_SIN_QUARTER: tuple[int, ...] = (0, 1, 0, -1)  # sin(mπ/2) by m mod 4


def sin_half_pi(m: int) -> int:
    return _SIN_QUARTER[m % 4]


def _two_to(e: int) -> Fraction:
    return Fraction(2) ** e


# Each exponent shifts by a multiple of 4 over one period, so one period suffices.
V_BY_MOD3: tuple[Fraction, ...] = tuple(
    _two_to(sin_half_pi(r + 1 + (r + 2) // 3)) for r in range(3)
)
G_FACTOR_BY_MOD3: tuple[Fraction, ...] = tuple(
    _two_to(sin_half_pi(r + 2 + (r + 1) // 3)) for r in range(3)
)
Z_BY_MOD4: tuple[Fraction, ...] = tuple(_two_to(sin_half_pi(r + 2)) for r in range(4))
H_FACTOR_BY_MOD4: tuple[Fraction, ...] = tuple(
    _two_to(sin_half_pi(r + 2 + (r + 2) // 4 - r // 4)) for r in range(4)
)

L2_OFFSETS: dict[str, int] = {"t2.1": -4, "t2.2": -3, "t2.3": -2}
L34_OFFSETS: dict[str, int] = {"t3.1": -5, "t3.2": -3, "t4.1": -4, "t4.3": -2}


# ──────────────────────────────────────────────
# Convergent caches
# ──────────────────────────────────────────────


class ConvergentTable:
    """Unreduced (p_t, q_t) of a quotient stream, including t = −1, −2."""

    def __init__(self, quotients: Replay) -> None:
        self.quotients = quotients
        self._pairs: list[tuple[int, int]] = [(0, 1), (1, 0)]

    def __getitem__(self, t: int) -> tuple[int, int]:
        if t < -2:
            raise IndexOutOfRange(f"Convergent index {t} is below −2")
        while len(self._pairs) <= t + 2:
            i = len(self._pairs) - 2
            a = self.quotients[i]
            (p2, q2), (p1, q1) = self._pairs[-2], self._pairs[-1]
            self._pairs.append((a * p1 + p2, a * q1 + q2))
        return self._pairs[t + 2]


@dataclass(frozen=True)
class TransformedConvergent:
    """(N_t, D_t) = (A·u_t + B·v_t, C·u_t + D·v_t)."""

    n: int
    d: int

    @property
    def value(self) -> Fraction:
        if self.d == 0:
            raise PoleError(f"σ maps this convergent to ∞ ({self.n}/0)")
        return Fraction(self.n, self.d)


def transformed_convergent(sigma: LFT, table: ConvergentTable, t: int) -> TransformedConvergent:
    u, v = table[t]
    m = sigma.mat
    return TransformedConvergent(m.a * u + m.b * v, m.c * u + m.d * v)


def B(sigma: LFT, x: QuasiPeriodicCF | Iterable[int], t: int) -> Fraction:
    """σ applied to the t-th convergent of x."""
    if t < 0:
        raise ValueError(f"t must be ≥ 0, got {t}")
    source = x.stream() if isinstance(x, QuasiPeriodicCF) else x
    return transformed_convergent(sigma, ConvergentTable(Replay(source)), t).value


# ──────────────────────────────────────────────
# Context
# ──────────────────────────────────────────────


@dataclass
class LeapingContext:
    sigma: LFT
    x: QuasiPeriodicCF | None
    tail_case: TailCase | None
    k0: int
    p0: int
    decomposition: Decomposition | None = None
    alignment: TailAlignment | None = None
    quotients: Replay = field(default_factory=lambda: Replay(()))
    observed: Replay = field(default_factory=lambda: Replay(()))
    x_table: ConvergentTable = field(init=False, repr=False)
    y_table: ConvergentTable = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.x_table = ConvergentTable(self.quotients)
        self.y_table = ConvergentTable(self.observed)

    def quotient(self, i: int) -> int:
        if i < 0:
            raise IndexOutOfRange(f"Quotient index {i} is before a_0")
        return self.quotients[i]

    def U(self, t: int) -> int:
        return self.y_table[t][0]

    def V(self, t: int) -> int:
        return self.y_table[t][1]

    def N(self, t: int) -> TransformedConvergent:
        return transformed_convergent(self.sigma, self.x_table, t)

    def B(self, t: int) -> Fraction:
        return self.N(t).value

    @property
    def label(self) -> str:
        if self.tail_case is None:
            raise BranchRequired("Context has no tail branch")
        return self.tail_case.label

    @property
    def first_block_index(self) -> int:
        """Index in x of the first quotient read by block k0."""
        template = self.tail_case.template if self.tail_case else None
        if template is None:
            raise BranchRequired("Context has no tail branch")
        return template.arity * self.k0 + template.first_offset


class _PrefixProducts:
    """[[a₀,1],[1,0]]···[[a_{n−1},1],[1,0]] for a quotient source, cached by n."""

    def __init__(self, quotient_at: Callable[[int], int]) -> None:
        self._at = quotient_at
        self._products = [IDENTITY]

    def __getitem__(self, n: int) -> Matrix2x2:
        while len(self._products) <= n:
            q = self._at(len(self._products) - 1)
            self._products.append(self._products[-1] * Matrix2x2(q, 1, 1, 0))
        return self._products[n]


def _same_map(m: Matrix2x2, other: Matrix2x2) -> bool:
    return m == other or m == Matrix2x2(-other.a, -other.b, -other.c, -other.d)


def _phase_check(
    tc: TailCase, t: Matrix2x2, quotients: Replay, observed: Replay
) -> Callable[[int, int], bool]:
    """
    Accept (n, k) only when the first n quotients of σ(x) compose to ±T times
    the quotients of y before block k. A periodic tail matches at many
    offsets; only this one carries the convergents of y over to σ(x).
    """
    ys = _PrefixProducts(lambda i: transformed_quotient(tc, quotients.__getitem__, i))
    sigmas = _PrefixProducts(observed.__getitem__)

    def accept(n: int, k: int) -> bool:
        return _same_map(sigmas[n], t * ys[block_position(tc, k)])

    return accept


def establish_context(
    sigma: LFT,
    x: QuasiPeriodicCF | Iterable[int],
    *,
    horizon: int = DEFAULT_ALIGN_HORIZON,
    classify_horizon: int = DEFAULT_CLASSIFY_HORIZON,
    max_offset: int = MAX_ALIGN_OFFSET,
) -> LeapingContext:
    """
    Classify x, decompose σ, and align the expansion of σ(x) with the tail
    blocks of the matching case.
    """
    try:
        decomposition = decompose(sigma.mat)
    except BadDeterminant as e:
        raise NotApplicable(str(e)) from e

    qp = x if isinstance(x, QuasiPeriodicCF) else None
    quotients = Replay(qp.stream() if qp is not None else x)
    if qp is not None:
        cls = classify_qp(qp, classify_horizon).cf_class
    else:
        cls = classify(quotients.replay(), classify_horizon).cf_class
    tc = tail_case(cls, decomposition.case)

    k_min = first_applicable_block(tc, quotients.__getitem__)
    observed = Replay(apply_lft_stream(sigma, quotients.replay()))
    alignment = align_blocks(
        tc,
        quotients.__getitem__,
        observed,
        horizon,
        k_min=k_min,
        max_offset=max_offset,
        accept=_phase_check(tc, decomposition.t, quotients, observed),
    )
    if alignment is None:
        alignment = align_blocks(
            tc, quotients.__getitem__, observed, horizon, k_min=k_min, max_offset=max_offset
        )
        if alignment is not None:
            logger.warning("No phase of %s carries T·y to σ(x); using %s", tc, alignment)
    if alignment is None:
        raise AlignmentError(
            f"σ(x) does not reach tail {tc.label} within {max_offset} quotients"
        )
    k0 = alignment.predicted_k
    p0 = alignment.observed_offset - 1
    logger.debug("Aligned %s: %s, k0=%d p0=%d", tc, alignment, k0, p0)
    return LeapingContext(
        sigma=sigma,
        x=qp,
        tail_case=tc,
        k0=k0,
        p0=p0,
        decomposition=decomposition,
        alignment=alignment,
        quotients=quotients,
        observed=observed,
    )


# ──────────────────────────────────────────────
# Index, weight and coefficient functions
# ──────────────────────────────────────────────


def _check_p(p: int) -> None:
    if p < 2:
        raise ValueError(f"Index functions are defined for p ≥ 2, got {p}")


def idx(name: str, p: int, ctx: LeapingContext) -> int:
    _check_p(p)
    if name == "s":
        return ctx.p0 + 3 * p
    if name == "g":
        return ctx.p0 + p + 2 * (p // 3)
    if name == "h":
        return ctx.p0 + 2 * p - 1 + sin_half_pi(p + 1)
    if name == "l1":
        return ctx.k0 + p - 2
    if name == "l2":
        offsets = L2_OFFSETS
    elif name == "l34":
        offsets = L34_OFFSETS
    else:
        raise KeyError(f"Unknown index function '{name}'. Available: s, g, h, l1, l2, l34")
    if ctx.tail_case is None or ctx.tail_case.label not in offsets:
        have = ctx.tail_case.label if ctx.tail_case else "none"
        raise BranchRequired(f"{name} needs a tail branch among {sorted(offsets)}, got {have}")
    scale = 3 if name == "l2" else 4
    return scale * ctx.k0 + p + offsets[ctx.tail_case.label]


def weight(name: str, p: int) -> Fraction:
    _check_p(p)
    if name == "v":
        return V_BY_MOD3[p % 3]
    if name == "z":
        return Z_BY_MOD4[p % 4]
    raise KeyError(f"Unknown weight '{name}'. Available: v, z")


def coeff(name: str, p: int, ctx: LeapingContext) -> Fraction:
    _check_p(p)
    if name == "G":
        d = ctx.quotient(idx("l2", p, ctx))
        return d * G_FACTOR_BY_MOD3[p % 3]
    if name == "H":
        i = idx("l34", p, ctx)
        a = ctx.quotient(i)
        # even p reads an even quotient, odd p an odd one
        if a % 2 != p % 2:
            kind = "odd" if p % 2 else "even"
            raise ParityError(f"H({p}) expects an {kind} quotient at a_{i}, got {a}")
        return a * H_FACTOR_BY_MOD4[p % 4]
    raise KeyError(f"Unknown coefficient '{name}'. Available: G, H")


# ──────────────────────────────────────────────
# Recurrences
# ──────────────────────────────────────────────


def _branch(ctx: LeapingContext) -> str:
    if ctx.tail_case is None:
        raise BranchRequired("Context has no tail branch")
    return ctx.tail_case.template.branch


def _rec_coefficients(branch: str, p: int, ctx: LeapingContext) -> tuple[Fraction, Fraction]:
    if branch == "eqconv1":
        return Fraction(ctx.quotient(idx("l1", p, ctx))), Fraction(1)
    if branch == "eqconv2":
        return coeff("G", p, ctx), weight("v", p)
    return coeff("H", p, ctx), weight("z", p)


def verify_recurrence(ctx: LeapingContext, p_max: int) -> VerificationReport:
    """Check the three-term recurrence of the context's tail along f(p)."""
    branch = _branch(ctx)
    label = ctx.label
    if branch == "eqconv4":
        raise NotApplicable(f"Tail {label} has no recurrence along a leaping index")
    f_name = {"eqconv1": "s", "eqconv2": "g", "eqconv3": "h"}[branch]
    report = VerificationReport(branch=f"{label}:rec", p_range=(RECURRENCE_P_MIN, p_max))
    for p in range(RECURRENCE_P_MIN, p_max + 1):
        c, w = _rec_coefficients(branch, p, ctx)
        f0, f1, f2 = (idx(f_name, q, ctx) for q in (p, p - 1, p - 2))
        for name, seq in (("U", ctx.U), ("V", ctx.V)):
            report.record(p, Fraction(seq(f0)), c * seq(f1) + w * seq(f2), label=f"{name}_{f0}")
    if branch == "eqconv1":
        _rec1_base(ctx, p_max, report)
    elif branch == "eqconv2":
        _rec2_steps(ctx, p_max, report)
    logger.info("%s: %d passed, %d failed", report.branch, report.pass_count, report.fail_count)
    return report


def _rec1_base(ctx: LeapingContext, p_max: int, report: VerificationReport) -> None:
    """The convergent relations the single-block tail imposes directly."""
    for p in range(2, p_max + 1):
        t = ctx.p0 + 3 * p
        e = ctx.quotient(ctx.k0 + p - 2)
        for name, seq in (("U", ctx.U), ("V", ctx.V)):
            checks = (
                (seq(t), seq(t - 1) + seq(t - 2)),
                (seq(t - 1), seq(t - 2) + seq(t - 3)),
                (2 * seq(t - 2), (e - 2) * seq(t - 3) + 2 * seq(t - 4)),
                (seq(t - 3), seq(t - 4) + seq(t - 5)),
                (seq(t - 4), seq(t - 5) + seq(t - 6)),
            )
            for j, (lhs, rhs) in enumerate(checks, start=1):
                report.record(p, lhs, rhs, label=f"base{j} {name}")


def _rec2_steps(ctx: LeapingContext, p_max: int, report: VerificationReport) -> None:
    """Intermediate relations for p = 3m, 3m + 1 of the odd-class proof."""
    for m in range(1, (p_max - 1) // 3 + 1):
        t = ctx.p0 + 5 * m
        d0 = ctx.quotient(idx("l2", 3 * m, ctx))
        d1 = ctx.quotient(idx("l2", 3 * m + 1, ctx))
        for name, seq in (("U", ctx.U), ("V", ctx.V)):
            checks = (
                (seq(t - 1), seq(t - 2) + seq(t - 3)),
                (2 * seq(t - 2), (d0 - 1) * seq(t - 3) + 2 * seq(t - 4)),
                (seq(t), seq(t - 1) + seq(t - 2)),
                (2 * seq(t + 1), (d1 - 1) * seq(t) + 2 * seq(t - 1)),
                (2 * seq(t - 1), seq(t) + seq(t - 3)),
            )
            for j, (lhs, rhs) in enumerate(checks, start=1):
                report.record(3 * m, lhs, rhs, label=f"step{j} {name}")


# ──────────────────────────────────────────────
# Leaping equalities
# ──────────────────────────────────────────────


def verify_leaping(
    ctx: LeapingContext, p_max: int, *, max_threshold: int = EQCONV4_MAX_THRESHOLD
) -> VerificationReport:
    """
    Check U_{f(p)}/V_{f(p)} = B_{l(p)}, or for two-quotient tails the shifted
    diagonal form, whose threshold may lie at most *max_threshold* past the
    first aligned block.
    """
    if ctx.alignment is None:
        raise AlignmentError("Context has no established alignment")
    branch = _branch(ctx)
    if branch == "eqconv4":
        return _verify_diagonal(ctx, p_max, max_threshold)
    f_name, l_name = {
        "eqconv1": ("s", "l1"),
        "eqconv2": ("g", "l2"),
        "eqconv3": ("h", "l34"),
    }[branch]
    report = VerificationReport(branch=f"{ctx.label}:{branch}", p_range=(LEAPING_P_MIN, p_max))
    report.details.update({"k0": ctx.k0, "p0": ctx.p0})
    sign: int | None = None
    for p in range(LEAPING_P_MIN, p_max + 1):
        f = idx(f_name, p, ctx)
        lhs = Fraction(ctx.U(f), ctx.V(f))
        report.record(p, lhs, ctx.B(idx(l_name, p, ctx)), label=f"U/V_{f}")
        if branch == "eqconv2":
            n = ctx.N(idx("l2", p, ctx))
            scale = 2 if p % 3 == 1 else 1
            u, v = scale * ctx.U(f), scale * ctx.V(f)
            # One sign for the whole context, fixed by the first p.
            if sign is None:
                sign = -1 if (u, v) == (-n.n, -n.d) else 1
                report.details["sign"] = sign
            report.record(p, u, sign * n.n, label=f"unreduced U_{f}")
            report.record(p, v, sign * n.d, label=f"unreduced V_{f}")
    logger.info("%s: %d passed, %d failed", report.branch, report.pass_count, report.fail_count)
    return report


def _verify_diagonal(ctx: LeapingContext, p_max: int, max_threshold: int) -> VerificationReport:
    """
    Tails with two-quotient blocks: U_{p+c}/V_{p+c} = B_p from some threshold
    on. The shift c is fixed by the alignment; c = 0 is the unshifted form.
    """
    assert ctx.alignment is not None
    shift = ctx.alignment.observed_offset - ctx.first_block_index
    report = VerificationReport(branch=f"{ctx.label}:eqconv4", p_range=(0, p_max))
    outcomes: list[tuple[int, Fraction, Fraction | None]] = []
    for p in range(max(0, -shift), p_max + 1):
        try:
            rhs: Fraction | None = ctx.B(p)
        except PoleError:
            rhs = None
        outcomes.append((p, Fraction(ctx.U(p + shift), ctx.V(p + shift)), rhs))
    threshold: int | None = None
    for p, lhs, rhs in reversed(outcomes):
        if lhs != rhs:
            break
        threshold = p
    report.threshold = threshold
    report.details.update(
        {"k0": ctx.k0, "p0": ctx.p0, "shift": shift, "unshifted_form": shift == 0}
    )
    if threshold is None:
        p, lhs, rhs = outcomes[-1]
        report.fail(p, lhs, rhs, label="no threshold")
        return report
    excess = threshold - ctx.first_block_index
    report.details["threshold_excess"] = excess
    if excess > max_threshold:
        report.fail(threshold, excess, max_threshold, label="threshold past the aligned block")
    for p, lhs, rhs in outcomes:
        if p >= threshold:
            report.record(p, lhs, rhs, label=f"U/V_{p + shift}")
    return report
