"""
Randomized and exhaustive verification sweeps.

Each sweep returns a VerificationReport whose p index numbers the checked
instances. Randomized sweeps draw from ``random.Random(seed)`` so a run is
reproducible from its seed.
"""

from __future__ import annotations

import logging
import random
from collections.abc import Sequence
from fractions import Fraction
from itertools import islice, product

from cfleap.cf.classify import CFClass
from cfleap.cf.expr import K, Expr, Num
from cfleap.cf.quasi import QuasiPeriodicCF
from cfleap.config import (
    BLOCK_SWEEP_MAX_QUOTIENT,
    DECOMP_ENTRY_BOUND,
    DECOMP_SWEEP_COUNT,
    DEFAULT_ALIGN_HORIZON,
    DEFAULT_SEED,
    LEAPING_SWEEP_DIAGONAL_P_MAX,
    LEAPING_SWEEP_INSTANCES,
    LEAPING_SWEEP_P_MAX,
    LEMMA_H_RANGE,
    MAX_ALIGN_OFFSET,
    ORACLE_ENTRY_BOUND,
    ORACLE_RATIONAL_COUNT,
    ORACLE_UNIMODULAR_COUNT,
    TAIL_SWEEP_INSTANCES,
    TAIL_SWEEP_T_BOUND,
    TAIL_SWEEP_VALUE_BOUND,
)
from cfleap.det2 import DecompCase, case_predicates, decompose, lemma_identities, unit_matrix_check
from cfleap.errors import AlignmentError, NotApplicable, PoleError
from cfleap.exact import LFT, Matrix2x2, lft_apply
from cfleap.families import Family, HurwitzHN, TasoevT2, family_stream
from cfleap.gosper import apply_lft_finite, apply_lft_stream, cf_value, rational_to_cf, shares_tail
from cfleap.leaping import establish_context, verify_leaping, verify_recurrence
from cfleap.report import VerificationReport
from cfleap.tails import (
    BLOCK_IDENTITIES,
    align_tail,
    block_identity_check,
    first_applicable_start,
    predicted_tail,
    tail_case,
)

logger = logging.getLogger(__name__)


def random_matrix(rng: random.Random, dets: Sequence[int], bound: int) -> Matrix2x2:
    """A matrix with entries in [−bound, bound] and det in *dets*."""
    lo = -bound
    while True:
        a, b, c = (rng.randint(lo, bound) for _ in range(3))
        target = rng.choice(dets)
        if a == 0:
            if -b * c != target:
                continue
            d = rng.randint(lo, bound)
        else:
            d, rem = divmod(target + b * c, a)
            if rem or not lo <= d <= bound:
                continue
        return Matrix2x2(a, b, c, d)


# ──────────────────────────────────────────────
# Algebraic sweeps
# ──────────────────────────────────────────────


def lemma_sweep(h_range: tuple[int, int] = LEMMA_H_RANGE) -> VerificationReport:
    """Every rewriting identity at every admissible h in the range."""
    lo, hi = h_range
    report = VerificationReport(branch="lemma", p_range=(lo, hi))
    for ident in lemma_identities():
        for h in range(lo, hi + 1):
            if ident.applies_to(h):
                report.record(h, ident.lhs(h), ident.rhs(h), label=ident.name)
    logger.info("Identity sweep: %d checks, %d failures", report.pass_count, report.fail_count)
    return report


def decomposition_sweep(
    count: int = DECOMP_SWEEP_COUNT,
    entry_bound: int = DECOMP_ENTRY_BOUND,
    seed: int = DEFAULT_SEED,
) -> VerificationReport:
    """Random det ±2 matrices: one case holds and T·W rebuilds S exactly."""
    rng = random.Random(seed)
    report = VerificationReport(branch="decomposition", p_range=(0, count - 1))
    for i in range(count):
        s = random_matrix(rng, (2, -2), entry_bound)
        holding = sum(1 for ok in case_predicates(s).values() if ok)
        if not report.record(i, holding, 1, label=f"cases of {s}"):
            continue
        dec = decompose(s)
        report.record(i, dec.reconstruct(), s, label=str(dec))
        report.record(i, abs(dec.t.det), 1, label=f"det T for {s}")
    return report


def block_sweep(max_quotient: int = BLOCK_SWEEP_MAX_QUOTIENT) -> VerificationReport:
    """Every block identity on every quotient tuple of the right parities."""
    report = VerificationReport(branch="blocks", p_range=(1, max_quotient))
    checked = 0
    for bi in BLOCK_IDENTITIES.values():
        choices = [
            range(2 - bi.cf_class.expected_parity(i), max_quotient + 1, 2)
            for i in range(bi.arity)
        ]
        for quotients in product(*choices):
            report.extend(block_identity_check(bi, quotients))
            checked += 1
    report.details["instances"] = checked
    logger.info("Block sweep: %d instances, %d failures", checked, report.fail_count)
    return report


# ──────────────────────────────────────────────
# Streaming sweeps
# ──────────────────────────────────────────────


_NONZERO_DETS: tuple[int, ...] = tuple(d for d in range(-9, 10) if d)


def _random_rational(rng: random.Random, bound: int) -> Fraction:
    return Fraction(rng.randint(-bound * bound, bound * bound), rng.randint(1, bound * bound))


def _hurwitz_input(rng: random.Random) -> QuasiPeriodicCF:
    a, n = rng.randint(1, 9), rng.randint(1, 9)
    return QuasiPeriodicCF((), (a * (1 + n * K),), 0)


def oracle_sweep(
    rational_count: int = ORACLE_RATIONAL_COUNT,
    unimodular_count: int = ORACLE_UNIMODULAR_COUNT,
    entry_bound: int = ORACLE_ENTRY_BOUND,
    horizon: int = DEFAULT_ALIGN_HORIZON,
    seed: int = DEFAULT_SEED,
) -> VerificationReport:
    """
    Gosper output against exact evaluation on random rationals, and tail
    sharing under random unimodular maps.
    """
    rng = random.Random(seed)
    report = VerificationReport(
        branch="oracle", p_range=(0, rational_count + unimodular_count - 1)
    )
    skipped = 0
    for i in range(rational_count):
        x = _random_rational(rng, entry_bound)
        sigma = LFT(random_matrix(rng, _NONZERO_DETS, entry_bound))
        try:
            expected = lft_apply(sigma, x)
        except PoleError:
            skipped += 1
            continue
        got = cf_value(apply_lft_finite(sigma, rational_to_cf(x)))
        report.record(i, got, expected, label=f"{sigma} at {x}")

    length = horizon + MAX_ALIGN_OFFSET
    for j in range(unimodular_count):
        sigma = LFT(random_matrix(rng, (1, -1), entry_bound))
        x = _hurwitz_input(rng)
        left = list(islice(x.stream(), length))
        right = list(islice(apply_lft_stream(sigma, x.stream()), length))
        found = shares_tail(left, right, horizon)
        report.record(rational_count + j, found is not None, True, label=f"{sigma} on {x}")
    report.details["skipped_poles"] = skipped
    return report


def random_class_member(
    rng: random.Random, cf_class: CFClass, value_bound: int
) -> QuasiPeriodicCF:
    """A periodic-plus-linear fraction [c_j·k + d_j]_{k≥1} in *cf_class*."""
    ell = rng.choice((2, 4)) if cf_class in (CFClass.CF3, CFClass.CF4) else rng.randint(1, 3)
    period: list[Expr] = []
    for j in range(ell):
        parity = cf_class.expected_parity(j)
        slope = 2 * rng.randint(1, 3)
        d = rng.randrange(2 - parity, value_bound + 1, 2)
        period.append(slope * K + Num(d))
    return QuasiPeriodicCF((), tuple(period), 1)


def tail_sweep(
    instances: int = TAIL_SWEEP_INSTANCES,
    t_bound: int = TAIL_SWEEP_T_BOUND,
    value_bound: int = TAIL_SWEEP_VALUE_BOUND,
    horizon: int = DEFAULT_ALIGN_HORIZON,
    seed: int = DEFAULT_SEED,
) -> VerificationReport:
    """For all twelve tail cases, σ(x) from Gosper aligns with the predicted tail."""
    rng = random.Random(seed)
    report = VerificationReport(branch="tails", p_range=(0, instances - 1))
    not_applicable = 0
    for cls in (CFClass.CF1, CFClass.CF2, CFClass.CF3, CFClass.CF4):
        for case in DecompCase:
            tc = tail_case(cls, case)
            for i in range(instances):
                t = random_matrix(rng, (1, -1), t_bound)
                sigma = LFT(t * case.word)
                x = random_class_member(rng, cls, value_bound)
                try:
                    predicted = predicted_tail(tc, x, first_applicable_start(tc, x))
                except NotApplicable:
                    not_applicable += 1
                    continue
                observed = apply_lft_stream(sigma, x.stream())
                alignment = align_tail(predicted, observed, horizon)
                report.record(
                    i, alignment is not None, True, label=f"{tc.label} {sigma} on {x}"
                )
    report.details["not_applicable"] = not_applicable
    logger.info("Tail sweep: %d aligned, %d failures", report.pass_count, report.fail_count)
    return report


def _odd(rng: random.Random, hi: int) -> int:
    return 2 * rng.randint(0, hi) + 1


def random_family_member(rng: random.Random, cf_class: CFClass) -> Family:
    """A Hurwitz or Tasoev member of *cf_class*; CF4 draws t2 with u even, v and a odd."""
    if cf_class is CFClass.CF1:
        return HurwitzHN(2 * rng.randint(1, 4), rng.randint(1, 5))
    if cf_class is CFClass.CF2:
        return HurwitzHN(_odd(rng, 3), 2 * rng.randint(1, 3))
    if cf_class is CFClass.CF3:
        return HurwitzHN(_odd(rng, 3), _odd(rng, 2))
    return TasoevT2(2 * rng.randint(1, 3), _odd(rng, 3), _odd(rng, 1))


def leaping_sweep(
    instances: int = LEAPING_SWEEP_INSTANCES,
    p_max: int = LEAPING_SWEEP_P_MAX,
    diagonal_p_max: int = LEAPING_SWEEP_DIAGONAL_P_MAX,
    t_bound: int = TAIL_SWEEP_T_BOUND,
    value_bound: int = TAIL_SWEEP_VALUE_BOUND,
    seed: int = DEFAULT_SEED,
) -> VerificationReport:
    """
    Leaping identities and recurrences for all twelve tail cases under
    σ = T·W with random unimodular T. Even instances draw a periodic-plus-linear
    member of the class, odd ones a Hurwitz or Tasoev member.
    """
    rng = random.Random(seed)
    report = VerificationReport(branch="leaping", p_range=(0, instances - 1))
    not_applicable = 0
    for cls in (CFClass.CF1, CFClass.CF2, CFClass.CF3, CFClass.CF4):
        for case in DecompCase:
            label = tail_case(cls, case).label
            for i in range(instances):
                sigma = LFT(random_matrix(rng, (1, -1), t_bound) * case.word)
                x = (
                    random_class_member(rng, cls, value_bound)
                    if i % 2 == 0
                    else family_stream(random_family_member(rng, cls))
                )
                try:
                    ctx = establish_context(sigma, x)
                except NotApplicable:
                    not_applicable += 1
                    continue
                except AlignmentError as e:
                    report.fail(i, x, sigma, label=f"{label}: {e}")
                    continue
                try:
                    if ctx.tail_case is not None and ctx.tail_case.template.branch == "eqconv4":
                        checks = [verify_leaping(ctx, diagonal_p_max)]
                    else:
                        checks = [verify_recurrence(ctx, p_max), verify_leaping(ctx, p_max)]
                except PoleError as e:
                    report.fail(i, x, sigma, label=f"{label}: {e}")
                    continue
                for check in checks:
                    report.record(
                        i, check.ok, True, label=f"{check.branch} {sigma} on {x}"
                    )
    report.details["not_applicable"] = not_applicable
    logger.info("Leaping sweep: %d passed, %d failures", report.pass_count, report.fail_count)
    return report


def selftest(
    seed: int = DEFAULT_SEED, max_quotient: int = BLOCK_SWEEP_MAX_QUOTIENT
) -> list[VerificationReport]:
    """Matrix anchors, the identity and block sweeps, and a seeded decomposition sweep."""
    anchors = VerificationReport(branch="anchors", p_range=(0, 0))
    anchors.record(0, unit_matrix_check(), True, label="M² = 2I, J² = I")
    return [anchors, lemma_sweep(), block_sweep(max_quotient), decomposition_sweep(seed=seed)]
