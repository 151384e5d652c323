"""Tests for the Hurwitz and Tasoev families."""

import random

import pytest

from cfleap.cf import CFClass, classify_qp, convergent_pairs, qp_evaluate
from cfleap.det2 import DecompCase
from cfleap.errors import NotApplicable, PoleError
from cfleap.exact import LFT, lft_apply
from cfleap.families import (
    FAMILY_TAILS,
    Family,
    HurwitzHN,
    TasoevT1,
    TasoevT2,
    family_class,
    family_stream,
    family_tail,
    hurwitz_Bp_closed,
    hurwitz_Hp_closed,
    komatsu_special_check,
)
from cfleap.gosper import apply_lft_stream
from cfleap.sweeps import random_matrix
from cfleap.tails import align_tail, predicted_tail, tail_case

# One member per (family, class) pair the tables cover.
SAMPLES: list[Family] = [
    HurwitzHN(4, 1),
    HurwitzHN(3, 2),
    HurwitzHN(5, 5),
    TasoevT1(2, 3),
    TasoevT1(3, 3),
    TasoevT2(2, 4, 3),
    TasoevT2(3, 5, 3),
    TasoevT2(3, 2, 3),
    TasoevT2(2, 3, 3),
]


class TestFamilies:
    """Parameters, streams and classes."""

    def test_streams(self) -> None:
        assert list(qp_evaluate(family_stream(HurwitzHN(2, 3)), 4)) == [2, 8, 14, 20]
        assert list(qp_evaluate(family_stream(TasoevT1(1, 2)), 4)) == [2, 4, 8, 16]
        assert list(qp_evaluate(family_stream(TasoevT2(3, 5, 3)), 4)) == [9, 15, 27, 45]

    def test_names(self) -> None:
        assert str(HurwitzHN(2, 3)) == "h(2,3)"
        assert str(TasoevT1(1, 2)) == "t1(1,2)"
        assert str(TasoevT2(3, 5, 3)) == "t2(3,5,3)"

    def test_parameters_must_be_positive(self) -> None:
        with pytest.raises(ValueError, match="a must be ≥ 1"):
            HurwitzHN(0, 1)
        with pytest.raises(ValueError, match="v must be ≥ 1"):
            TasoevT2(1, 0, 3)

    def test_class_matches_classifier(self) -> None:
        members: list[Family] = [
            *(HurwitzHN(a, n) for a in range(1, 7) for n in range(1, 7)),
            *(TasoevT1(u, a) for u in range(1, 5) for a in range(1, 5)),
            *(
                TasoevT2(u, v, a)
                for u in range(1, 4)
                for v in range(1, 4)
                for a in range(1, 4)
            ),
        ]
        for f in members:
            assert family_class(f) is classify_qp(family_stream(f)).cf_class, str(f)

    def test_sample_classes(self) -> None:
        classes = [family_class(f) for f in SAMPLES]
        assert classes == [
            CFClass.CF1, CFClass.CF2, CFClass.CF3,
            CFClass.CF1, CFClass.CF2,
            CFClass.CF1, CFClass.CF2, CFClass.CF3, CFClass.CF4,
        ]  # fmt: skip


class TestFamilyTails:
    """Tabulated tails against the generic prediction and the transducer."""

    def test_table_covers_every_reachable_class(self) -> None:
        assert len(FAMILY_TAILS) == 27

    def test_hurwitz_cf1_tm(self) -> None:
        tail = family_tail(HurwitzHN(4, 1), DecompCase.TM)
        assert tail.start == 1
        assert tail.period_values(1) == [1, 1, 1]
        assert tail.period_values(2) == [3, 1, 1]

    @pytest.mark.parametrize("family", SAMPLES, ids=str)
    @pytest.mark.parametrize("case", list(DecompCase))
    def test_table_matches_generic_tail(self, family: Family, case: DecompCase) -> None:
        tail = family_tail(family, case)
        x = family_stream(family)
        generic = predicted_tail(tail_case(family_class(family), case), x, tail.start)
        for k in range(tail.start, tail.start + 3):
            assert tail.period_values(k) == generic.period_values(k)

    @pytest.mark.parametrize("family", SAMPLES, ids=str)
    @pytest.mark.parametrize("case", list(DecompCase))
    def test_table_aligns_with_transducer(self, family: Family, case: DecompCase) -> None:
        tail = family_tail(family, case)
        observed = apply_lft_stream(LFT(case.word), family_stream(family).stream())
        assert align_tail(tail, observed, 20) is not None

    def test_size_condition(self) -> None:
        with pytest.raises(NotApplicable, match="ua ≥ 3"):
            family_tail(TasoevT1(1, 1), DecompCase.TM)

    def test_hurwitz_odd_needs_large_parameters(self) -> None:
        with pytest.raises(NotApplicable, match="a, n ≥ 5"):
            family_tail(HurwitzHN(3, 3), DecompCase.TMR)

    def test_explicit_k0(self) -> None:
        assert family_tail(HurwitzHN(4, 1), DecompCase.TM, k0=3).start == 3

    def test_k0_must_be_positive(self) -> None:
        with pytest.raises(NotApplicable, match="k0=0"):
            family_tail(HurwitzHN(4, 1), DecompCase.TM, k0=0)


class TestHurwitzClosedForms:
    """Binomial-sum convergents of h(a, n)."""

    def test_convergents(self) -> None:
        for a in range(1, 10):
            for n in range(1, 10):
                pairs = convergent_pairs(family_stream(HurwitzHN(a, n)).stream(), 30)
                for p, (num, den) in enumerate(pairs):
                    got = hurwitz_Hp_closed(a, n, p)
                    assert (got.p, got.q) == (num, den), f"h({a},{n}) p={p}"

    def test_negative_p(self) -> None:
        with pytest.raises(ValueError):
            hurwitz_Hp_closed(2, 1, -1)

    def test_transformed_convergents(self) -> None:
        rng = random.Random(3)
        checked = 0
        for _ in range(200):
            sigma = LFT(random_matrix(rng, (2, -2), 9))
            a, n, p = rng.randint(1, 9), rng.randint(1, 9), rng.randint(0, 12)
            try:
                expected = lft_apply(sigma, hurwitz_Hp_closed(a, n, p).value)
            except PoleError:
                with pytest.raises(PoleError):
                    hurwitz_Bp_closed(sigma, a, n, p)
                continue
            assert hurwitz_Bp_closed(sigma, a, n, p) == expected
            checked += 1
        assert checked > 150


class TestKomatsu:
    """M(h(a, n)) = [1, αk + β, 1, 1] for even a."""

    @pytest.mark.parametrize("a,n", [(4, 1), (6, 1), (4, 3)])
    def test_special_case(self, a: int, n: int) -> None:
        report = komatsu_special_check(a, n, 20)
        assert report.ok, report.failures[:3]
        assert report.pass_count == 20
        assert report.details["alpha"] == a * n // 2

    def test_beta(self) -> None:
        report = komatsu_special_check(4, 3, 5)
        assert report.details == {"alpha": 6, "beta": -5}

    def test_odd_a(self) -> None:
        with pytest.raises(NotApplicable, match="even a"):
            komatsu_special_check(3, 1, 5)

    def test_vanishing_quotient(self) -> None:
        with pytest.raises(NotApplicable, match="α \\+ β = 0"):
            komatsu_special_check(2, 2, 5)

