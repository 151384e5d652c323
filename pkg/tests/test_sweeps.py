"""Tests for the verification sweeps (small sizes)."""

import random

from cfleap.cf import CFClass, classify_qp
from cfleap.families import family_class, family_stream
from cfleap.sweeps import (
    block_sweep,
    decomposition_sweep,
    leaping_sweep,
    lemma_sweep,
    oracle_sweep,
    random_class_member,
    random_family_member,
    random_matrix,
    selftest,
    tail_sweep,
)


class TestRandomInputs:
    """Generators used by the randomized sweeps."""

    def test_random_matrix_det_and_bound(self) -> None:
        rng = random.Random(11)
        for _ in range(100):
            m = random_matrix(rng, (2, -2), 7)
            assert m.det in (2, -2)
            assert max(abs(v) for v in (m.a, m.b, m.c, m.d)) <= 7

    def test_random_matrix_is_seeded(self) -> None:
        first = [random_matrix(random.Random(4), (1, -1), 9) for _ in range(3)]
        second = [random_matrix(random.Random(4), (1, -1), 9) for _ in range(3)]
        assert first == second

    def test_class_members_have_their_class(self) -> None:
        rng = random.Random(8)
        for cls in (CFClass.CF1, CFClass.CF2, CFClass.CF3, CFClass.CF4):
            for _ in range(10):
                x = random_class_member(rng, cls, 20)
                assert classify_qp(x).cf_class is cls, str(x)

    def test_family_members_have_their_class(self) -> None:
        rng = random.Random(9)
        for cls in (CFClass.CF1, CFClass.CF2, CFClass.CF3, CFClass.CF4):
            for _ in range(10):
                member = random_family_member(rng, cls)
                assert family_class(member) is cls, str(member)
                assert classify_qp(family_stream(member)).cf_class is cls, str(member)


class TestSweeps:
    """Every sweep passes on a small instance."""

    def test_lemma_sweep(self) -> None:
        report = lemma_sweep()
        assert report.ok
        # 4 identities for every h, 4 for odd h, 3 for even h in −20..20
        assert report.pass_count == 4 * 41 + 4 * 20 + 3 * 21

    def test_decomposition_sweep(self) -> None:
        report = decomposition_sweep(count=200, seed=1)
        assert report.ok
        assert report.pass_count == 600

    def test_block_sweep(self) -> None:
        report = block_sweep(max_quotient=5)
        assert report.ok
        assert report.details["instances"] > 0
        assert report.pass_count == report.details["instances"]

    def test_oracle_sweep(self) -> None:
        report = oracle_sweep(
            rational_count=60, unimodular_count=5, entry_bound=6, horizon=30, seed=2
        )
        assert report.ok, report.failures[:3]
        assert report.pass_count + report.details["skipped_poles"] == 65

    def test_tail_sweep(self) -> None:
        report = tail_sweep(instances=2, horizon=40, seed=5)
        assert report.ok, report.failures[:3]
        assert report.pass_count + report.details["not_applicable"] == 24

    def test_leaping_sweep(self) -> None:
        report = leaping_sweep(instances=2, p_max=30, diagonal_p_max=40, seed=6)
        assert report.ok, report.failures[:3]
        # each applicable instance records one or two passing checks
        assert report.pass_count >= 24 - report.details["not_applicable"]
        assert report.details["not_applicable"] < 24

    def test_selftest(self) -> None:
        reports = selftest(seed=3, max_quotient=4)
        assert [r.branch for r in reports] == ["anchors", "lemma", "blocks", "decomposition"]
        assert all(r.ok for r in reports)
