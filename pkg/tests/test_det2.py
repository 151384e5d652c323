"""Tests for det ±2 decomposition and the rewriting identities."""

import random

import pytest

from cfleap.det2 import (
    IDENTITIES,
    DecompCase,
    case_predicates,
    decompose,
    lemma_identities,
    t_word_if_nonneg,
    unit_matrix_check,
    verify_identity,
)
from cfleap.errors import BadDeterminant, ParityError
from cfleap.exact import IDENTITY, M, Matrix2x2, rl_word_to_matrix
from cfleap.sweeps import random_matrix


class TestDecompose:
    """S = T·W with T unimodular."""

    def test_case_words(self) -> None:
        assert DecompCase.TM.word == M
        assert DecompCase.TMR.word == Matrix2x2(1, 2, 1, 0)
        assert DecompCase.TMRJ.word == Matrix2x2(2, 1, 0, 1)

    def test_tm(self) -> None:
        dec = decompose(Matrix2x2(3, 1, 1, 1))
        assert dec.case is DecompCase.TM
        assert dec.t == Matrix2x2(2, 1, 1, 0)
        assert str(dec) == "case=TM T=[[2,1],[1,0]]"

    def test_words_decompose_with_identity(self) -> None:
        for case in DecompCase:
            dec = decompose(case.word)
            assert dec.case is case
            assert dec.t == IDENTITY

    def test_negative_det(self) -> None:
        s = Matrix2x2(1, 3, 1, 1)
        assert s.det == -2
        dec = decompose(s)
        assert dec.reconstruct() == s

    def test_wrong_det(self) -> None:
        with pytest.raises(BadDeterminant, match="det 3"):
            decompose(Matrix2x2(2, 1, 1, 2))

    def test_random_matrices(self) -> None:
        rng = random.Random(7)
        for _ in range(300):
            s = random_matrix(rng, (2, -2), 30)
            holding = [case for case, ok in case_predicates(s).items() if ok]
            assert len(holding) == 1
            dec = decompose(s)
            assert dec.case is holding[0]
            assert dec.reconstruct() == s
            assert abs(dec.t.det) == 1


class TestTWord:
    """R/L factorisation of T."""

    def test_rl(self) -> None:
        t = Matrix2x2(2, 1, 1, 1)
        word = t_word_if_nonneg(t)
        assert word == [("R", 1), ("L", 1)]
        assert rl_word_to_matrix(word) == t

    def test_identity_is_empty_word(self) -> None:
        assert t_word_if_nonneg(IDENTITY) == []

    def test_longer_word_round_trips(self) -> None:
        t = rl_word_to_matrix([("R", 3), ("L", 2), ("R", 1)])
        word = t_word_if_nonneg(t)
        assert word == [("R", 3), ("L", 2), ("R", 1)]

    def test_det_minus_one(self) -> None:
        assert t_word_if_nonneg(Matrix2x2(2, 1, 1, 0)) is None

    def test_negative_entry(self) -> None:
        assert t_word_if_nonneg(Matrix2x2(1, -1, 0, 1)) is None


class TestIdentities:
    """The rewriting identities used to move M through a word."""

    def test_all_identities_hold(self) -> None:
        for ident in lemma_identities():
            for h in range(-9, 10):
                if ident.applies_to(h):
                    assert ident.lhs(h) == ident.rhs(h), f"{ident.name} at h={h}"

    def test_eleven_identities(self) -> None:
        assert len(IDENTITIES) == 11

    def test_verify_identity(self) -> None:
        report = verify_identity("c3", 4)
        assert report.ok
        assert report.branch == "identity:c3"

    def test_parity_enforced(self) -> None:
        with pytest.raises(ParityError, match="odd h"):
            verify_identity("b1", 2)
        with pytest.raises(ParityError, match="even h"):
            verify_identity("c2", 3)

    def test_unknown_identity(self) -> None:
        with pytest.raises(KeyError, match="Unknown identity"):
            verify_identity("z9", 1)

    def test_unit_matrix_check(self) -> None:
        assert unit_matrix_check()
