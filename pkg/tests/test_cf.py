"""Tests for quotient streams, expressions, the text notation and classes."""

import random
from fractions import Fraction

import pytest

from cfleap.cf import (
    K,
    BinOp,
    CFClass,
    Convergent,
    Expr,
    Num,
    QuasiPeriodicCF,
    QuotientStream,
    Replay,
    classify,
    classify_qp,
    convergent_pairs,
    convergents,
    fold_constants,
    format_cf,
    format_expr,
    parse_cf,
    parse_expr,
    qp_evaluate,
    tail,
)
from cfleap.cf.classify import class_of
from cfleap.errors import (
    NonIntegerCoefficient,
    NonPositiveQuotient,
    ParseError,
    PoleError,
    StreamExhausted,
)


class TestQuotientStream:
    """Validation and slicing of raw streams."""

    def test_first_quotient_may_be_non_positive(self) -> None:
        assert QuotientStream([-3, 1, 2]).take(3) == [-3, 1, 2]

    def test_later_quotient_must_be_positive(self) -> None:
        s = QuotientStream([1, 0])
        assert next(s) == 1
        with pytest.raises(NonPositiveQuotient, match="a_1 = 0"):
            next(s)

    def test_take_stops_at_end(self) -> None:
        s = QuotientStream([1, 2])
        assert s.take(5) == [1, 2]
        assert s.consumed == 2


class TestReplay:
    """Random access over a buffered stream."""

    def test_indexing_and_window(self) -> None:
        r = Replay(iter([3, 7, 15, 1]))
        assert r[2] == 15
        assert r.prefix(2) == [3, 7]
        assert r.window(2, 5) == [15, 1]
        assert r.available(4)
        assert not r.available(5)
        assert r.finished

    def test_read_past_end(self) -> None:
        r = Replay([3, 7])
        with pytest.raises(StreamExhausted, match="asked for a_4"):
            r[4]

    def test_replay_rereads(self) -> None:
        r = Replay(iter([3, 7, 15, 1]))
        assert list(r.replay()) == [3, 7, 15, 1]
        assert list(r.replay()) == [3, 7, 15, 1]

    def test_negative_index(self) -> None:
        with pytest.raises(IndexError):
            Replay([1])[-1]


class TestConvergents:
    """The (p, q) recurrence."""

    def test_pi_convergents(self) -> None:
        got = convergents([3, 7, 15, 1], 3)
        assert [(c.p, c.q) for c in got] == [(3, 1), (22, 7), (333, 106), (355, 113)]
        assert got[-1].value == Fraction(355, 113)

    def test_e_convergent(self, e_cf: QuasiPeriodicCF) -> None:
        assert convergents(e_cf.stream(), 4)[-1].value == Fraction(19, 7)

    def test_determinant_and_growth(self, e_cf: QuasiPeriodicCF) -> None:
        got = convergents(e_cf.stream(), 200)
        for n in range(1, 201):
            prev, cur = got[n - 1], got[n]
            assert cur.p * prev.q - prev.p * cur.q == (-1) ** (n + 1)
            if n >= 2:
                assert cur.q > prev.q

    def test_convergents_from_replay(self) -> None:
        r = Replay(iter([1, 1, 1, 1]))
        assert convergents(r, 3)[-1] == Convergent(5, 3)

    def test_too_short(self) -> None:
        with pytest.raises(StreamExhausted):
            convergent_pairs([1], 2)

    def test_zero_denominator(self) -> None:
        with pytest.raises(PoleError):
            Convergent(1, 0).value

    def test_tail(self) -> None:
        assert list(tail([1, 2, 3, 4], 1)) == [3, 4]

    def test_tail_of_exhausted_stream(self) -> None:
        with pytest.raises(StreamExhausted, match="tail is empty"):
            tail([1, 2], 1)


class TestExpr:
    """Coefficient expressions in k."""

    def test_evaluate(self) -> None:
        assert parse_expr("2*k+1").evaluate(3) == 7
        assert parse_expr("3*5^k").evaluate(2) == 75
        assert parse_expr("(k+1)/2").evaluate(3) == 2

    def test_inexact_division(self) -> None:
        with pytest.raises(NonIntegerCoefficient, match="not an integer"):
            parse_expr("(k+1)/2").evaluate(2)

    def test_negative_exponent(self) -> None:
        with pytest.raises(NonIntegerCoefficient, match="Negative exponent"):
            parse_expr("2^(0-k)").evaluate(1)

    def test_builders_match_parser(self) -> None:
        assert parse_expr("2*k+1") == 2 * K + 1

    def test_substitute(self) -> None:
        assert (2 * K + 1).substitute(K + 1).evaluate(1) == 5

    def test_parity(self) -> None:
        assert (2 * K + 1).parity() == (1, 1)
        assert K.parity() == (0, 1)
        assert parse_expr("3*5^k").parity() == (1, 1)
        assert parse_expr("2*3^k").parity() == (0, 0)

    def test_parity_of_even_power_depends_on_start(self) -> None:
        power = parse_expr("4^k")
        assert power.parity(0) == (None, None)
        assert power.parity(1) == (0, 0)

    def test_affine(self) -> None:
        assert (2 * K + 1).affine() == (2, 1)
        assert (K * K).affine() is None

    def test_fold_constants(self) -> None:
        assert fold_constants(parse_expr("(2-2)/2")) == Num(0)
        assert fold_constants(parse_expr("2*2")) == Num(4)
        assert fold_constants(parse_expr("1*(k+0)/1")) == K
        assert fold_constants(parse_expr("3/2")) == parse_expr("3/2")
        assert fold_constants(parse_expr("(k+1)/2")) == parse_expr("(k+1)/2")

    def test_nondecreasing(self) -> None:
        assert (2 * K - 3).is_nondecreasing()
        assert not parse_expr("5-k").is_nondecreasing()
        assert parse_expr("(k+1)/2").is_nondecreasing()


def _random_expr(rng: random.Random, depth: int) -> Expr:
    if depth == 0 or rng.random() < 0.3:
        return K if rng.random() < 0.5 else Num(rng.randint(0, 9))
    op = rng.choice("+-*/^")
    return BinOp(op, _random_expr(rng, depth - 1), _random_expr(rng, depth - 1))  # type: ignore[arg-type]


def _random_cf(rng: random.Random) -> QuasiPeriodicCF:
    prefix = [rng.randint(-5, 5)] if rng.random() < 0.7 else []
    prefix += [rng.randint(1, 9) for _ in range(rng.randint(0, 2) if prefix else 0)]
    period = tuple(_random_expr(rng, 3) for _ in range(rng.randint(1, 3)))
    return QuasiPeriodicCF(tuple(prefix), period, rng.randint(0, 3))


class TestNotation:
    """Parsing and formatting of the CF notation."""

    def test_random_round_trip(self) -> None:
        rng = random.Random(0)
        for _ in range(500):
            qp = _random_cf(rng)
            text = format_cf(qp)
            parsed = parse_cf(text)
            assert parsed == qp, text
            assert format_cf(parsed) == text

    def test_parse_e(self, e_cf: QuasiPeriodicCF) -> None:
        assert e_cf.prefix == (2,)
        assert len(e_cf.period) == 3
        assert e_cf.start == 1

    def test_format_round_trip(self) -> None:
        for text in (
            "[2; 1, 2*k, 1 @ k=1..]",
            "[; 7*3^k @ k=1..]",
            "[1, 2, 3]",
            "[-3; 2 @ k=1..]",
        ):
            assert format_cf(parse_cf(text)) == text

    def test_format_keeps_needed_parentheses(self) -> None:
        for text, expected in (
            ("(k+1)/2", "(k + 1)/2"),
            ("5-(k-1)", "5 - (k - 1)"),
            ("2^(k+1)", "2^(k + 1)"),
        ):
            expr = parse_expr(text)
            assert format_expr(expr) == expected
            assert parse_expr(format_expr(expr)) == expr

    def test_bad_character(self) -> None:
        with pytest.raises(ParseError) as exc:
            parse_cf("[1; k @ j=1..]")
        assert exc.value.position == 8

    def test_unterminated(self) -> None:
        with pytest.raises(ParseError, match="end of input"):
            parse_cf("[1, 2")

    def test_trailing_input(self) -> None:
        with pytest.raises(ParseError, match="Trailing"):
            parse_cf("[1] 2")

    def test_parse_error_is_value_error(self) -> None:
        with pytest.raises(ValueError):
            parse_cf("1, 2")


class TestQuasiPeriodic:
    """Evaluation of quasi-periodic fractions."""

    def test_e_expansion(self, e_cf: QuasiPeriodicCF) -> None:
        assert list(qp_evaluate(e_cf, 7)) == [2, 1, 2, 1, 1, 4, 1]

    def test_named_expansions(self) -> None:
        tan_1 = parse_cf("[1; 2*k-1, 1 @ k=1..]")
        assert list(qp_evaluate(tan_1, 7)) == [1, 1, 1, 3, 1, 5, 1]
        ratio = parse_cf("[0; 4*k-2 @ k=1..]")
        assert list(qp_evaluate(ratio, 5)) == [0, 2, 6, 10, 14]

    def test_random_access(self, e_cf: QuasiPeriodicCF) -> None:
        assert e_cf.quotient(5) == 4
        assert e_cf.quotient(8) == 6

    def test_tasoev_values(self) -> None:
        assert list(qp_evaluate(parse_cf("[; 7*3^k @ k=1..]"), 3)) == [21, 63, 189]

    def test_finite(self) -> None:
        x = parse_cf("[1, 2, 3]")
        assert x.is_finite
        assert list(qp_evaluate(x)) == [1, 2, 3]
        with pytest.raises(IndexError):
            x.quotient(3)

    def test_finite_trailing_one_folds(self) -> None:
        assert parse_cf("[3, 1]").prefix == (4,)
        assert list(qp_evaluate(parse_cf("[1, 2, 1]"))) == [1, 3]
        assert parse_cf("[1]").prefix == (1,)
        assert str(parse_cf("[0, 1]")) == "[1]"

    def test_leading_quotient_may_be_negative(self) -> None:
        x = QuasiPeriodicCF((), (K - 2,), 1)
        with pytest.raises(NonPositiveQuotient):
            list(qp_evaluate(x, 2))
        assert list(qp_evaluate(x, 1)) == [-1]

    def test_bad_prefix(self) -> None:
        with pytest.raises(NonPositiveQuotient):
            QuasiPeriodicCF((1, 0))

    def test_negative_count(self, e_cf: QuasiPeriodicCF) -> None:
        with pytest.raises(ValueError):
            qp_evaluate(e_cf, -1)


class TestClassify:
    """Parity classes."""

    def test_class_of_lists(self) -> None:
        assert class_of([2, 4, 6]) is CFClass.CF1
        assert class_of([1, 3, 5]) is CFClass.CF2
        assert class_of([1, 2, 3, 4]) is CFClass.CF3
        assert class_of([2, 1, 4, 3]) is CFClass.CF4
        assert class_of([1, 1, 2]) is CFClass.UNKNOWN

    def test_non_positive_lead_is_unknown(self) -> None:
        assert class_of([0, 2]) is CFClass.UNKNOWN
        assert class_of([3]) is CFClass.UNKNOWN

    def test_symbolic_classes(
        self,
        h41: QuasiPeriodicCF,
        h32: QuasiPeriodicCF,
        h55: QuasiPeriodicCF,
        t2_233: QuasiPeriodicCF,
    ) -> None:
        expected = (
            (h41, CFClass.CF1),
            (h32, CFClass.CF2),
            (h55, CFClass.CF3),
            (t2_233, CFClass.CF4),
        )
        for x, cls in expected:
            result = classify_qp(x)
            assert result.cf_class is cls
            assert result.method == "symbolic"
            assert result.horizon is None

    def test_e_is_unclassified(self, e_cf: QuasiPeriodicCF) -> None:
        assert classify_qp(e_cf).cf_class is CFClass.UNKNOWN

    def test_division_falls_back_to_window(self) -> None:
        result = classify_qp(parse_cf("[; (4*k+2)/2 @ k=1..]"))
        assert result.cf_class is CFClass.CF2
        assert result.method == "window"
        assert str(result) == "CF2 (checked on 64 terms)"

    def test_short_window_reports_its_length(self) -> None:
        assert classify(iter([2, 4]), horizon=10).horizon == 2

    def test_horizon_too_small(self) -> None:
        with pytest.raises(ValueError):
            classify([2, 4], horizon=1)

    def test_unknown_has_no_parity(self) -> None:
        with pytest.raises(ValueError):
            CFClass.UNKNOWN.expected_parity(0)
