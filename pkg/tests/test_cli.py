"""Tests for the cfleap command line."""

import json

import pytest
from click.testing import CliRunner

from cfleap.cli import main

H41 = "[; 4*(1+k) @ k=0..]"
M_TEXT = "1,1,1,-1"


@pytest.fixture
def runner():
    return CliRunner()


class TestExpandTransform:
    """expand and transform."""

    def test_expand(self, runner) -> None:
        result = runner.invoke(main, ["expand", "[2; 1, 2*k, 1 @ k=1..]", "--terms", "7"])
        assert result.exit_code == 0
        assert result.output.strip() == "2 1 2 1 1 4 1"

    def test_expand_json(self, runner) -> None:
        result = runner.invoke(main, ["expand", "[1, 2, 3]", "--json"])
        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert data == {"command": "expand", "input": "[1, 2, 3]", "quotients": [1, 2, 3]}

    def test_expand_parse_error(self, runner) -> None:
        result = runner.invoke(main, ["expand", "[1; k @ j=1..]"])
        assert result.exit_code == 2
        assert "ERROR" in result.output
        assert "position 8" in result.output

    def test_expand_folds_trailing_one(self, runner) -> None:
        result = runner.invoke(main, ["expand", "[3, 1]"])
        assert result.exit_code == 0
        assert result.output.strip() == "4"

    def test_transform(self, runner) -> None:
        result = runner.invoke(
            main, ["transform", "--lft", M_TEXT, "[2; 2 @ k=1..]", "--terms", "6"]
        )
        assert result.exit_code == 0
        assert result.output.strip() == "2 2 2 2 2 2"

    def test_transform_finite(self, runner) -> None:
        result = runner.invoke(main, ["transform", "--lft", M_TEXT, "[3]"])
        assert result.exit_code == 0
        assert result.output.strip() == "2"

    def test_transform_json(self, runner) -> None:
        result = runner.invoke(
            main, ["transform", "--lft", "1,1,0,1", "[2; 1, 2*k, 1 @ k=1..]", "--terms", "4", "--json"]
        )
        data = json.loads(result.stdout)
        assert data["lft"] == [1, 1, 0, 1]
        assert data["quotients"] == [3, 1, 2, 1]

    def test_transform_pole(self, runner) -> None:
        result = runner.invoke(main, ["transform", "--lft", M_TEXT, "[1]"])
        assert result.exit_code == 1
        assert "ERROR" in result.output

    def test_bad_lft(self, runner) -> None:
        result = runner.invoke(main, ["transform", "--lft", "1,2,3", "[1]"])
        assert result.exit_code == 2


class TestDecompose:
    """decompose."""

    def test_plain(self, runner) -> None:
        result = runner.invoke(main, ["decompose", "--lft", "3,1,1,1"])
        assert result.exit_code == 0
        assert result.output.splitlines() == ["case=TM T=[[2,1],[1,0]]"]

    def test_t_word(self, runner) -> None:
        result = runner.invoke(main, ["decompose", "--lft", "3,1,2,0"])
        assert result.exit_code == 0
        assert "T word: R^1 L^1" in result.output

    def test_json(self, runner) -> None:
        result = runner.invoke(main, ["decompose", "--lft", "3,1,2,0", "--json"])
        data = json.loads(result.stdout)
        assert data["case"] == "TM"
        assert data["t"] == [2, 1, 1, 1]
        assert data["t_word"] == [["R", 1], ["L", 1]]

    def test_wrong_det(self, runner) -> None:
        result = runner.invoke(main, ["decompose", "--lft", "2,1,1,1"])
        assert result.exit_code == 2
        assert "det 1" in result.output


class TestPredictTail:
    """predict-tail."""

    def test_plain(self, runner) -> None:
        result = runner.invoke(main, ["predict-tail", H41, "--lft", M_TEXT])
        assert result.exit_code == 0
        first, second = result.output.splitlines()
        assert first == "t1.1 (CF1, TM)  T=[[1,0],[0,1]]  k0=1"
        assert second.startswith("[; ") and second.endswith(", 1, 1 @ k=1..]")

    def test_json(self, runner) -> None:
        result = runner.invoke(main, ["predict-tail", H41, "--lft", M_TEXT, "--k0", "2", "--json"])
        data = json.loads(result.stdout)
        assert (data["label"], data["cf_class"], data["k0"]) == ("t1.1", "CF1", 2)

    def test_unimodular_is_not_applicable(self, runner) -> None:
        result = runner.invoke(main, ["predict-tail", H41, "--lft", "2,1,1,1"])
        assert result.exit_code == 3
        assert "Not applicable" in result.output


class TestVerify:
    """verify tail / recurrence / leaping."""

    def test_tail(self, runner) -> None:
        result = runner.invoke(main, ["verify", "tail", H41, "--lft", M_TEXT, "--horizon", "30"])
        assert result.exit_code == 0
        assert "Aligned: n=1 k'=1" in result.output
        assert "PASS t1.1:tail" in result.output

    def test_leaping(self, runner) -> None:
        result = runner.invoke(main, ["verify", "leaping", H41, "--lft", M_TEXT, "--pmax", "10"])
        assert result.exit_code == 0
        assert "PASS t1.1:eqconv1" in result.output

    def test_recurrence_json(self, runner) -> None:
        result = runner.invoke(
            main, ["verify", "recurrence", H41, "--lft", M_TEXT, "--pmax", "8", "--json"]
        )
        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert data["ok"] is True
        assert "seed" not in data["details"]

    def test_single_instance_takes_no_seed(self, runner) -> None:
        result = runner.invoke(main, ["verify", "leaping", H41, "--lft", M_TEXT, "--seed", "1"])
        assert result.exit_code == 2
        assert "No such option" in result.output

    def test_sweep_json_records_seed(self, runner) -> None:
        result = runner.invoke(
            main, ["verify", "sweep", "--instances", "1", "--pmax", "12", "--seed", "4", "--json"]
        )
        assert result.exit_code == 0, result.output
        data = json.loads(result.stdout)
        assert data["branch"] == "leaping"
        assert data["details"]["seed"] == 4

    def test_unclassified_input(self, runner) -> None:
        result = runner.invoke(
            main, ["verify", "leaping", "[2; 1, 2*k, 1 @ k=1..]", "--lft", M_TEXT]
        )
        assert result.exit_code == 3


class TestFamily:
    """family hurwitz / tasoev1 / tasoev2."""

    def test_hurwitz(self, runner) -> None:
        result = runner.invoke(main, ["family", "hurwitz", "--a", "4", "--n", "1", "--terms", "5"])
        assert result.exit_code == 0
        assert result.output.strip() == "4 8 12 16 20"

    def test_hurwitz_tail(self, runner) -> None:
        result = runner.invoke(main, ["family", "hurwitz", "--a", "4", "--n", "1", "--emit-tail"])
        assert result.exit_code == 0
        assert "h(4,1) CF1 TM: [; " in result.output

    def test_tasoev2_json(self, runner) -> None:
        result = runner.invoke(
            main,
            ["family", "tasoev2", "--u", "3", "--v", "5", "--a", "3", "--emit-tail",
             "--case", "TMR", "--json"],
        )  # fmt: skip
        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert data["family"] == "t2(3,5,3)"
        assert data["cf_class"] == "CF2"
        assert data["case"] == "TMR"
        assert data["k0"] == 1

    def test_size_condition(self, runner) -> None:
        result = runner.invoke(main, ["family", "tasoev1", "--u", "1", "--a", "1", "--emit-tail"])
        assert result.exit_code == 3

    def test_bad_parameter(self, runner) -> None:
        result = runner.invoke(main, ["family", "hurwitz", "--a", "0", "--n", "1"])
        assert result.exit_code == 2


class TestSelftest:
    """selftest and the top-level options."""

    def test_selftest(self, runner) -> None:
        result = runner.invoke(main, ["selftest", "--max-quotient", "3"])
        assert result.exit_code == 0
        assert "OK All self-test sweeps passed" in result.output

    def test_selftest_json(self, runner) -> None:
        result = runner.invoke(main, ["selftest", "--max-quotient", "3", "--json"])
        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert [r["branch"] for r in data] == ["anchors", "lemma", "blocks", "decomposition"]

    def test_version(self, runner) -> None:
        result = runner.invoke(main, ["--version"])
        assert result.exit_code == 0
        assert "0.1.0" in result.output
