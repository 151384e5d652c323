"""Tests for verification reports and their JSON form."""

import json
from fractions import Fraction
from pathlib import Path

import pytest

import cfleap.report as report_module
from cfleap.report import (
    VerificationReport,
    format_report,
    validate_against_schema,
    validate_expansion_dict,
    validate_report_dict,
)


def _sample() -> VerificationReport:
    report = VerificationReport(branch="t1.1:eqconv1", p_range=(3, 5))
    report.record(3, Fraction(5, 3), Fraction(5, 3))
    report.record(4, Fraction(1, 2), Fraction(2, 3), label="U/V_12")
    report.details["k0"] = 1
    return report


class TestVerificationReport:
    """Recording, merging and summarising checks."""

    def test_record(self) -> None:
        report = _sample()
        assert report.passes == [3]
        assert report.fail_count == 1
        assert not report.ok
        failure = report.first_failure
        assert failure is not None
        assert (failure.p, failure.lhs, failure.rhs) == (4, "1/2", "2/3")

    def test_empty_report_is_ok(self) -> None:
        assert VerificationReport(branch="x", p_range=(0, 0)).ok

    def test_extend_tags_failures(self) -> None:
        outer = VerificationReport(branch="blocks", p_range=(1, 5))
        outer.extend(_sample())
        assert outer.pass_count == 1
        assert outer.failures[0].label == "t1.1:eqconv1: U/V_12"

    def test_fail(self) -> None:
        report = VerificationReport(branch="x", p_range=(0, 0))
        report.fail(0, [1, 2], "tail", label="no alignment")
        assert report.failures[0].lhs == "[1, 2]"


class TestJson:
    """Serialisation and schema validation."""

    def test_to_dict_validates(self) -> None:
        data = _sample().to_dict()
        assert validate_report_dict(data) == []
        assert data["ok"] is False
        assert data["details"] == {"k0": 1}
        assert data["failures"][0]["label"] == "U/V_12"

    def test_threshold_serialised(self) -> None:
        report = VerificationReport(branch="t1.3:eqconv4", p_range=(0, 10), threshold=2)
        assert report.to_dict()["threshold"] == 2

    def test_details_become_json(self) -> None:
        report = VerificationReport(branch="x", p_range=(0, 0))
        report.details["ratio"] = Fraction(1, 3)
        report.details["pair"] = (1, 2)
        assert report.to_dict()["details"] == {"ratio": "1/3", "pair": [1, 2]}

    def test_invalid_report(self) -> None:
        errors = validate_report_dict({"branch": "", "p_range": [1]})
        assert errors
        assert all(e.startswith("Schema error") for e in errors)

    def test_expansion_schema(self) -> None:
        assert validate_expansion_dict({"command": "expand", "quotients": [2, 1]}) == []
        assert validate_expansion_dict({"command": "bogus"})

    def test_missing_schema_skips(
        self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch, caplog: pytest.LogCaptureFixture
    ) -> None:
        missing = tmp_path / "report.schema.json"
        assert validate_against_schema({"branch": ""}, missing) == []
        assert "not found" in caplog.text
        monkeypatch.setattr(report_module, "REPORT_SCHEMA_PATH", missing)
        assert validate_report_dict({"branch": ""}) == []

    def test_save(self, tmp_path: Path) -> None:
        path = tmp_path / "out" / "report.json"
        _sample().save(path)
        data = json.loads(path.read_text(encoding="utf-8"))
        assert data["branch"] == "t1.1:eqconv1"


class TestFormat:
    """Plain-text summary."""

    def test_format(self) -> None:
        text = format_report(_sample())
        assert text.startswith("FAIL t1.1:eqconv1")
        assert "Passed:  1" in text
        assert "k0: 1" in text
        assert "✗ p=4 [U/V_12]: 1/2 != 2/3" in text

    def test_truncates_failures(self) -> None:
        report = VerificationReport(branch="x", p_range=(0, 14))
        for p in range(15):
            report.record(p, p, -1)
        assert "… 5 more failures" in format_report(report)
