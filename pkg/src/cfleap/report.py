"""
Verification reports.

Every verifier returns a VerificationReport: which branch was checked, the
index range, the indices that passed and the failures with both sides of
the comparison. Reports serialise to JSON (validated against
``schemas/report.schema.json``) and render as a short text summary.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

# ──────────────────────────────────────────────
# Schema paths
# ──────────────────────────────────────────────

_SCHEMA_DIR = Path(__file__).resolve().parent.parent.parent / "schemas"
REPORT_SCHEMA_PATH = _SCHEMA_DIR / "report.schema.json"
EXPANSION_SCHEMA_PATH = _SCHEMA_DIR / "expansion.schema.json"

logger = logging.getLogger(__name__)


@dataclass
class CheckFailure:
    p: int
    lhs: str
    rhs: str
    label: str | None = None

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"p": self.p, "lhs": self.lhs, "rhs": self.rhs}
        if self.label:
            data["label"] = self.label
        return data


@dataclass
class VerificationReport:
    """Outcome of one verification run."""

    branch: str
    p_range: tuple[int, int]
    passes: list[int] = field(default_factory=list)
    failures: list[CheckFailure] = field(default_factory=list)
    threshold: int | None = None
    details: dict[str, Any] = field(default_factory=dict)

    def record(self, p: int, lhs: object, rhs: object, label: str | None = None) -> bool:
        """Compare both sides at index p; returns whether they agree."""
        if lhs == rhs:
            self.passes.append(p)
            return True
        self.failures.append(CheckFailure(p, str(lhs), str(rhs), label))
        return False

    def fail(self, p: int, lhs: object, rhs: object, label: str | None = None) -> None:
        self.failures.append(CheckFailure(p, str(lhs), str(rhs), label))

    def extend(self, other: VerificationReport) -> None:
        """Fold another report in, tagging its failures with its branch."""
        self.passes.extend(other.passes)
        for failure in other.failures:
            label = f"{other.branch}: {failure.label}" if failure.label else other.branch
            self.failures.append(CheckFailure(failure.p, failure.lhs, failure.rhs, label))

    @property
    def ok(self) -> bool:
        return len(self.failures) == 0

    @property
    def pass_count(self) -> int:
        return len(self.passes)

    @property
    def fail_count(self) -> int:
        return len(self.failures)

    @property
    def first_failure(self) -> CheckFailure | None:
        return self.failures[0] if self.failures else None

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "branch": self.branch,
            "p_range": list(self.p_range),
            "ok": self.ok,
            "passes": list(self.passes),
            "failures": [f.to_dict() for f in self.failures],
        }
        if self.threshold is not None:
            data["threshold"] = self.threshold
        if self.details:
            data["details"] = _jsonable(self.details)
        return data

    def save(self, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(
            json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (int, float, str, bool)) or value is None:
        return value
    return str(value)


def format_report(report: VerificationReport) -> str:
    """Human-readable summary of a report."""
    lo, hi = report.p_range
    status = "PASS" if report.ok else "FAIL"
    lines = [
        f"{status} {report.branch}",
        f"  Range:   {lo}..{hi}",
        f"  Passed:  {report.pass_count}",
        f"  Failed:  {report.fail_count}",
    ]
    if report.threshold is not None:
        lines.append(f"  Threshold: {report.threshold}")
    for key, value in report.details.items():
        lines.append(f"  {key}: {value}")
    for failure in report.failures[:10]:
        where = f" [{failure.label}]" if failure.label else ""
        lines.append(f"  ✗ p={failure.p}{where}: {failure.lhs} != {failure.rhs}")
    if report.fail_count > 10:
        lines.append(f"  … {report.fail_count - 10} more failures")
    return "\n".join(lines)


# ──────────────────────────────────────────────
# Schema validation
# ──────────────────────────────────────────────


def validate_against_schema(data: dict[str, Any], schema_path: Path) -> list[str]:
    """
    Errors from validating *data*; empty when it conforms. A missing schema
    file (an installed wheel ships none) skips validation with a warning.
    """
    import jsonschema

    if not schema_path.exists():
        logger.warning("Schema file %s not found, skipping schema validation", schema_path)
        return []
    schema = json.loads(schema_path.read_text(encoding="utf-8"))
    validator = jsonschema.Draft202012Validator(schema)
    errors = []
    for error in sorted(validator.iter_errors(data), key=lambda e: list(e.path)):
        path_str = " → ".join(str(p) for p in error.absolute_path) or "root"
        errors.append(f"Schema error at '{path_str}': {error.message}")
    return errors


def validate_report_dict(data: dict[str, Any]) -> list[str]:
    return validate_against_schema(data, REPORT_SCHEMA_PATH)


def validate_expansion_dict(data: dict[str, Any]) -> list[str]:
    return validate_against_schema(data, EXPANSION_SCHEMA_PATH)
