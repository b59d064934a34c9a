"""Tests for Pydantic models.

Dependencies: pytest, pydantic, superweyl.models.
"""

import pytest
from pydantic import ValidationError

from superweyl.constants import CheckStatus
from superweyl.models import (
    ChartContribution,
    CheckSettings,
    EulerReport,
    ManifoldSpec,
    QuadratureSettings,
    RunReport,
)

SPHERE = {
    "name": "s",
    "dim": 2,
    "coordinates": ["th", "ph"],
    "charts": [{"ranges": [[0.0, 3.14], [0.0, 6.28]], "metric": [["1", "0"], ["0", "sin(th)^2"]]}],
}


class TestRunReport:
    """Test check bookkeeping on reports."""

    def test_record_and_passed(self) -> None:
        """Test that record appends checks and passed follows their status."""
        report = RunReport(command="demo")
        assert report.passed
        assert report.first_failure is None
        report.record("a", True, residual=0.0)
        failed = report.record("b", False, residual=1.0, tolerance=1e-8, detail="off")
        assert failed.status is CheckStatus.FAIL
        assert not report.passed
        assert report.first_failure is failed

    def test_extend_with_prefix(self) -> None:
        """Test that merged checks get the prefix and leave the source untouched."""
        inner = RunReport(command="inner")
        inner.record("roundtrip", True)
        outer = RunReport(command="outer")
        outer.extend(inner, prefix="sphere2:")
        outer.extend(inner)
        assert [c.name for c in outer.checks] == ["sphere2:roundtrip", "roundtrip"]
        assert inner.checks[0].name == "roundtrip"

    def test_json_dump(self) -> None:
        """Test that statuses serialize as plain strings."""
        report = RunReport(command="demo", values={"x": 1})
        report.record("a", True)
        data = report.model_dump(mode="json")
        assert data["checks"][0]["status"] == "pass"
        assert data["values"] == {"x": 1}


class TestSettings:
    """Test run settings."""

    def test_within(self) -> None:
        """Test the relative tolerance with an absolute floor."""
        settings = CheckSettings(tolerance=1e-6, absolute_floor=1e-12)
        assert settings.within(5e-7)
        assert not settings.within(5e-6)
        assert settings.within(5e-6, scale=10.0)

    @pytest.mark.parametrize(
        "kwargs", [{"tolerance": 0.0}, {"samples": 0}, {"absolute_floor": -1.0}]
    )
    def test_invalid_check_settings(self, kwargs: dict[str, float]) -> None:
        """Test validation of check settings."""
        with pytest.raises(ValidationError):
            CheckSettings(**kwargs)

    def test_quadrature_needs_two_nodes(self) -> None:
        """Test the lower bound on nodes per dimension."""
        assert QuadratureSettings().nodes_per_dim == 64
        with pytest.raises(ValidationError):
            QuadratureSettings(nodes_per_dim=1)


class TestManifoldSpec:
    """Test schema validation of manifold specs."""

    @pytest.mark.parametrize(("raw", "sign"), [(1, 1), (-1, -1), ("1", 1), ("-1", -1)])
    def test_orientation_normalized(self, raw: object, sign: int) -> None:
        """Test integer and string orientations."""
        spec = ManifoldSpec.model_validate({**SPHERE, "orientation": raw})
        assert spec.orientation_sign == sign

    @pytest.mark.parametrize(
        "override",
        [
            {"coordinates": ["th"]},
            {"coordinates": ["th", "th"]},
            {"coordinates": ["th", "sin"]},
            {"parameters": {"th": 1.0}},
            {"charts": []},
            {"extra": True},
            {"charts": [{"ranges": [[1.0, 0.0], [0.0, 1.0]], "metric": [["1", "0"], ["0", "1"]]}]},
            {"charts": [{"ranges": [[0.0, 1.0], [0.0, 1.0]], "metric": [["1"]]}]},
        ],
    )
    def test_invalid(self, override: dict[str, object]) -> None:
        """Test rejection of malformed specs."""
        with pytest.raises(ValidationError):
            ManifoldSpec.model_validate({**SPHERE, **override})


def test_euler_report_hides_note() -> None:
    """Test that the note stays out of the JSON dump."""
    report = EulerReport(
        manifold="circle",
        chi_computed=0.0,
        nodes_per_dim=8,
        charts=[ChartContribution(label="circle", contribution=0.0)],
        note="odd dimension",
    )
    data = report.model_dump()
    assert "note" not in data
    assert data["charts"] == [{"label": "circle", "contribution": 0.0}]
