"""Pydantic models for manifold specs, run settings and verification reports.

Dependencies: typing, pydantic.
"""

from __future__ import annotations

import re
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .constants import (
    ABSOLUTE_FLOOR,
    DEFAULT_QUAD_NODES,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_TOLERANCE,
    EULER_DENSITY_TOLERANCE,
    MAX_CHART_DIM,
    QUADRATURE_CHUNK,
    CheckStatus,
)

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_RESERVED = frozenset(
    {"pi", "sin", "cos", "tan", "sinh", "cosh", "tanh", "exp", "log", "sqrt"}
)


class ChartSpec(BaseModel):
    """One coordinate box of a manifold spec."""

    model_config = ConfigDict(extra="forbid")

    ranges: list[tuple[float, float]]
    metric: list[list[str]]
    trim: float | None = Field(default=None, ge=0.0, lt=0.5)
    label: str | None = None

    @field_validator("ranges")
    @classmethod
    def _ordered_ranges(cls, value: list[tuple[float, float]]) -> list[tuple[float, float]]:
        for lo, hi in value:
            if not lo < hi:
                raise ValueError(f"range [{lo}, {hi}] is empty")
        return value


class ManifoldSpec(BaseModel):
    """Manifold description as read from a JSON spec file."""

    model_config = ConfigDict(extra="forbid")

    name: str
    dim: int = Field(..., ge=1, le=MAX_CHART_DIM)
    coordinates: list[str]
    charts: list[ChartSpec] = Field(..., min_length=1)
    expected_euler: int | None = None
    orientation: Literal["+1", "-1"] = "+1"
    parameters: dict[str, float] = Field(default_factory=dict)

    @field_validator("orientation", mode="before")
    @classmethod
    def _normalize_orientation(cls, value: Any) -> Any:
        if isinstance(value, int) and not isinstance(value, bool):
            return "+1" if value > 0 else "-1"
        if value == "1":
            return "+1"
        return value

    @field_validator("coordinates")
    @classmethod
    def _valid_coordinates(cls, value: list[str]) -> list[str]:
        for name in value:
            if not _IDENT.fullmatch(name) or name in _RESERVED:
                raise ValueError(f"'{name}' cannot be used as a coordinate name")
        if len(set(value)) != len(value):
            raise ValueError("coordinate names must be distinct")
        return value

    @model_validator(mode="after")
    def _consistent_dimensions(self) -> ManifoldSpec:
        if len(self.coordinates) != self.dim:
            raise ValueError(f"{len(self.coordinates)} coordinates given for dim {self.dim}")
        clash = set(self.parameters) & set(self.coordinates)
        if clash:
            raise ValueError(f"parameters shadow coordinates: {sorted(clash)}")
        for index, chart in enumerate(self.charts):
            if len(chart.ranges) != self.dim:
                raise ValueError(f"chart {index}: {len(chart.ranges)} ranges for dim {self.dim}")
            if len(chart.metric) != self.dim or any(len(row) != self.dim for row in chart.metric):
                raise ValueError(f"chart {index}: metric is not {self.dim}x{self.dim}")
        return self

    @property
    def orientation_sign(self) -> int:
        return 1 if self.orientation == "+1" else -1


class QuadratureSettings(BaseModel):
    """Tensor-product Gauss-Legendre settings."""

    nodes_per_dim: int = Field(default=DEFAULT_QUAD_NODES, ge=2)
    chunk_size: int = Field(default=QUADRATURE_CHUNK, ge=1)


class CheckSettings(BaseModel):
    """Tolerances and sampling for numeric verification."""

    tolerance: float = Field(default=DEFAULT_TOLERANCE, gt=0.0)
    absolute_floor: float = Field(default=ABSOLUTE_FLOOR, ge=0.0)
    samples: int = Field(default=DEFAULT_SAMPLES, ge=1)
    seed: int = DEFAULT_SEED

    def within(self, residual: float, scale: float = 1.0) -> bool:
        """Relative test with an absolute floor."""
        return residual <= self.tolerance * max(abs(scale), 1.0) or residual <= self.absolute_floor


class CheckResult(BaseModel):
    """Outcome of one named identity check."""

    name: str
    status: CheckStatus
    residual: float | None = None
    value: float | str | None = None
    tolerance: float | None = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status is not CheckStatus.FAIL


class RunReport(BaseModel):
    """Machine-readable result of a verification command."""

    command: str
    inputs: dict[str, Any] = Field(default_factory=dict)
    checks: list[CheckResult] = Field(default_factory=list)
    values: dict[str, Any] = Field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def first_failure(self) -> CheckResult | None:
        return next((check for check in self.checks if not check.passed), None)

    def record(
        self,
        name: str,
        ok: bool,
        *,
        residual: float | None = None,
        value: float | str | None = None,
        tolerance: float | None = None,
        detail: str = "",
    ) -> CheckResult:
        """Append a pass/fail check and return it."""
        result = CheckResult(
            name=name,
            status=CheckStatus.PASS if ok else CheckStatus.FAIL,
            residual=residual,
            value=value,
            tolerance=tolerance,
            detail=detail,
        )
        self.checks.append(result)
        return result

    def extend(self, other: RunReport, prefix: str = "") -> None:
        """Merge another report's checks, optionally prefixing their names."""
        for check in other.checks:
            name = f"{prefix}{check.name}" if prefix else check.name
            self.checks.append(check.model_copy(update={"name": name}))


class ChartContribution(BaseModel):
    """Euler-integral contribution of one chart."""

    label: str
    contribution: float


class EulerReport(BaseModel):
    """Gauss-Bonnet-Chern result for a manifold spec."""

    manifold: str
    chi_computed: float
    chi_expected: int | None = None
    abs_error: float | None = None
    imag_residual: float = 0.0
    density_mismatch: float = 0.0
    nodes_per_dim: int
    charts: list[ChartContribution] = Field(default_factory=list)
    note: str | None = Field(default=None, exclude=True)

    @property
    def densities_agree(self) -> bool:
        """Whether the compiled and the numeric Pfaffian densities matched at the samples."""
        return self.density_mismatch <= EULER_DENSITY_TOLERANCE
