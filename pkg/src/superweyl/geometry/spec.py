"""Manifold spec files: JSON ingestion, validation and chart construction.

A spec is either a path to a JSON file or the name of a bundled spec
(see :data:`~superweyl.constants.BUNDLED_SPECS`).

Dependencies: importlib.resources, json, pathlib, pydantic, superweyl.models.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Mapping
from importlib import resources
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from ..constants import BUNDLED_SPECS
from ..exceptions import ExprSyntaxError, SpecValidationError
from ..expr import Expr, parse
from ..models import ManifoldSpec
from .chart import MetricChart

logger = logging.getLogger(__name__)


class Manifold:
    """Validated spec together with its charts."""

    def __init__(self, spec: ManifoldSpec, charts: list[MetricChart]) -> None:
        self.spec = spec
        self.charts = charts

    @property
    def name(self) -> str:
        return self.spec.name

    @property
    def dim(self) -> int:
        return self.spec.dim

    @property
    def coordinates(self) -> list[str]:
        return self.spec.coordinates

    @property
    def expected_euler(self) -> int | None:
        return self.spec.expected_euler

    @property
    def orientation_sign(self) -> int:
        return self.spec.orientation_sign

    def scaled(self, factor: float) -> Manifold:
        """The same manifold with every chart metric multiplied by ``factor²``."""
        return Manifold(self.spec, [chart.scaled(factor) for chart in self.charts])

    def __repr__(self) -> str:
        return f"Manifold({self.name!r}, dim={self.dim}, charts={len(self.charts)})"


def bundled_spec_names() -> tuple[str, ...]:
    return BUNDLED_SPECS


def _read_text(source: str | Path) -> tuple[str, str]:
    path = Path(source)
    if path.is_file():
        return path.read_text(encoding="utf-8"), str(path)
    name = path.stem if path.suffix == ".json" else str(source)
    if name in BUNDLED_SPECS and path.parent == Path("."):
        resource = resources.files("superweyl.data").joinpath(f"{name}.json")
        return resource.read_text(encoding="utf-8"), f"<bundled {name}>"
    raise SpecValidationError(f"spec file not found: {source}")


def _parse_metric(spec: ManifoldSpec, index: int) -> list[list[Expr]]:
    rows = []
    for a, row in enumerate(spec.charts[index].metric):
        parsed = []
        for b, text in enumerate(row):
            try:
                parsed.append(parse(text))
            except ExprSyntaxError as exc:
                where = f"chart {index}, metric[{a}][{b}] {text!r}"
                raise type(exc)(f"{where}: {exc.message}", exc.offset) from exc
        rows.append(parsed)
    return rows


def parse_spec(data: Mapping[str, Any], parameters: Mapping[str, float] | None = None) -> Manifold:
    """Build a manifold from already-decoded JSON data.

    :param data: Decoded spec object.
    :param parameters: Overrides for the spec's ``parameters``.
    :raises SpecValidationError: On schema violations.
    :raises MetricError: On asymmetric or degenerate metrics.
    :raises ExprSyntaxError: On malformed metric text, with chart and entry location.
    """
    try:
        spec = ManifoldSpec.model_validate(data)
    except ValidationError as exc:
        raise SpecValidationError(f"invalid manifold spec: {exc}") from exc
    values = {**spec.parameters, **(parameters or {})}
    clash = sorted(set(values) & set(spec.coordinates))
    if clash:
        raise SpecValidationError(f"parameter '{clash[0]}' shadows a coordinate")
    charts = []
    for index, chart_spec in enumerate(spec.charts):
        charts.append(
            MetricChart(
                spec.coordinates,
                chart_spec.ranges,
                _parse_metric(spec, index),
                label=chart_spec.label or f"{spec.name}[{index}]",
                trim=chart_spec.trim,
                parameters=values,
            )
        )
    if values != spec.parameters:
        spec = spec.model_copy(update={"parameters": values})
    logger.debug("loaded spec %s with %d chart(s)", spec.name, len(charts))
    return Manifold(spec, charts)


def load_spec(source: str | Path, parameters: Mapping[str, float] | None = None) -> Manifold:
    """Load a manifold spec from a JSON file or a bundled spec name.

    :param source: File path, or one of the bundled names such as ``"sphere2"``.
    :param parameters: Overrides for the spec's ``parameters`` object.
    :raises SpecValidationError: If the file is missing, not JSON, or violates the schema.
    """
    text, origin = _read_text(source)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecValidationError(
            f"{origin}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(data, dict):
        raise SpecValidationError(f"{origin}: top level must be a JSON object")
    return parse_spec(data, parameters)
