"""Coordinate charts carrying a Riemannian metric given by expressions.

A chart is one coordinate box with metric components ``g_ab`` as :class:`~superweyl.expr.Expr`.
The box may be trimmed for interior sampling; quadrature always uses the full box.

Dependencies: itertools, numpy, sympy, superweyl.expr.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Mapping, Sequence
from typing import Any

import numpy as np
import sympy

from ..constants import DEFAULT_TRIM, MAX_CHART_DIM
from ..exceptions import EvaluationDomainError, MetricError, UnboundVariableError
from ..expr import Expr, evaluate_many, parse, symbol

logger = logging.getLogger(__name__)

Point = dict[str, float]

_PD_GRID = 3


def _as_expr(value: Expr | str | int | float) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, str):
        return parse(value)
    return Expr.constant(value)


class MetricChart:
    """Coordinate box ``∏[lo_a, hi_a]`` with a symmetric positive-definite metric.

    :param coordinates: Coordinate names x¹..xⁿ.
    :param ranges: One ``(lo, hi)`` pair per coordinate.
    :param metric: ``n x n`` components as Expr or expression text.
    :param label: Optional name used in reports.
    :param trim: Fraction of each range cut from both ends for interior sampling.
    :param parameters: Values substituted for non-coordinate names in the metric.
    :raises MetricError: If the metric is malformed, asymmetric, uses unknown names, or is not
        positive-definite on the sampling box.
    """

    def __init__(
        self,
        coordinates: Sequence[str],
        ranges: Sequence[tuple[float, float]],
        metric: Sequence[Sequence[Expr | str | int | float]],
        *,
        label: str | None = None,
        trim: float | None = None,
        parameters: Mapping[str, float] | None = None,
    ) -> None:
        n = len(coordinates)
        if not 1 <= n <= MAX_CHART_DIM:
            raise MetricError(f"chart dimension must lie in 1..{MAX_CHART_DIM}, got {n}")
        if len(ranges) != n:
            raise MetricError(f"{len(ranges)} ranges given for {n} coordinates")
        if len(metric) != n or any(len(row) != n for row in metric):
            raise MetricError(f"metric must be {n}x{n}")
        self._coordinates = tuple(coordinates)
        self._ranges = tuple((float(lo), float(hi)) for lo, hi in ranges)
        self._label = label
        self._trim = DEFAULT_TRIM if trim is None else float(trim)
        self._parameters = dict(parameters or {})
        values = {symbol(k): sympy.Float(v) for k, v in self._parameters.items()}
        self._metric = tuple(
            tuple(Expr(_as_expr(entry).tree.subs(values)) for entry in row) for row in metric
        )
        self._check_names()
        self._check_symmetric()
        self._check_positive_definite()
        logger.debug("chart %s ready (dim %d)", self.name, n)

    @property
    def coordinates(self) -> tuple[str, ...]:
        return self._coordinates

    @property
    def dim(self) -> int:
        return len(self._coordinates)

    @property
    def ranges(self) -> tuple[tuple[float, float], ...]:
        return self._ranges

    @property
    def label(self) -> str | None:
        return self._label

    @property
    def name(self) -> str:
        return self._label or "chart"

    @property
    def trim(self) -> float:
        return self._trim

    @property
    def parameters(self) -> dict[str, float]:
        return dict(self._parameters)

    @property
    def symbols(self) -> tuple[sympy.Symbol, ...]:
        return tuple(symbol(x) for x in self._coordinates)

    def metric(self, a: int, b: int) -> Expr:
        """Component g_ab (0-based)."""
        return self._metric[a][b]

    def metric_matrix(self) -> sympy.Matrix:
        return sympy.Matrix([[entry.tree for entry in row] for row in self._metric])

    def _check_names(self) -> None:
        allowed = set(self._coordinates)
        for row in self._metric:
            for entry in row:
                unknown = sorted(entry.free_variables - allowed)
                if unknown:
                    raise MetricError(f"{self.name}: metric uses unknown name '{unknown[0]}'")

    def _check_symmetric(self) -> None:
        for a, b in itertools.combinations(range(self.dim), 2):
            difference = self._metric[a][b].tree - self._metric[b][a].tree
            if sympy.expand(difference) != 0 and sympy.simplify(difference) != 0:
                raise MetricError(f"{self.name}: g[{a + 1}][{b + 1}] != g[{b + 1}][{a + 1}]")

    def _check_positive_definite(self) -> None:
        axes = [np.linspace(lo, hi, _PD_GRID) for lo, hi in self.sampling_box()]
        for values in itertools.product(*axes):
            point = dict(zip(self._coordinates, map(float, values), strict=True))
            try:
                matrix = self.metric_at(point)
                np.linalg.cholesky(matrix)
            except (EvaluationDomainError, UnboundVariableError) as exc:
                raise MetricError(f"{self.name}: metric not evaluable at {point}: {exc}") from exc
            except np.linalg.LinAlgError:
                raise MetricError(f"{self.name}: metric not positive-definite at {point}") from None

    def sampling_box(self) -> list[tuple[float, float]]:
        """Ranges shrunk by ``trim`` of their width at both ends."""
        box = []
        for lo, hi in self._ranges:
            margin = self._trim * (hi - lo)
            box.append((lo + margin, hi - margin))
        return box

    def contains(self, point: Mapping[str, float]) -> bool:
        """Whether the point lies in the closed coordinate box."""
        pairs = zip(self._coordinates, self._ranges, strict=True)
        return all(lo <= point[x] <= hi for x, (lo, hi) in pairs)

    def sample_points(self, count: int, seed: int = 0) -> list[Point]:
        """Uniform random points of the sampling box, reproducible for a fixed seed."""
        rng = np.random.default_rng(seed)
        box = self.sampling_box()
        lows = np.array([lo for lo, _ in box])
        highs = np.array([hi for _, hi in box])
        samples = rng.uniform(lows, highs, size=(count, self.dim))
        return [dict(zip(self._coordinates, map(float, row), strict=True)) for row in samples]

    def metric_at(self, point: Mapping[str, float]) -> np.ndarray:
        """Numeric metric matrix at a point.

        :raises EvaluationDomainError: If a component cannot be evaluated there.
        """
        flat = [entry for row in self._metric for entry in row]
        values = evaluate_many(flat, point)
        return np.array(values, dtype=float).reshape(self.dim, self.dim)

    def _derived(self, metric: Sequence[Sequence[Any]], suffix: str) -> MetricChart:
        return MetricChart(
            self._coordinates,
            self._ranges,
            metric,
            label=f"{self.name}{suffix}",
            trim=self._trim,
        )

    def scaled(self, factor: float) -> MetricChart:
        """The same chart with metric ``factor² g``."""
        c2 = sympy.Float(factor) ** 2
        metric = [[Expr(c2 * entry.tree) for entry in row] for row in self._metric]
        return self._derived(metric, f"*{factor}")

    def flat_twin(self) -> MetricChart:
        """Same coordinates and box with the identity metric."""
        metric = [[1 if a == b else 0 for b in range(self.dim)] for a in range(self.dim)]
        return self._derived(metric, "-flat")

    def __repr__(self) -> str:
        return f"MetricChart({self.name!r}, coordinates={self._coordinates})"
