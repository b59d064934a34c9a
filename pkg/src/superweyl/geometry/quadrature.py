"""Tensor-product Gauss-Legendre quadrature over chart boxes.

Nodes are processed in fixed-size chunks of the flattened grid; chunks may run on worker
threads, and partial sums are always combined in chunk order.

Dependencies: math, numpy, superweyl._parallel, superweyl.expr.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from functools import lru_cache
from typing import Any

import numpy as np

from .._parallel import ordered_map
from ..expr import Expr, evaluate_on_grid, parse
from ..models import QuadratureSettings
from .chart import MetricChart

logger = logging.getLogger(__name__)

Density = Callable[[Sequence[np.ndarray]], np.ndarray]


@lru_cache(maxsize=64)
def gauss_legendre(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    return x, w


def _axis(lo: float, hi: float, nodes: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = gauss_legendre(nodes)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


def integrate_box(
    density: Density,
    ranges: Sequence[tuple[float, float]],
    settings: QuadratureSettings | None = None,
) -> complex:
    """Integrate a vectorized density over a box.

    :param density: Maps one coordinate array per axis to the density values.
    :param ranges: Box edges per axis.
    :param settings: Node count per axis and chunk size.
    :return: The (complex) integral.
    """
    settings = settings or QuadratureSettings()
    nodes = settings.nodes_per_dim
    axes = [_axis(lo, hi, nodes) for lo, hi in ranges]
    dim = len(axes)
    total = nodes**dim
    chunk = settings.chunk_size
    starts = range(0, total, chunk)

    def partial(start: int) -> tuple[float, float]:
        flat = np.arange(start, min(start + chunk, total))
        digits = np.unravel_index(flat, (nodes,) * dim)
        columns = [axes[k][0][digits[k]] for k in range(dim)]
        weights = np.ones(len(flat))
        for k in range(dim):
            weights = weights * axes[k][1][digits[k]]
        values = np.asarray(density(columns), dtype=complex) * weights
        return math.fsum(values.real), math.fsum(values.imag)

    logger.debug("quadrature over %d nodes in %d chunks", total, len(starts))
    parts = ordered_map(partial, starts)
    return complex(math.fsum(p[0] for p in parts), math.fsum(p[1] for p in parts))


def expression_density(tree: Any, names: Sequence[str]) -> Density:
    """Vectorized density from an expression in the given coordinates."""
    names = tuple(names)

    def density(columns: Sequence[np.ndarray]) -> np.ndarray:
        return evaluate_on_grid(tree, names, columns)

    return density


def integrate_chart(
    chart: MetricChart,
    density: Expr | str,
    points_per_dim: int | None = None,
    settings: QuadratureSettings | None = None,
) -> float:
    """Gauss-Legendre integral of a real density over the full chart box.

    :param chart: Chart whose coordinates the density uses.
    :param density: Expression or expression text.
    :param points_per_dim: Node count per axis; overrides ``settings``.
    :raises EvaluationDomainError: If the density is not finite at a node.
    """
    if isinstance(density, str):
        density = parse(density)
    settings = settings or QuadratureSettings()
    if points_per_dim is not None:
        settings = QuadratureSettings(
            nodes_per_dim=points_per_dim, chunk_size=settings.chunk_size
        )
    fn = expression_density(density, chart.coordinates)
    return integrate_box(fn, chart.ranges, settings).real
