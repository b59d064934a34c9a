"""Checks of the differential d on T*M symbols: d² = 0 and the Leibniz-defect table.

Dependencies: numpy, random, superweyl._parallel, superweyl.models, superweyl.tstar.symbol.
"""

from __future__ import annotations

import itertools
import logging
import random
from collections.abc import Sequence

import numpy as np

from .._parallel import ordered_map
from ..constants import Parity
from ..geometry import CurvatureData, Point
from ..models import CheckSettings, RunReport
from .symbol import (
    TStarSymbol,
    cartan_d,
    curvature_defect,
    generator_symbols,
    leibniz_defect,
    random_momenta,
    random_tstar_symbol,
)

logger = logging.getLogger(__name__)


def _phase_points(data: CurvatureData, settings: CheckSettings) -> list[Point]:
    """Interior points of the chart with random momenta attached."""
    chart = data.chart
    rng = np.random.default_rng(settings.seed)
    return [
        {**point, **random_momenta(chart, rng)}
        for point in chart.sample_points(settings.samples, settings.seed)
    ]


def _max_relative(
    pairs: Sequence[tuple[TStarSymbol, TStarSymbol]],
    points: Sequence[Point],
    settings: CheckSettings,
) -> tuple[bool, float]:
    def at_point(point: Point) -> tuple[bool, float]:
        ok, worst = True, 0.0
        for residual, reference in pairs:
            value = residual.max_abs(point)
            ok = ok and settings.within(value, reference.max_abs(point))
            worst = max(worst, value)
        return ok, worst

    results = ordered_map(at_point, points)
    return all(ok for ok, _ in results), max((w for _, w in results), default=0.0)


def _record(
    report: RunReport,
    name: str,
    pairs: Sequence[tuple[TStarSymbol, TStarSymbol]],
    points: Sequence[Point],
    settings: CheckSettings,
) -> None:
    ok, residual = _max_relative(pairs, points, settings)
    report.record(name, ok, residual=residual, tolerance=settings.tolerance)
    if not ok:
        logger.warning("%s fails with residual %.3g", name, residual)


def defect_table(
    data: CurvatureData, point: Point, curvature_only: bool = False
) -> dict[str, float]:
    """Magnitude of the Leibniz defect for every ordered pair of generators at a point."""
    generators = generator_symbols(data.chart)
    defect = curvature_defect if curvature_only else leibniz_defect
    table = {}
    for (fname, f), (gname, g) in itertools.product(generators.items(), repeat=2):
        table[f"D({fname},{gname})"] = defect(f, g, data).max_abs(point)
    return table


def run_dcheck(
    data: CurvatureData,
    settings: CheckSettings | None = None,
    random_cases: int = 4,
) -> RunReport:
    """d² on generators and random symbols, graded symmetry of the defect, defect tables.

    :param data: Connection and curvature of the chart.
    :param settings: Tolerance, sample count and seed.
    :param random_cases: Random symbols per parity.
    :return: Report; the defect tables are stored under ``values``.
    """
    settings = settings or CheckSettings()
    chart = data.chart
    points = _phase_points(data, settings)
    rng = random.Random(settings.seed)
    generators = list(generator_symbols(chart).values())
    randoms = [
        random_tstar_symbol(chart, rng, parity)
        for parity in (Parity.EVEN, Parity.ODD)
        for _ in range(random_cases)
    ]
    report = RunReport(
        command="dcheck",
        inputs={"chart": chart.name, "points": len(points), "seed": settings.seed},
    )
    for label, symbols in (("generators", generators), ("random", randoms)):
        pairs = []
        for f in symbols:
            df = cartan_d(f, data)
            pairs.append((cartan_d(df, data), df))
        _record(report, f"{chart.name}:d-squared-{label}", pairs, points, settings)

    symmetry = []
    for f, g in itertools.combinations(generators + randoms[:2], 2):
        sign = -1 if f.parity() is Parity.ODD and g.parity() is Parity.ODD else 1
        forward = leibniz_defect(f, g, data)
        backward = leibniz_defect(g, f, data)
        total = forward + backward.scale(sign)
        symmetry.append((total, forward))
    _record(report, f"{chart.name}:defect-graded-symmetry", symmetry, points, settings)

    reference = points[0]
    table = defect_table(data, reference)
    curved = defect_table(data, reference, curvature_only=True)
    report.values["leibniz_defect"] = {k: v for k, v in table.items() if v > 0.0}
    report.values["curvature_defect"] = {k: v for k, v in curved.items() if v > 0.0}
    report.values["curvature_defect_max"] = max(curved.values(), default=0.0)
    report.values["reference_point"] = reference
    logger.info(
        "%s: largest curvature part of the Leibniz defect %.3g",
        chart.name,
        report.values["curvature_defect_max"],
    )
    return report
