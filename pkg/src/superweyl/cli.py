"""Command-line entry point: ``superweyl <command> [spec] [options]``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage or input errors.

Dependencies: argparse, json, logging, superweyl.fiber, superweyl.geometry,
superweyl.operators, superweyl.tstar.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from collections.abc import Callable, Sequence
from fractions import Fraction
from typing import Any

from . import __version__
from .constants import (
    DEFAULT_QUAD_NODES,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_TOLERANCE,
    EULER_TOLERANCE,
    EXIT_CHECK_FAILED,
    EXIT_INPUT_ERROR,
    EXIT_OK,
    IMAG_TOLERANCE,
    HbarMode,
    WeitzenbockVariant,
)
from .exceptions import ChartMismatchError, ConfigurationError, SuperWeylError
from .fiber import run_fiber_selftest
from .fiber.selftest import FAULTS
from .geometry import (
    CurvatureData,
    Manifold,
    MetricChart,
    Point,
    load_spec,
    verify_curvature_identities,
)
from .models import CheckSettings, EulerReport, QuadratureSettings, RunReport
from .operators import (
    check_form_complex,
    check_variants,
    check_weitzenbock,
    hodge_symbol,
    random_test_fields,
    standard_test_fields,
    verify_hodge_symbol,
)
from .tstar import euler_characteristic, run_dcheck

logger = logging.getLogger(__name__)


def _parse_assignments(text: str, what: str) -> dict[str, float]:
    """``name=value,name=value`` into a dict.

    :raises ConfigurationError: On malformed items or non-numeric values.
    """
    out: dict[str, float] = {}
    for item in filter(None, (part.strip() for part in text.split(","))):
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise ConfigurationError(f"{what}: expected name=value, got '{item}'")
        try:
            out[name.strip()] = float(value)
        except ValueError:
            raise ConfigurationError(f"{what}: '{value}' is not a number") from None
    return out


def _parameters(args: argparse.Namespace) -> dict[str, float]:
    values: dict[str, float] = {}
    for text in args.param or []:
        values.update(_parse_assignments(text, "--param"))
    return values


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"'{text}' is not a rational number") from None


def _load(args: argparse.Namespace) -> Manifold:
    manifold = load_spec(args.spec, _parameters(args))
    logger.debug("loaded %r", manifold)
    return manifold


def _settings(args: argparse.Namespace) -> CheckSettings:
    return CheckSettings(
        tolerance=args.tol if args.tol is not None else DEFAULT_TOLERANCE,
        samples=args.samples,
        seed=args.seed,
    )


def _center(chart: MetricChart) -> Point:
    return {x: 0.5 * (lo + hi) for x, (lo, hi) in zip(chart.coordinates, chart.ranges, strict=True)}


def _locate(manifold: Manifold, text: str | None) -> tuple[MetricChart, Point]:
    """Chart containing the ``--at`` point; the first chart's center when no point is given.

    :raises ChartMismatchError: If the point names the wrong coordinates or lies in no chart.
    """
    if text is None:
        chart = manifold.charts[0]
        return chart, _center(chart)
    point = _parse_assignments(text, "--at")
    if set(point) != set(manifold.coordinates):
        raise ChartMismatchError(
            f"--at must give exactly the coordinates {manifold.coordinates}, got {sorted(point)}"
        )
    for chart in manifold.charts:
        if chart.contains(point):
            return chart, point
    raise ChartMismatchError(f"point {point} lies in no chart of {manifold.name}")


def _tensor(array: Any) -> Any:
    return array.tolist() if hasattr(array, "tolist") else array


def cmd_fiber_selftest(args: argparse.Namespace) -> RunReport:
    return run_fiber_selftest(
        args.n, args.r, seed=args.seed, random_cases=args.cases, fault=args.fault
    )


def cmd_geometry(args: argparse.Namespace) -> RunReport:
    manifold = _load(args)
    settings = _settings(args)
    report = RunReport(command="geometry", inputs={"spec": manifold.name})
    for chart in manifold.charts:
        report.extend(verify_curvature_identities(CurvatureData.from_chart(chart), None, settings))
    chart, point = _locate(manifold, args.at)
    values = CurvatureData.from_chart(chart).at(point)
    report.values.update(
        {
            "chart": chart.name,
            "point": point,
            "christoffel": _tensor(values.christoffel),
            "riemann": _tensor(values.riemann),
            "ricci": _tensor(values.ricci),
            "scalar": values.scalar,
            "scalar_curvature": values.scalar_curvature,
        }
    )
    return report


def cmd_weitzenbock(args: argparse.Namespace) -> RunReport:
    manifold = _load(args)
    settings = _settings(args)
    variant = WeitzenbockVariant(args.variant)
    report = RunReport(
        command="weitzenbock",
        inputs={"spec": manifold.name, "variant": variant, "samples": settings.samples},
    )
    for chart in manifold.charts:
        data = CurvatureData.from_chart(chart)
        fields = standard_test_fields(chart)
        fields += random_test_fields(chart, args.random_fields, settings.seed)
        points = chart.sample_points(settings.samples, settings.seed)
        report.extend(check_weitzenbock(data, fields, points, settings, variant))
        report.extend(check_variants(data, points, settings))
        report.extend(check_form_complex(data, fields, points, settings))
    return report


def cmd_laplacian_symbol(args: argparse.Namespace) -> RunReport:
    manifold = _load(args)
    chart, point = _locate(manifold, args.at)
    mode = HbarMode.FORMAL if args.hbar is None else HbarMode.NUMERIC
    symbol = hodge_symbol(
        CurvatureData.from_chart(chart), point, args.r, mode, 1 if args.hbar is None else args.hbar
    )
    report = verify_hodge_symbol(symbol)
    report.inputs.update({"spec": manifold.name, "chart": chart.name, "r": str(args.r)})
    return report


def cmd_euler(args: argparse.Namespace) -> EulerReport:
    manifold = _load(args)
    return euler_characteristic(manifold, QuadratureSettings(nodes_per_dim=args.quad))


def cmd_dcheck(args: argparse.Namespace) -> RunReport:
    manifold = _load(args)
    settings = _settings(args)
    report = RunReport(command="dcheck", inputs={"spec": manifold.name, "seed": settings.seed})
    for chart in manifold.charts:
        part = run_dcheck(CurvatureData.from_chart(chart), settings)
        report.extend(part)
        report.values[chart.name] = part.values
    return report


def _euler_passed(report: EulerReport, tolerance: float) -> bool:
    if report.imag_residual > IMAG_TOLERANCE or not report.densities_agree:
        return False
    return report.abs_error is None or report.abs_error <= tolerance


def _print_run_report(report: RunReport) -> None:
    for check in report.checks:
        residual = f"{check.residual:.3e}" if check.residual is not None else ""
        print(f"{check.status.upper():<5} {check.name:<48} {residual}")
        if check.detail:
            print(f"      {check.detail}")
    for key, value in report.values.items():
        print(f"{key}: {value}")
    passed = sum(check.passed for check in report.checks)
    print(f"{passed}/{len(report.checks)} checks passed in {report.wall_time:.2f}s")


def _print_euler_report(report: EulerReport) -> None:
    for chart in report.charts:
        print(f"{chart.label:<32} {chart.contribution:+.12f}")
    print(f"chi({report.manifold}) = {report.chi_computed:.12f}")
    if report.chi_expected is not None:
        print(f"expected {report.chi_expected}, abs error {report.abs_error:.3e}")
    print(f"imaginary residual {report.imag_residual:.3e}, {report.nodes_per_dim} nodes per axis")
    if not report.densities_agree:
        print(f"density cross-check failed: relative gap {report.density_mismatch:.3e}")
    if report.note:
        print(report.note)


Command = Callable[[argparse.Namespace], RunReport | EulerReport]

_COMMANDS: dict[str, Command] = {
    "fiber-selftest": cmd_fiber_selftest,
    "geometry": cmd_geometry,
    "weitzenbock": cmd_weitzenbock,
    "laplacian-symbol": cmd_laplacian_symbol,
    "euler": cmd_euler,
    "dcheck": cmd_dcheck,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for random inputs")
    noise = common.add_mutually_exclusive_group()
    noise.add_argument("-v", "--verbose", action="count", default=0, help="more log output")
    noise.add_argument("-q", "--quiet", action="store_true", help="errors only")

    with_spec = argparse.ArgumentParser(add_help=False, parents=[common])
    with_spec.add_argument("spec", help="spec file or bundled name (sphere2, torus2, ...)")
    with_spec.add_argument(
        "--param", action="append", metavar="NAME=VALUE[,...]", help="override spec parameters"
    )

    checked = argparse.ArgumentParser(add_help=False, parents=[with_spec])
    checked.add_argument("--tol", type=float, default=None, help="relative tolerance")
    checked.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="interior points")

    parser = argparse.ArgumentParser(
        prog="superweyl",
        description="Super symbol calculus, curvature and Gauss-Bonnet-Chern verification",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    selftest = sub.add_parser(
        "fiber-selftest", parents=[common], help="exact fiber identities for small n"
    )
    selftest.add_argument("--n", type=int, nargs="+", default=[1, 2, 3], help="fiber dimensions")
    selftest.add_argument(
        "--r",
        type=_fraction,
        nargs="+",
        default=[Fraction(0), Fraction(1, 2), Fraction(1)],
        help="ordering parameters",
    )
    selftest.add_argument("--cases", type=int, default=10, help="random cases per check")
    selftest.add_argument("--fault", choices=FAULTS, default=None, help="inject a sign error")

    geometry = sub.add_parser("geometry", parents=[checked], help="curvature at a point")
    geometry.add_argument("--at", metavar="NAME=VALUE,...", help="evaluation point")

    weitz = sub.add_parser("weitzenbock", parents=[checked], help="verify □ = Δ + curvature")
    weitz.add_argument(
        "--variant",
        choices=[v.value for v in WeitzenbockVariant],
        default=WeitzenbockVariant.WEITZ2.value,
    )
    weitz.add_argument(
        "--random-fields", type=int, default=0, help="extra random test fields per chart"
    )

    lap = sub.add_parser("laplacian-symbol", parents=[with_spec], help="σ(□) at a point")
    lap.add_argument("--at", metavar="NAME=VALUE,...", help="evaluation point")
    lap.add_argument("--r", type=_fraction, default=Fraction(0), help="odd ordering parameter")
    lap.add_argument("--hbar", type=_fraction, default=None, help="substitute a value for ħ")

    euler = sub.add_parser("euler", parents=[with_spec], help="Gauss-Bonnet-Chern integral")
    euler.add_argument("--quad", type=int, default=DEFAULT_QUAD_NODES, help="nodes per axis")
    euler.add_argument(
        "--tol", type=float, default=EULER_TOLERANCE, help="allowed error against expected χ"
    )

    sub.add_parser("dcheck", parents=[checked], help="d² = 0 and the Leibniz defect on T*M")
    return parser


def _configure_logging(args: argparse.Namespace) -> None:
    if args.quiet:
        level = logging.ERROR
    elif args.verbose >= 2:
        level = logging.DEBUG
    elif args.verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def main(argv: Sequence[str] | None = None) -> int:
    """Run one command and return its exit code."""
    args = build_parser().parse_args(argv)
    _configure_logging(args)
    started = time.perf_counter()
    try:
        report = _COMMANDS[args.command](args)
    except (SuperWeylError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    if isinstance(report, EulerReport):
        passed = _euler_passed(report, args.tol)
        if args.json:
            print(report.model_dump_json(indent=2))
        else:
            _print_euler_report(report)
    else:
        report.wall_time = time.perf_counter() - started
        passed = report.passed
        if args.json:
            print(report.model_dump_json(indent=2))
        else:
            _print_run_report(report)
        failure = report.first_failure
        if failure is not None:
            logger.error("first failing check: %s", failure.name)
    return EXIT_OK if passed else EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
