"""Exact self-test of the fiber calculus.

Runs the roundtrip, exponential-test, kernel, composition, trace and star identities over
the exact ring and collects them into a :class:`~superweyl.models.RunReport`. A fault can
be injected on purpose to confirm that failures are detected and named.

Dependencies: random, time, superweyl.models, superweyl.fiber.
"""

from __future__ import annotations

import logging
import random
import time
from collections.abc import Iterable, Sequence
from fractions import Fraction

import numpy as np

from ..constants import CompositionMethod, Parity
from ..exceptions import FiberContextError
from ..grassmann import Multivector
from ..models import RunReport
from ..scalars import EXACT, ExactScalar, GaussianRational
from .composition import compose_symbols
from .context import FiberContext
from .kernels import kernel_compose, kernel_of, op_from_kernel
from .operator import FiberOperator, identity_operator
from .quantization import quantize, symbol_by_exponential_test, symbol_of
from .star import hodge_star, star_inverse
from .traces import trace_report

logger = logging.getLogger(__name__)

SELFTEST_MAX_N = 3
FAULTS = ("symbol-sign",)


def random_scalar(rng: random.Random, hbar_range: int = 1) -> ExactScalar:
    """Small random Gaussian-rational Laurent polynomial in hbar."""
    terms = {}
    for power in range(-hbar_range, hbar_range + 1):
        if rng.random() < 0.5:
            terms[power] = GaussianRational(rng.randint(-3, 3), rng.randint(-2, 2))
    return ExactScalar(terms)


def random_operator(
    ctx: FiberContext, rng: random.Random, density: float = 0.4, parity: Parity | None = None
) -> FiberOperator:
    """Random exact operator, optionally homogeneous."""
    size = 1 << ctx.n
    matrix = np.empty((size, size), dtype=object)
    matrix.fill(EXACT.zero())
    for i in range(size):
        for j in range(size):
            odd = (i.bit_count() + j.bit_count()) & 1
            if parity is Parity.EVEN and odd or parity is Parity.ODD and not odd:
                continue
            if rng.random() < density:
                matrix[i, j] = random_scalar(rng)
    return FiberOperator(ctx, matrix)


def random_symbol(ctx: FiberContext, rng: random.Random, density: float = 0.3) -> Multivector:
    """Random exact symbol over (ξ, θ)."""
    gens = ctx.symbol_gens
    terms = {m: random_scalar(rng, 0) for m in range(1 << len(gens)) if rng.random() < density}
    return Multivector(gens, terms, EXACT)


def basis_symbols(ctx: FiberContext) -> list[Multivector]:
    gens = ctx.symbol_gens
    return [Multivector(gens, {m: 1}, EXACT) for m in range(1 << len(gens))]


def _flip_odd(f: Multivector) -> Multivector:
    return f.even_part() - f.odd_part()


def _tag(n: int, r: Fraction | None = None) -> str:
    return f"[n={n}]" if r is None else f"[n={n},r={r}]"


def _check_roundtrip(report: RunReport, ctx: FiberContext, fault: str | None) -> None:
    failures = 0
    for f in basis_symbols(ctx):
        back = symbol_of(quantize(f, ctx), ctx)
        if fault == "symbol-sign":
            back = _flip_odd(back)
        failures += back != f
    report.record(f"roundtrip{_tag(ctx.n, ctx.r)}", failures == 0, residual=failures, tolerance=0)


def _check_exponential_test(report: RunReport, ctx: FiberContext) -> None:
    zero_ctx = ctx.replace(r=0)
    failures = sum(
        symbol_by_exponential_test(quantize(f, zero_ctx), zero_ctx) != f
        for f in basis_symbols(zero_ctx)
    )
    report.record(f"exponential-test{_tag(ctx.n)}", failures == 0, residual=failures, tolerance=0)


def _check_kernels(report: RunReport, ctx: FiberContext, rng: random.Random, cases: int) -> None:
    failures = 0
    for _ in range(cases):
        parity = rng.choice([Parity.EVEN, Parity.ODD])
        A = random_operator(ctx, rng, parity=parity)
        B = random_operator(ctx, rng)
        if op_from_kernel(kernel_of(A, ctx), ctx) != A:
            failures += 1
        composed = kernel_compose(kernel_of(A, ctx), kernel_of(B, ctx), parity, ctx)
        failures += composed != kernel_of(A @ B, ctx)
    report.record(f"kernels{_tag(ctx.n)}", failures == 0, residual=failures, tolerance=0)


def _pairs(
    ctx: FiberContext, rng: random.Random, cases: int
) -> Iterable[tuple[Multivector, Multivector]]:
    if ctx.n <= 2:
        basis = basis_symbols(ctx)
        return [(f, g) for f in basis for g in basis]
    return [(random_symbol(ctx, rng), random_symbol(ctx, rng)) for _ in range(cases)]


def _check_composition(
    report: RunReport, ctx: FiberContext, rng: random.Random, cases: int
) -> None:
    failures = 0
    integral_failures = 0
    for f, g in _pairs(ctx, rng, cases):
        fast = compose_symbols(f, g, ctx, CompositionMethod.BIDIFFERENTIAL)
        failures += fast != compose_symbols(f, g, ctx, CompositionMethod.BRUTE_FORCE)
        if ctx.r in (0, 1):
            integral_failures += fast != compose_symbols(f, g, ctx, CompositionMethod.INTEGRAL)
    report.record(f"composition{_tag(ctx.n, ctx.r)}", failures == 0, residual=failures, tolerance=0)
    if ctx.r in (0, 1):
        report.record(
            f"composition-integral{_tag(ctx.n, ctx.r)}",
            integral_failures == 0,
            residual=integral_failures,
            tolerance=0,
        )


def _check_traces(report: RunReport, ctx: FiberContext, rng: random.Random, cases: int) -> None:
    failures: dict[str, int] = {}
    for _ in range(cases):
        A = random_operator(ctx, rng)
        for name, (matrix_value, symbol_value) in trace_report(A, ctx).items():
            failures[name] = failures.get(name, 0) + (matrix_value != symbol_value)
    for name, count in sorted(failures.items()):
        report.record(f"trace-{name}{_tag(ctx.n, ctx.r)}", count == 0, residual=count, tolerance=0)


def _check_star(report: RunReport, n: int) -> None:
    for t in (Fraction(1), Fraction(3, 2)):
        ctx = FiberContext(n=n, t=t)
        identity = identity_operator(ctx)
        if n % 2 == 0:
            star = hodge_star(ctx, require_involution=True)
            report.record(f"star-involution[n={n},t={t}]", star @ star == identity, tolerance=0)
        inverse_ok = star_inverse(ctx) @ hodge_star(ctx) == identity
        report.record(f"star-inverse[n={n},t={t}]", inverse_ok, tolerance=0)


def run_fiber_selftest(
    ns: Sequence[int] = (1, 2, 3),
    rs: Sequence[Fraction | int | str] = (0, Fraction(1, 2), 1),
    *,
    seed: int = 0,
    random_cases: int = 10,
    fault: str | None = None,
) -> RunReport:
    """Run the exact fiber identities for every (n, r) combination.

    :param ns: Fiber dimensions, each at most 3.
    :param rs: Ordering parameters in [0, 1].
    :param seed: Seed of the random operator and symbol generator.
    :param random_cases: Random operators/pairs per check.
    :param fault: Name from :data:`FAULTS` to inject a deliberate sign error.
    :return: Report whose first failing check names the broken identity.
    :raises FiberContextError: For unsupported n or unknown fault names.
    """
    if fault is not None and fault not in FAULTS:
        raise FiberContextError(f"unknown fault '{fault}', choose from {FAULTS}")
    for n in ns:
        if not 1 <= n <= SELFTEST_MAX_N:
            raise FiberContextError(f"self-test supports 1 <= n <= {SELFTEST_MAX_N}, got {n}")
    started = time.perf_counter()
    rng = random.Random(seed)
    report = RunReport(
        command="fiber-selftest",
        inputs={"n": list(ns), "r": [str(Fraction(r)) for r in rs], "seed": seed, "fault": fault},
    )
    for n in ns:
        for r in rs:
            ctx = FiberContext(n=n, r=Fraction(r))
            _check_roundtrip(report, ctx, fault)
            _check_composition(report, ctx, rng, random_cases)
            _check_traces(report, ctx, rng, random_cases)
        _check_exponential_test(report, FiberContext(n=n))
        _check_kernels(report, FiberContext(n=n), rng, random_cases)
        _check_star(report, n)
    report.wall_time = time.perf_counter() - started
    failure = report.first_failure
    outcome = "passed" if failure is None else f"failed at {failure.name}"
    logger.info("fiber self-test %s (%d checks)", outcome, len(report.checks))
    return report
