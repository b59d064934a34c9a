"""Enums and constants for superweyl.

Dependencies: enum (standard library).
"""

from enum import StrEnum


class HbarMode(StrEnum):
    """How Planck's constant enters fiber computations."""

    FORMAL = "formal"
    NUMERIC = "numeric"


class Parity(StrEnum):
    """Z2 degree of a fiber operator or multivector."""

    EVEN = "even"
    ODD = "odd"
    MIXED = "mixed"


class CompositionMethod(StrEnum):
    """Evaluation path for the composition of fiber symbols."""

    BRUTE_FORCE = "brute_force"
    BIDIFFERENTIAL = "bidifferential"
    INTEGRAL = "integral"


class WeitzenbockVariant(StrEnum):
    """Curvature-term form used on the right-hand side of the Weitzenbock formula."""

    WEITZ1 = "weitz1"
    WEITZ2 = "weitz2"
    ORDERED = "ordered"


class GradingKind(StrEnum):
    """Grading involutions available for graded traces."""

    PARITY = "parity"
    IDENTITY = "identity"
    STAR = "star"


class CheckStatus(StrEnum):
    """Outcome of a single verification check."""

    PASS = "pass"
    FAIL = "fail"
    SKIP = "skip"


# Generator block prefixes. Names are prefix + 1-based index.
XI = "xi"
THETA = "theta"
ETA = "eta"
EPS = "eps"
TAU = "tau"
XI_MID = "zeta"
XI_LEFT = "xiL"
THETA_LEFT = "thetaL"
XI_RIGHT = "xiR"
THETA_RIGHT = "thetaR"

# Blocks that transform contragrediently; their measures are listed in descending order.
CONTRAGREDIENT_PREFIXES = frozenset({THETA, TAU, THETA_LEFT, THETA_RIGHT})

MAX_FIBER_DIM = 6
MAX_CHART_DIM = 4

DEFAULT_TRIM = 1e-4
DEFAULT_TOLERANCE = 1e-8
DEFAULT_SAMPLES = 20
DEFAULT_QUAD_NODES = 64
DEFAULT_SEED = 0
ABSOLUTE_FLOOR = 1e-12
NUMERIC_SYMBOL_TOLERANCE = 1e-10
EULER_TOLERANCE = 1e-3
IMAG_TOLERANCE = 1e-10
EULER_DENSITY_TOLERANCE = 1e-8
RATIONALIZE_MAX_DENOMINATOR = 10**6

QUADRATURE_CHUNK = 8192

THREADS_ENV_VAR = "SUPERWEYL_THREADS"

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2

BUNDLED_SPECS = ("sphere2", "torus2", "h2", "s2xs2", "sphere4")
