"""Chart-based Riemannian geometry: specs, curvature, identity checks, quadrature."""

from .chart import MetricChart, Point
from .curvature import (
    CurvatureData,
    CurvatureValues,
    christoffel,
    ricci_and_scalar,
    riemann,
)
from .identities import random_coefficient, verify_curvature_identities
from .quadrature import gauss_legendre, integrate_box, integrate_chart
from .spec import Manifold, bundled_spec_names, load_spec, parse_spec

__all__ = [
    "CurvatureData",
    "CurvatureValues",
    "Manifold",
    "MetricChart",
    "Point",
    "bundled_spec_names",
    "christoffel",
    "gauss_legendre",
    "integrate_box",
    "integrate_chart",
    "load_spec",
    "parse_spec",
    "random_coefficient",
    "ricci_and_scalar",
    "riemann",
    "verify_curvature_identities",
]
