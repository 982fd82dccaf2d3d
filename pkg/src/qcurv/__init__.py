"""Desk-scale numerics for Q-curvature of conformally flat metrics.

Given a radial conformal factor u (so g = e^(2u)|dx|^2 on R^n, n even), the
package evaluates and cross-checks: iterated radial Laplacians and the
curvature Q with 2 Q e^(nu) = (-Lap)^m u; the total mass alpha of the
density Q e^(nu) over c_n; the log-kernel potential and its growth bounds;
isoperimetric ratios of metric balls and their defect limit 1 - alpha;
asymptotic slopes; the polyharmonic ball-mean expansion; and completeness
and curvature-decay classification.
"""

__version__ = "0.1.0"

from .dimension import DimensionContext, make_context
from .profiles import (
    PerturbedField,
    RadialProfile,
    catalog_counterexample,
    catalog_sphere_family,
    make_perturbed,
    numeric_profile,
)
from .quadrature import DecayModel, IntegralResult, QuadratureSpec

__all__ = [
    "__version__",
    "DimensionContext",
    "make_context",
    "RadialProfile",
    "PerturbedField",
    "catalog_sphere_family",
    "catalog_counterexample",
    "numeric_profile",
    "make_perturbed",
    "QuadratureSpec",
    "DecayModel",
    "IntegralResult",
]
