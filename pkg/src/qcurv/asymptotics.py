"""Asymptotic diagnostics of the conformal factor at large radius.

Three independent estimates of the total curvature mass must agree for the
catalog profiles: the density integral (alpha), the log-slope of u, and the
limit of r u'(r).  Also here: spherical averages of perturbed fields, the
exponential-average ratio (a Jensen-gap diagnostic that tends to 1 for
normal metrics), and the invariance of alpha under spherical averaging,
checked with a finite-difference biharmonic stencil in dimension 4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curvature import CurvatureDensity, density, total_alpha
from .dimension import DimensionContext
from .errors import DimensionError, QcurvError
from .profiles import PerturbedField, RadialProfile
from .quadrature import QuadratureSpec, sphere_directions, sphere_quadrature

__all__ = [
    "AsymptoticsReport",
    "SlopeFit",
    "RadialLimitResult",
    "BoundsResult",
    "slope_estimate",
    "radial_limit_check",
    "bounds_check",
    "spherical_average",
    "exp_average_ratio",
    "averaged_alpha_invariance",
    "asymptotics_report",
]


@dataclass
class SlopeFit:
    slope: float
    slope_residual: float
    grid: list = field(default_factory=list)
    non_logarithmic: bool = False


@dataclass
class RadialLimitResult:
    table: list = field(default_factory=list)  # (r, r u'(r))
    limit: float = float("nan")
    alpha: float = float("nan")
    mismatch: float = float("nan")


@dataclass
class BoundsResult:
    ok: bool
    c_upper: float  # max of u + (alpha - eps) log r over the grid
    c_lower: float  # max(0, -min of u + alpha log r)
    upper_rows: list = field(default_factory=list)
    lower_rows: list = field(default_factory=list)


@dataclass
class AsymptoticsReport:
    slope: float
    slope_residual: float
    ru_prime_tail: list
    ru_prime_limit: float
    bounds_ok: bool
    grid: list
    alpha: float
    non_logarithmic: bool = False


def slope_estimate(u: RadialProfile, r_grid) -> SlopeFit:
    """Least-squares slope of u(r) against log r on a tail grid."""
    grid = np.asarray(sorted(r_grid), dtype=np.float64)
    if grid.size < 4 or grid[-1] / grid[0] < 100.0:
        raise ValueError("slope grid needs >= 4 points spanning >= 2 decades")
    L = np.log(grid)
    y = np.asarray(u.eval(grid, 0), dtype=np.float64)
    basis = np.stack([np.ones_like(L), L], axis=1)
    coef, *_ = np.linalg.lstsq(basis, y, rcond=None)
    fitted = basis @ coef
    residual = float(np.max(np.abs(fitted - y)) / L[-1])
    return SlopeFit(
        slope=float(coef[1]),
        slope_residual=residual,
        grid=grid.tolist(),
        non_logarithmic=residual > 0.1,
    )


def radial_limit_check(
    ctx: DimensionContext,
    u: RadialProfile,
    d: CurvatureDensity,
    r_grid,
    spec: QuadratureSpec | None = None,
) -> RadialLimitResult:
    """Tail table of r u'(r) with its extrapolated limit, against -alpha.

    The limit uses the ansatz L + c/r^2 on the last two grid radii
    (Richardson step exact for the catalog family); the fallback for short
    grids is the last sample.
    """
    grid = np.asarray(sorted(r_grid), dtype=np.float64)
    if np.any(grid <= 0.0):
        raise ValueError("radial-limit grid must be positive")
    t = grid * np.asarray(u.eval(grid, 1), dtype=np.float64)
    rows = [(float(r), float(v)) for r, v in zip(grid, t)]
    if grid.size >= 2:
        r1, r2 = grid[-2], grid[-1]
        limit = float((t[-1] * r2**2 - t[-2] * r1**2) / (r2**2 - r1**2))
    else:
        limit = float(t[-1])
    alpha = d.total_mass_over_cn
    if alpha is None:
        alpha = total_alpha(ctx, d, spec or QuadratureSpec())
    return RadialLimitResult(
        table=rows, limit=limit, alpha=alpha, mismatch=abs(limit + alpha)
    )


# growth threshold (per grid step) above which a margin is judged unbounded
_GROWTH_STEP = 0.1


def bounds_check(
    ctx: DimensionContext,
    u: RadialProfile,
    eps: float,
    r_grid,
    spec: QuadratureSpec | None = None,
) -> BoundsResult:
    """Two-sided boundedness of u between -(alpha - eps) log r and -alpha log r.

    True iff u + alpha log r is bounded below and u + (alpha - eps) log r is
    bounded above over the tail grid; the reported constants are the grid
    extrema.  Unboundedness is judged by sustained growth over the last
    grid steps (artifact policy; a finite grid cannot prove unboundedness).
    """
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    spec = spec or QuadratureSpec()
    alpha = total_alpha(ctx, density(ctx, u), spec)
    grid = np.asarray(sorted(r_grid), dtype=np.float64)
    if np.any(grid <= 0.0):
        raise ValueError("bounds grid must be positive")
    uv = np.asarray(u.eval(grid, 0), dtype=np.float64)
    L = np.log(grid)
    m_low = uv + alpha * L
    m_up = uv + (alpha - eps) * L
    up_grows = grid.size >= 3 and bool(np.all(np.diff(m_up[-3:]) > _GROWTH_STEP))
    low_falls = grid.size >= 3 and bool(np.all(np.diff(m_low[-3:]) < -_GROWTH_STEP))
    return BoundsResult(
        ok=not (up_grows or low_falls),
        c_upper=float(np.max(m_up)),
        c_lower=float(max(0.0, -np.min(m_low))),
        upper_rows=[(float(r), float(v)) for r, v in zip(grid, m_up)],
        lower_rows=[(float(r), float(v)) for r, v in zip(grid, m_low)],
    )


def _field_values(field_obj, points: np.ndarray) -> np.ndarray:
    if isinstance(field_obj, PerturbedField):
        return field_obj.value_at(points)
    r = np.linalg.norm(np.asarray(points, dtype=np.float64), axis=1)
    return np.asarray(field_obj.eval(r, 0), dtype=np.float64)


def spherical_average(ctx: DimensionContext, field_obj, r: float, spec: QuadratureSpec) -> float:
    """Mean of the field over the sphere of radius r."""
    if r <= 0.0:
        raise ValueError("radius must be positive")
    if isinstance(field_obj, RadialProfile):
        return float(field_obj.eval(r, 0))
    return sphere_quadrature(ctx, lambda dirs: _field_values(field_obj, r * dirs), spec)


def exp_average_ratio(
    ctx: DimensionContext, field_obj, k: float, r: float, spec: QuadratureSpec
) -> float:
    """[mean of e^(k u) over the r-sphere] / e^(k ubar(r)); >= 1 by Jensen.

    Exactly 1 for radial fields; tends to 1 as the angular part decays.
    """
    if k <= 0.0 or r <= 0.0:
        raise ValueError("k and r must be positive")
    if isinstance(field_obj, RadialProfile):
        return 1.0
    vals_mean = sphere_quadrature(
        ctx, lambda dirs: np.exp(k * _field_values(field_obj, r * dirs)), spec
    )
    ubar = spherical_average(ctx, field_obj, r, spec)
    return vals_mean / math.exp(k * ubar)


# --- alpha invariance under spherical averaging (dimension 4) ---------------

_STENCIL_H = 0.005
_INVARIANCE_SPHERE_NODES = 16
_RADIAL_PANELS = ((0.0, 1.0), (1.0, 3.0), (3.0, 10.0), (10.0, 40.0))
_PANEL_NODES = 16


def _laplacian_values(field_obj, pts: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Second-order FD Laplacian of the field at each row of pts (n = 4)."""
    n = pts.shape[1]
    center = _field_values(field_obj, pts)
    acc = -2.0 * n * center
    for i in range(n):
        shift = np.zeros((1, n))
        shift[0, i] = 1.0
        acc += _field_values(field_obj, pts + h * shift)
        acc += _field_values(field_obj, pts - h * shift)
    return acc / (h[:, 0] ** 2)


def _biharmonic_values(field_obj, pts: np.ndarray, h: np.ndarray) -> np.ndarray:
    n = pts.shape[1]
    center = _laplacian_values(field_obj, pts, h)
    acc = -2.0 * n * center
    for i in range(n):
        shift = np.zeros((1, n))
        shift[0, i] = 1.0
        acc += _laplacian_values(field_obj, pts + h * shift, h)
        acc += _laplacian_values(field_obj, pts - h * shift, h)
    out = acc / (h[:, 0] ** 2)
    if not np.all(np.isfinite(out)):
        raise QcurvError("finite-difference biharmonic stencil produced non-finite values")
    return out


def averaged_alpha_invariance(
    ctx: DimensionContext, field_obj, spec: QuadratureSpec
) -> tuple[float, float]:
    """(alpha from the full field, alpha from the spherically averaged metric).

    The full-field mass integrates the stencil density (1/2) Lap^2 u over
    spheres and radii; the averaged mass goes through the radial pipeline of
    the base profile after verifying that spherical averages of the field
    collapse to it.  Implemented for n = 4 (stencil cost grows steeply with
    dimension; the identity itself is dimension-free).
    """
    if ctx.n != 4:
        raise DimensionError("averaged_alpha_invariance is implemented for n = 4 only")
    if isinstance(field_obj, RadialProfile) or (
        isinstance(field_obj, PerturbedField) and field_obj.amplitude == 0.0
    ):
        # already radial: averaging changes nothing, both routes coincide
        base = field_obj.base if isinstance(field_obj, PerturbedField) else field_obj
        alpha = total_alpha(ctx, density(ctx, base), spec)
        return alpha, alpha
    base = field_obj.base

    dirs, w = sphere_directions(4, _INVARIANCE_SPHERE_NODES)

    def mean_density(r: float) -> float:
        pts = r * dirs
        h = np.full((pts.shape[0], 1), _STENCIL_H * (1.0 + r))
        return float(w @ (0.5 * _biharmonic_values(field_obj, pts, h)))

    gx, gw = np.polynomial.legendre.leggauss(_PANEL_NODES)
    total = 0.0
    for a, b in _RADIAL_PANELS:
        mids = 0.5 * (gx + 1.0) * (b - a) + a
        vals = np.array([mids[j] ** 3 * mean_density(float(mids[j])) for j in range(mids.size)])
        total += 0.5 * (b - a) * float(gw @ vals)
    # power tail past the last panel: integrand ~ r^(3 - 2n) = r^-5 for n = 4
    T = _RADIAL_PANELS[-1][1]
    gT = T**3 * mean_density(T)
    total += gT * T / 4.0

    alpha_field = ctx.omega_n_minus_1 / ctx.c_n * total

    for r_check in (0.5, 2.0, 10.0):
        avg = spherical_average(ctx, field_obj, r_check, spec)
        if abs(avg - float(base.eval(r_check, 0))) > 1e-8 * max(1.0, abs(avg)):
            raise QcurvError(
                "spherical average of the field does not collapse to its base profile"
            )
    alpha_avg = total_alpha(ctx, density(ctx, base), spec)
    return alpha_field, alpha_avg


def asymptotics_report(
    ctx: DimensionContext,
    u: RadialProfile,
    spec: QuadratureSpec,
    eps: float = 0.1,
    r_grid=None,
) -> AsymptoticsReport:
    """Combined slope / radial-limit / boundedness report for one profile."""
    grid = np.asarray(r_grid if r_grid is not None else np.geomspace(1e2, 1e5, 13))
    fit = slope_estimate(u, grid)
    d = density(ctx, u)
    rl = radial_limit_check(ctx, u, d, grid, spec)
    bounds = bounds_check(ctx, u, eps, grid, spec)
    return AsymptoticsReport(
        slope=fit.slope,
        slope_residual=fit.slope_residual,
        ru_prime_tail=rl.table,
        ru_prime_limit=rl.limit,
        bounds_ok=bounds.ok,
        grid=grid.tolist(),
        alpha=rl.alpha,
        non_logarithmic=fit.non_logarithmic,
    )
