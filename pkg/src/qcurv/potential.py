"""The log-kernel potential of a curvature density and its diagnostics.

For a radial density f the potential

    v(r) = (omega_{n-1} / c_n) int_0^inf s^(n-1) f(s) [M(r, s) - log s] ds

is assembled from the angular mean M(r, s) of log|r e1 - s theta|, so the
n-dimensional singular integral collapses to nested 1D quadratures.  The
kernel of v vanishes identically at r = 0, which pins the additive constant
of a normal metric at u(0).

Also here: the unit-ball singular integral b (the "bad term"), the two-sided
growth margins of v, and the inverse-power kernel formula for iterated
Laplacians of v.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curvature import CurvatureDensity, density, total_alpha, working_spec
from .dimension import DimensionContext
from .errors import DimensionError
from .profiles import RadialProfile
from .quadrature import (
    DecayModel,
    QuadratureSpec,
    integrate_halfline,
    integrate_interval,
    integrate_log_singular,
    sphere_mean_log_kernel,
    sphere_riesz_mean,
    unit_ball_log_mass,
)
from .util import grid_map

__all__ = [
    "PotentialReport",
    "potential_v",
    "bad_term_b",
    "normality_residual",
    "bound_margins",
    "iterated_laplacian_v",
]


@dataclass
class PotentialReport:
    v_values: list = field(default_factory=list)  # (r, v(r))
    constant_estimate: float = 0.0
    residual_sup: float = 0.0
    upper_margin: float = float("nan")
    lower_check: list = field(default_factory=list)  # (r, v + b - (alpha-eps) log r)
    alpha: float = float("nan")
    eps: float = float("nan")


def potential_v(ctx: DimensionContext, d: CurvatureDensity, r: float, spec: QuadratureSpec) -> float:
    """v(r) for the density d; v(0) = 0 identically."""
    if r < 0.0:
        raise ValueError("radius must be nonnegative")
    n = ctx.n
    spec = working_spec(spec, d)

    def g(s):
        s = np.asarray(s, dtype=np.float64)
        kern = sphere_mean_log_kernel(ctx, r, s) - np.log(s)
        return s ** (n - 1) * np.asarray(d.f(s)) * kern

    if r == 0.0:
        return 0.0

    total = 0.0
    # split at the kernel corner s = r, graded on both sides
    cuts = sorted({0.0, 0.5 * r, r, 1.5 * r})
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b <= a:
            continue
        if a == 0.0 and b < r:
            total += integrate_interval(g, a, b, spec).value
        else:
            total += integrate_log_singular(g, r, a, b, spec).value

    # past 1.5 r the kernel behaves like M - log s = O((r/s)^2); fold that
    # into the declared density decay for the half-line tail
    tail_rate = d.decay.rate - (n - 1) + 2.0 if d.decay.kind == "power" else d.decay.rate

    def g_tail(s):
        return g(s)

    res = integrate_halfline(g_tail, 1.5 * r, spec, DecayModel(d.decay.kind, tail_rate))
    total += res.value
    return ctx.omega_n_minus_1 / ctx.c_n * total


def bad_term_b(ctx: DimensionContext, d: CurvatureDensity, r: float, spec: QuadratureSpec) -> float:
    """b(r) = (1/c_n) int_{|x - y| < 1} log(1/|x - y|) f(y) dy at |x| = r.

    Reduced to the radial integral of s^(n-1) f(s) times the angular
    log-mass of the unit ball; the integrand has a logarithmic singularity
    at s = r, handled by the graded singular quadrature.
    """
    if r < 0.0:
        raise ValueError("radius must be nonnegative")
    n = ctx.n
    spec = working_spec(spec, d)

    def g(s):
        s = np.asarray(s, dtype=np.float64)
        return s ** (n - 1) * np.asarray(d.f(s)) * unit_ball_log_mass(ctx, r, s)

    lo = max(0.0, r - 1.0)
    hi = r + 1.0
    res = integrate_log_singular(g, r, lo, hi, spec)
    return _omega(n - 2) / ctx.c_n * res.value


def _omega(k: int) -> float:
    """Measure of S^k."""
    return 2.0 * math.pi ** ((k + 1) / 2.0) / math.gamma((k + 1) / 2.0)


def normality_residual(
    ctx: DimensionContext, u: RadialProfile, spec: QuadratureSpec, r_grid
) -> PotentialReport:
    """How far u + v is from a constant on the grid.

    The constant is pinned at u(0) + v(0) = u(0); for a normal metric the
    residual is quadrature noise, for a non-normal one it grows with r.
    """
    d = density(ctx, u)
    grid = np.asarray(sorted(r_grid), dtype=np.float64)
    rows = grid_map(lambda r: (float(r), potential_v(ctx, d, float(r), spec)), grid)
    constant = float(u.eval(0.0, 0))
    residual = max(abs(float(u.eval(r, 0)) + v - constant) for r, v in rows) if rows else 0.0
    return PotentialReport(v_values=rows, constant_estimate=constant, residual_sup=residual)


def bound_margins(
    ctx: DimensionContext,
    u: RadialProfile,
    eps: float,
    spec: QuadratureSpec,
    r_grid,
) -> PotentialReport:
    """Margins of the two-sided growth bounds for v on a tail grid.

    upper_margin = max over the grid of v(r) - alpha log r  (bounded above)
    lower_check rows = v(r) + b(r) - (alpha - eps) log r     (bounded below)
    """
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    d = density(ctx, u)
    alpha = total_alpha(ctx, d, spec)
    grid = np.asarray(sorted(r_grid), dtype=np.float64)
    if np.any(grid <= 0.0):
        raise ValueError("margin grid must be positive")
    v_rows = []
    lower_rows = []
    upper = -np.inf
    for r in grid:
        r = float(r)
        v = potential_v(ctx, d, r, spec)
        b = bad_term_b(ctx, d, r, spec)
        v_rows.append((r, v))
        upper = max(upper, v - alpha * np.log(r))
        lower_rows.append((r, v + b - (alpha - eps) * np.log(r)))
    return PotentialReport(
        v_values=v_rows,
        constant_estimate=float(u.eval(0.0, 0)),
        residual_sup=0.0,
        upper_margin=float(upper),
        lower_check=lower_rows,
        alpha=alpha,
        eps=float(eps),
    )


def iterated_laplacian_v(
    ctx: DimensionContext, d: CurvatureDensity, k: int, r: float, spec: QuadratureSpec
) -> float:
    """(-Lap)^k v(r) = (d_k / c_n) int f(y) / |x - y|^(2k) dy, 1 <= k <= m-1.

    The inverse-power kernel is reduced by its angular mean; the radial
    integrand has a corner at s = r, so the range splits there.
    """
    if not 1 <= k <= ctx.m - 1:
        raise DimensionError(f"kernel recursion defined for 1 <= k <= m-1, got k={k}")
    if r < 0.0:
        raise ValueError("radius must be nonnegative")
    n = ctx.n
    spec = working_spec(spec, d)

    def g(s):
        s = np.asarray(s, dtype=np.float64)
        return s ** (n - 1) * np.asarray(d.f(s)) * sphere_riesz_mean(ctx, r, s, k)

    total = 0.0
    if r > 0.0:
        cuts = sorted({0.0, 0.5 * r, r, 1.5 * r})
        for a, b in zip(cuts[:-1], cuts[1:]):
            if b > a:
                total += integrate_log_singular(g, r, a, b, spec).value
        start = 1.5 * r
    else:
        start = 0.0

    tail_rate = d.decay.rate - (n - 1) + 2.0 * k if d.decay.kind == "power" else d.decay.rate
    res = integrate_halfline(g, start, spec, DecayModel(d.decay.kind, tail_rate))
    total += res.value
    return ctx.d(k) / ctx.c_n * ctx.omega_n_minus_1 * total
