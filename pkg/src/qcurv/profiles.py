"""Radial conformal factors u(r) with high-order derivative access.

Catalog entries carry hand-derived closed-form derivatives: the k-th
derivative of log(1 + r^2) is evaluated exactly through the factorisation
1 + r^2 = (1 + ir)(1 - ir),

    d^k/dr^k log(1+r^2) = (k-1)! (-1)^(k-1) * 2 Re[ i^k / (1+ir)^k ],

so no symbolic differentiation or finite differencing happens at runtime.
Numeric profiles interpolate tabulated samples with a smoothing-free spline
of order max_order + 1 and differentiate the spline; they are accurate to
roughly 1e-6 in value and 1e-3 at the top derivative order on dense grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.interpolate import make_interp_spline

from .dimension import DimensionContext
from .errors import DerivativeOrderError, ProfileError

__all__ = [
    "RadialProfile",
    "PerturbedField",
    "catalog_sphere_family",
    "catalog_counterexample",
    "numeric_profile",
    "make_perturbed",
]


class RadialProfile:
    """A radial function exposing d^k u / dr^k for k = 0..max_order.

    Profiles are immutable evaluators; concurrent evaluation is safe.
    """

    def __init__(
        self,
        deriv_fn: Callable[[np.ndarray, int], np.ndarray],
        max_order: int,
        provenance: str,
        asymptotic_slope_hint: float | None = None,
        label: str = "",
    ):
        self._deriv_fn = deriv_fn
        self.max_order = int(max_order)
        self.provenance = provenance
        self.asymptotic_slope_hint = asymptotic_slope_hint
        self.label = label

    def eval(self, r, order: int = 0):
        if not 0 <= order <= self.max_order:
            raise DerivativeOrderError(
                f"order {order} outside 0..{self.max_order} for profile {self.label!r}"
            )
        arr = np.asarray(r, dtype=np.float64)
        if np.any(arr < 0.0):
            raise ProfileError("radius must be nonnegative")
        out = self._deriv_fn(np.atleast_1d(arr), order)
        return float(out[0]) if arr.ndim == 0 else out

    def __call__(self, r):
        return self.eval(r, 0)


def _log1p_r2_derivative(r: np.ndarray, k: int) -> np.ndarray:
    """Exact k-th derivative of log(1 + r^2) for k >= 1."""
    z = 1.0 + 1j * r
    val = (1j**k) / z**k
    return math.factorial(k - 1) * (-1.0) ** (k - 1) * 2.0 * val.real


def catalog_sphere_family(ctx: DimensionContext, alpha: float) -> RadialProfile:
    """u_alpha(r) = (alpha/2) log(2 / (1 + r^2)) for alpha in (0, 1].

    The spherical catalog family: complete metric, total curvature mass
    alpha, asymptotic slope -alpha.
    """
    if not 0.0 < alpha <= 1.0:
        raise ProfileError(f"alpha must lie in (0, 1], got {alpha}")
    a = float(alpha)

    def deriv(r: np.ndarray, order: int) -> np.ndarray:
        if order == 0:
            return (a / 2.0) * (math.log(2.0) - np.log1p(r * r))
        return -(a / 2.0) * _log1p_r2_derivative(r, order)

    return RadialProfile(
        deriv,
        max_order=2 * ctx.m,
        provenance="closed_form",
        asymptotic_slope_hint=-a,
        label=f"sphere:{alpha:g}",
    )


def catalog_counterexample(ctx: DimensionContext) -> RadialProfile:
    """u(r) = log(2/(1+r^2)) + r^2.

    Complete, but with total curvature mass 2: the quadratic term is
    annihilated by every iterated Laplacian of order >= 2 while destroying
    normality and the curvature decay condition.
    """

    def deriv(r: np.ndarray, order: int) -> np.ndarray:
        if order == 0:
            return math.log(2.0) - np.log1p(r * r) + r * r
        if order == 1:
            return -_log1p_r2_derivative(r, 1) + 2.0 * r
        if order == 2:
            return -_log1p_r2_derivative(r, 2) + 2.0
        return -_log1p_r2_derivative(r, order)

    return RadialProfile(
        deriv,
        max_order=2 * ctx.m,
        provenance="closed_form",
        asymptotic_slope_hint=None,
        label="counterexample",
    )


def numeric_profile(samples, max_order: int = 4) -> RadialProfile:
    """Interpolated profile from tabulated (r, u) samples.

    samples: array-like of shape (N, 2) with a strictly increasing r column
    and N >= max_order + 3.  Derivatives come from a smoothing-free spline of
    order max_order + 1; accuracy degrades with derivative order.
    """
    arr = np.asarray(samples, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ProfileError("samples must be an (N, 2) table of (r, u) pairs")
    r, u = arr[:, 0], arr[:, 1]
    if arr.shape[0] < max_order + 3:
        raise ProfileError(
            f"need at least {max_order + 3} samples for order {max_order}, got {arr.shape[0]}"
        )
    if np.any(np.diff(r) <= 0.0):
        raise ProfileError("sample radii must be strictly increasing")
    if np.any(r < 0.0):
        raise ProfileError("sample radii must be nonnegative")

    spline = make_interp_spline(r, u, k=max_order + 1)
    derivs = [spline] + [spline.derivative(j) for j in range(1, max_order + 1)]

    # crude tail slope from the last decade of samples, used as a hint only
    hint = None
    if r[-1] > 0 and r[-1] / max(r[0], 1e-12) > 3.0:
        j = int(np.searchsorted(r, r[-1] / 3.0))
        j = min(j, len(r) - 2)
        denom = math.log(r[-1] / r[j])
        if denom > 0:
            hint = float((u[-1] - u[j]) / denom)

    # beyond the sampled range the spline would extrapolate polynomially;
    # continue along the log-linear asymptotic model instead
    r_hi = float(r[-1])
    u_hi = float(spline(r_hi))
    tail_slope = hint if hint is not None else 0.0

    def deriv(x: np.ndarray, order: int) -> np.ndarray:
        out = np.empty_like(x)
        inside = x <= r_hi
        if np.any(inside):
            out[inside] = np.asarray(derivs[order](x[inside]), dtype=np.float64)
        if np.any(~inside):
            xt = x[~inside]
            if order == 0:
                out[~inside] = u_hi + tail_slope * np.log(xt / r_hi)
            else:
                out[~inside] = (
                    tail_slope * (-1.0) ** (order - 1) * math.factorial(order - 1) / xt**order
                )
        return out

    return RadialProfile(
        deriv,
        max_order=max_order,
        provenance="numeric_differentiated",
        asymptotic_slope_hint=hint,
        label="numeric",
    )


@dataclass(frozen=True)
class PerturbedField:
    """base(|x|) + envelope(|x|) * angular(x/|x|) with a decaying envelope.

    The angular part is the first spherical harmonic theta -> theta_1, so
    every spherical average of the field collapses to the base profile.
    """

    base: RadialProfile
    amplitude: float
    decay_power: float

    def envelope(self, r):
        r = np.asarray(r, dtype=np.float64)
        return self.amplitude / (1.0 + r) ** self.decay_power

    def angular(self, dirs: np.ndarray) -> np.ndarray:
        return np.asarray(dirs, dtype=np.float64)[:, 0]

    def value_at(self, points: np.ndarray) -> np.ndarray:
        """Field values at an (N, n) array of points."""
        pts = np.asarray(points, dtype=np.float64)
        r = np.linalg.norm(pts, axis=1)
        theta1 = np.divide(pts[:, 0], r, out=np.zeros_like(r), where=r > 0.0)
        return self.base.eval(r, 0) + self.envelope(r) * theta1


def make_perturbed(base: RadialProfile, amplitude: float, decay_power: float) -> PerturbedField:
    if decay_power <= 0.0:
        raise ProfileError("decay_power must be positive")
    return PerturbedField(base=base, amplitude=float(amplitude), decay_power=float(decay_power))
