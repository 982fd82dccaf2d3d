"""Vectorised numpy implementations of the angular kernel means.

Each function integrates over the polar angle between a fixed point at
radius r and a running point at radius s on the unit sphere, with the
surface weight sin^(n-2)(phi).  The integrals are split into two legs:

  leg A: phi in [0, c], c <= 1, mapped through phi = c * psi^2 so the
         (near-)singular behaviour at phi = 0 is flattened;
  leg B: phi in [c, phi_max], plain Gauss-Legendre.

The squared chord distance is evaluated as (r-s)^2 + 4 r s sin^2(phi/2),
which is exact at phi = 0 and free of cancellation.
"""

from __future__ import annotations

import numpy as np


def log_kernel_mean(r, s, n, ga_x, ga_w, gb_x, gb_w, inv_i0):
    """Mean over unit directions theta of log|r e1 - s_i theta|, per s_i."""
    s = np.atleast_1d(np.asarray(s, dtype=np.float64))
    psi = 0.5 * (ga_x + 1.0)
    phi_a = psi * psi
    wa = ga_w * np.sin(phi_a) ** (n - 2) * psi  # 0.5 jacobian * 2 psi = psi
    phi_b = 0.5 * (gb_x + 1.0) * (np.pi - 1.0) + 1.0
    wb = 0.5 * (np.pi - 1.0) * gb_w * np.sin(phi_b) ** (n - 2)

    phi = np.concatenate([phi_a, phi_b])
    w = np.concatenate([wa, wb])

    d2 = (r - s)[:, None] ** 2 + 4.0 * r * s[:, None] * np.sin(0.5 * phi)[None, :] ** 2
    # s_i = r = 0 would give d2 = 0 identically; callers keep s > 0 or r > 0
    return 0.5 * (np.log(d2) @ w) * inv_i0


def riesz_kernel_mean(r, s, k, n, ga_x, ga_w, gb_x, gb_w, inv_i0):
    """Mean over unit directions theta of |r e1 - s_i theta|^(-2k), per s_i."""
    s = np.atleast_1d(np.asarray(s, dtype=np.float64))
    psi = 0.5 * (ga_x + 1.0)
    phi_a = psi * psi
    wa = ga_w * np.sin(phi_a) ** (n - 2) * psi
    phi_b = 0.5 * (gb_x + 1.0) * (np.pi - 1.0) + 1.0
    wb = 0.5 * (np.pi - 1.0) * gb_w * np.sin(phi_b) ** (n - 2)

    phi = np.concatenate([phi_a, phi_b])
    w = np.concatenate([wa, wb])

    d2 = (r - s)[:, None] ** 2 + 4.0 * r * s[:, None] * np.sin(0.5 * phi)[None, :] ** 2
    return (d2 ** (-k) @ w) * inv_i0


def ball_log_mass(r, s, n, ga_x, ga_w, gb_x, gb_w):
    """Integral over phi in [0, phi_max] of log(1/d) sin^(n-2)(phi), per s_i.

    phi_max is the aperture of the unit ball around r e1 as seen from the
    sphere of radius s_i; rows with |r - s_i| >= 1 contribute zero.
    Unnormalised (no division by the total sphere weight).
    """
    s = np.atleast_1d(np.asarray(s, dtype=np.float64))
    out = np.zeros(s.shape, dtype=np.float64)
    inside = np.abs(r - s) < 1.0
    if not np.any(inside):
        return out
    si = s[inside]

    # cos(phi_max) = (r^2 + s^2 - 1) / (2 r s), full sphere when r + s <= 1
    rs = r * si
    with np.errstate(divide="ignore", invalid="ignore"):
        cosmax = np.where(rs > 0.0, (r * r + si * si - 1.0) / (2.0 * rs), -1.0)
    phimax = np.arccos(np.clip(cosmax, -1.0, 1.0))
    phimax = np.where(r + si <= 1.0, np.pi, phimax)

    c = np.minimum(phimax, 1.0)
    psi = 0.5 * (ga_x + 1.0)
    phi_a = c[:, None] * (psi * psi)[None, :]
    wa = c[:, None] * (ga_w * psi)[None, :]
    d2a = (r - si)[:, None] ** 2 + 4.0 * rs[:, None] * np.sin(0.5 * phi_a) ** 2
    val = np.sum(wa * np.sin(phi_a) ** (n - 2) * (-0.5) * np.log(d2a), axis=1)

    span = phimax - c
    has_b = span > 0.0
    if np.any(has_b):
        tb = 0.5 * (gb_x + 1.0)
        phi_b = c[has_b][:, None] + span[has_b][:, None] * tb[None, :]
        wb = span[has_b][:, None] * (0.5 * gb_w)[None, :]
        d2b = (r - si[has_b])[:, None] ** 2 + 4.0 * rs[has_b][:, None] * np.sin(0.5 * phi_b) ** 2
        val_b = np.sum(wb * np.sin(phi_b) ** (n - 2) * (-0.5) * np.log(d2b), axis=1)
        val[has_b] += val_b

    out[inside] = val
    return out
