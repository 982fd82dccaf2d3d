"""Numba-compiled twins of the numpy kernel implementations.

Same two-leg node layout as _numpy_impl; see that module for the math.
Angle-dependent factors are hoisted out of the per-radius loop so the inner
reduction touches two arrays and a handful of scalars.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _leg_tables(n, ga_x, ga_w, gb_x, gb_w):
    """Per-node (sin(phi/2)^2, surface-weighted quadrature weight) tables."""
    na = ga_x.shape[0]
    nb = gb_x.shape[0]
    half_sq = np.empty(na + nb)
    wgt = np.empty(na + nb)
    for j in range(na):
        psi = 0.5 * (ga_x[j] + 1.0)
        phi = psi * psi
        sh = np.sin(0.5 * phi)
        half_sq[j] = sh * sh
        wgt[j] = ga_w[j] * psi * np.sin(phi) ** (n - 2)
    for j in range(nb):
        phi = 0.5 * (gb_x[j] + 1.0) * (np.pi - 1.0) + 1.0
        sh = np.sin(0.5 * phi)
        half_sq[na + j] = sh * sh
        wgt[na + j] = 0.5 * (np.pi - 1.0) * gb_w[j] * np.sin(phi) ** (n - 2)
    return half_sq, wgt


@njit(cache=True)
def log_kernel_mean(r, s, n, ga_x, ga_w, gb_x, gb_w, inv_i0):
    s = np.atleast_1d(np.asarray(s, dtype=np.float64))
    half_sq, wgt = _leg_tables(n, ga_x, ga_w, gb_x, gb_w)
    nn = half_sq.shape[0]
    out = np.empty(s.shape[0], dtype=np.float64)
    for i in range(s.shape[0]):
        si = s[i]
        dr2 = (r - si) * (r - si)
        four_rs = 4.0 * r * si
        acc = 0.0
        for j in range(nn):
            acc += wgt[j] * np.log(dr2 + four_rs * half_sq[j])
        out[i] = 0.5 * acc * inv_i0
    return out


@njit(cache=True)
def riesz_kernel_mean(r, s, k, n, ga_x, ga_w, gb_x, gb_w, inv_i0):
    s = np.atleast_1d(np.asarray(s, dtype=np.float64))
    half_sq, wgt = _leg_tables(n, ga_x, ga_w, gb_x, gb_w)
    nn = half_sq.shape[0]
    out = np.empty(s.shape[0], dtype=np.float64)
    for i in range(s.shape[0]):
        si = s[i]
        dr2 = (r - si) * (r - si)
        four_rs = 4.0 * r * si
        acc = 0.0
        for j in range(nn):
            acc += wgt[j] * (dr2 + four_rs * half_sq[j]) ** (-k)
        out[i] = acc * inv_i0
    return out


@njit(cache=True)
def ball_log_mass(r, s, n, ga_x, ga_w, gb_x, gb_w):
    s = np.atleast_1d(np.asarray(s, dtype=np.float64))
    na = ga_x.shape[0]
    nb = gb_x.shape[0]
    out = np.zeros(s.shape[0], dtype=np.float64)
    for i in range(s.shape[0]):
        si = s[i]
        if abs(r - si) >= 1.0:
            continue
        rs = r * si
        if r + si <= 1.0:
            phimax = np.pi
        else:
            cosmax = (r * r + si * si - 1.0) / (2.0 * rs)
            if cosmax > 1.0:
                cosmax = 1.0
            elif cosmax < -1.0:
                cosmax = -1.0
            phimax = np.arccos(cosmax)
        c = phimax if phimax < 1.0 else 1.0
        dr2 = (r - si) * (r - si)
        four_rs = 4.0 * rs
        acc = 0.0
        for j in range(na):
            psi = 0.5 * (ga_x[j] + 1.0)
            phi = c * psi * psi
            sh = np.sin(0.5 * phi)
            acc += c * ga_w[j] * psi * np.sin(phi) ** (n - 2) * (-0.5) * np.log(dr2 + four_rs * sh * sh)
        span = phimax - c
        if span > 0.0:
            for j in range(nb):
                phi = c + span * 0.5 * (gb_x[j] + 1.0)
                sh = np.sin(0.5 * phi)
                acc += span * 0.5 * gb_w[j] * np.sin(phi) ** (n - 2) * (-0.5) * np.log(dr2 + four_rs * sh * sh)
        out[i] = acc
    return out
