"""Polyharmonic ball-mean expansion and its verification harness.

For Lap^m h = 0 near x0 the ball mean satisfies

    mean over B_R(x0) of h = sum_{i<m} c_i R^(2i) (Lap^i h)(x0),

with the coefficients owned by the dimension context.  The harness compares
that prediction against a ball average computed by radial-spherical
factorisation, which cross-checks the coefficients, the sphere rules, and
the radial quadrature in one shot.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .dimension import DimensionContext
from .quadrature import QuadratureSpec, sphere_directions

__all__ = [
    "PolyharmonicTestFn",
    "pizzetti_prediction",
    "pizzetti_verify",
    "generator_set",
]


@dataclass(frozen=True)
class PolyharmonicTestFn:
    """A polynomial with exactly known iterated Laplacians.

    laplacian_powers_at(x0, i) must return (Lap^i h)(x0) and must vanish for
    i >= degree_of_polyharmonicity.
    """

    name: str
    eval: Callable[[np.ndarray], np.ndarray]
    laplacian_powers_at: Callable[[np.ndarray, int], float]
    degree_of_polyharmonicity: int


def pizzetti_prediction(ctx: DimensionContext, h: PolyharmonicTestFn, x0, R: float) -> float:
    x0 = np.asarray(x0, dtype=np.float64)
    return sum(
        ctx.pizzetti[i] * R ** (2 * i) * h.laplacian_powers_at(x0, i) for i in range(ctx.m)
    )


def pizzetti_verify(
    ctx: DimensionContext, h: PolyharmonicTestFn, x0, R: float, spec: QuadratureSpec
) -> float:
    """|prediction - quadrature ball average| for one test function."""
    x0 = np.asarray(x0, dtype=np.float64)
    dirs, w = sphere_directions(ctx.n, spec.sphere_nodes)
    gx, gw = np.polynomial.legendre.leggauss(24)
    radii = 0.5 * (gx + 1.0) * R
    # ball mean = (n / R^n) int_0^R r^(n-1) (sphere mean at r) dr
    means = np.array([float(w @ h.eval(x0[None, :] + r * dirs)) for r in radii])
    integral = 0.5 * R * float(gw @ (radii ** (ctx.n - 1) * means))
    ball_mean = ctx.n / R**ctx.n * integral
    return abs(pizzetti_prediction(ctx, h, x0, R) - ball_mean)


def generator_set(ctx: DimensionContext) -> list[PolyharmonicTestFn]:
    """Polyharmonic test polynomials: 1, x1, x1 x2, |x|^2, |x|^2 x1."""
    n = ctx.n

    def const(pts):
        return np.ones(pts.shape[0])

    def x1(pts):
        return pts[:, 0]

    def x1x2(pts):
        return pts[:, 0] * pts[:, 1]

    def sq(pts):
        return np.sum(pts * pts, axis=1)

    def sqx1(pts):
        return np.sum(pts * pts, axis=1) * pts[:, 0]

    return [
        PolyharmonicTestFn(
            "1", const, lambda x0, i: 1.0 if i == 0 else 0.0, 1
        ),
        PolyharmonicTestFn(
            "x1", x1, lambda x0, i: float(x0[0]) if i == 0 else 0.0, 1
        ),
        PolyharmonicTestFn(
            "x1*x2", x1x2, lambda x0, i: float(x0[0] * x0[1]) if i == 0 else 0.0, 1
        ),
        PolyharmonicTestFn(
            "|x|^2",
            sq,
            lambda x0, i: float(x0 @ x0) if i == 0 else (2.0 * n if i == 1 else 0.0),
            2,
        ),
        PolyharmonicTestFn(
            "|x|^2*x1",
            sqx1,
            lambda x0, i: float((x0 @ x0) * x0[0])
            if i == 0
            else ((2.0 * n + 4.0) * float(x0[0]) if i == 1 else 0.0),
            2,
        ),
    ]
