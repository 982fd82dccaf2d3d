"""Self-contained invariant suites runnable from the command line.

Each suite returns a list of (name, passed, detail) rows; `verify` exits
nonzero iff a row fails.  The heavier cross-validation (oracle comparisons,
property tests) lives in the pytest suite; these checks are the fast,
always-available subset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .asymptotics import exp_average_ratio, slope_estimate
from .curvature import density, polyharmonic, q_curvature, total_alpha
from .dimension import make_context
from .pizzetti import generator_set, pizzetti_verify
from .profiles import catalog_sphere_family, make_perturbed
from .quadrature import QuadratureSpec, integrate_interval

__all__ = ["CheckResult", "run_suite", "SUITES"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _suite_pizzetti(spec: QuadratureSpec) -> list[CheckResult]:
    out = []
    fast = QuadratureSpec(
        rel_tol=spec.rel_tol,
        abs_tol=spec.abs_tol,
        max_subdivisions=spec.max_subdivisions,
        tail_cut=spec.tail_cut,
        sphere_nodes=min(spec.sphere_nodes, 16),
    )
    for n in (4, 6):
        ctx = make_context(n)
        x0 = np.zeros(n)
        x1 = np.zeros(n)
        x1[0] = 0.7
        for h in generator_set(ctx):
            worst = max(
                pizzetti_verify(ctx, h, x0, 1.0, fast),
                pizzetti_verify(ctx, h, x1, 2.0, fast),
            )
            out.append(
                CheckResult(f"pizzetti n={n} {h.name}", worst < 1e-8, f"defect={worst:.3e}")
            )
    return out


def _suite_layercake(spec: QuadratureSpec) -> list[CheckResult]:
    # int_0^R |B_r|-mean identity:
    #   int_0^R (1/|bd B_r|) int_{B_r} u dx dr
    #     = (1/((n-2) om_{n-1})) int_{B_R} (|x|^(2-n) - R^(2-n)) u dx
    ctx = make_context(4)
    out = []
    for label, radial_u in (("u=1", lambda s: np.ones_like(s)), ("u=|x|^2", lambda s: s * s)):
        for R in (1.0, 2.0):
            om = ctx.omega_n_minus_1
            n = ctx.n

            def inner(rr):
                def shell(s):
                    return s ** (n - 1) * radial_u(s)

                return np.array(
                    [integrate_interval(shell, 0.0, float(r), spec).value / r ** (n - 1) for r in np.atleast_1d(rr)]
                )

            lhs = integrate_interval(inner, 0.0, R, spec).value

            def rhs_int(s):
                return (s ** (2 - n) - R ** (2 - n)) * radial_u(s) * s ** (n - 1)

            rhs = integrate_interval(rhs_int, 0.0, R, spec).value / (n - 2)
            gap = abs(lhs - rhs)
            out.append(CheckResult(f"layercake {label} R={R}", gap < 1e-8, f"gap={gap:.3e}"))
    return out


def _suite_consistency(spec: QuadratureSpec) -> list[CheckResult]:
    out = []
    for n in (4, 6):
        ctx = make_context(n)
        u = catalog_sphere_family(ctx, 0.5)
        q = q_curvature(ctx, u)
        pm = polyharmonic(ctx, u, ctx.m)
        rs = np.array([0.0, 0.3, 1.0, 3.0, 10.0])
        lhs = 2.0 * np.asarray(q(rs)) * np.exp(n * u.eval(rs, 0))
        rhs = pm.eval(rs, 0)
        rel = float(np.max(np.abs(lhs - rhs) / np.abs(rhs)))
        out.append(CheckResult(f"2 Q e^(nu) = (-lap)^m u, n={n}", rel < 1e-8, f"rel={rel:.3e}"))
        alpha = total_alpha(ctx, density(ctx, u), spec)
        out.append(
            CheckResult(f"total mass alpha=0.5, n={n}", abs(alpha - 0.5) < 1e-6, f"alpha={alpha!r}")
        )
    return out


def _suite_jensen(spec: QuadratureSpec) -> list[CheckResult]:
    ctx = make_context(4)
    pf = make_perturbed(catalog_sphere_family(ctx, 0.5), 0.1, 1.0)
    out = []
    worst = math.inf
    for k in (1.0, 4.0):
        for r in (2.0, 10.0, 100.0):
            worst = min(worst, exp_average_ratio(ctx, pf, k, r, spec))
    out.append(
        CheckResult("exp-average ratio >= 1 (Jensen)", worst >= 1.0 - 1e-12, f"min={worst!r}")
    )
    fit = slope_estimate(catalog_sphere_family(ctx, 0.5), np.geomspace(1e2, 1e5, 13))
    out.append(
        CheckResult(
            "slope matches -alpha (alpha=0.5)", abs(fit.slope + 0.5) < 1e-3, f"slope={fit.slope!r}"
        )
    )
    return out


SUITES = {
    "pizzetti": _suite_pizzetti,
    "layercake": _suite_layercake,
    "consistency": _suite_consistency,
    "jensen": _suite_jensen,
}


def run_suite(name: str, spec: QuadratureSpec) -> list[CheckResult]:
    if name == "all":
        results = []
        for suite in SUITES.values():
            results.extend(suite(spec))
        return results
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    return SUITES[name](spec)
