import math

import numpy as np
import pytest

from qcurv.curvature import density, radial_laplacian
from qcurv.errors import DimensionError
from qcurv.potential import (
    bad_term_b,
    bound_margins,
    iterated_laplacian_v,
    normality_residual,
    potential_v,
)
from qcurv.profiles import RadialProfile, catalog_counterexample, catalog_sphere_family
from qcurv.quadrature import DecayModel
from qcurv.curvature import CurvatureDensity


def _zero_density(n):
    return CurvatureDensity(
        f=lambda r: np.zeros_like(np.asarray(r, dtype=float)),
        decay=DecayModel("power", 2.0 * n),
        label="zero",
    )


def test_v_vanishes_at_origin(ctx4, spec):
    d = density(ctx4, catalog_sphere_family(ctx4, 0.5))
    assert potential_v(ctx4, d, 0.0, spec) == 0.0
    dce = density(ctx4, catalog_counterexample(ctx4))
    assert potential_v(ctx4, dce, 0.0, spec) == 0.0


def test_v_closed_form_alpha_half(ctx4, spec):
    # normality of the sphere family forces v(r) = (alpha/2) log(1 + r^2)
    d = density(ctx4, catalog_sphere_family(ctx4, 0.5))
    assert potential_v(ctx4, d, 1.0, spec) == pytest.approx(0.25 * math.log(2.0), abs=1e-9)


def test_v_closed_form_alpha_one_far(ctx4, spec):
    d = density(ctx4, catalog_sphere_family(ctx4, 1.0))
    want = 0.5 * math.log(1.0 + 1e4)
    assert potential_v(ctx4, d, 100.0, spec) == pytest.approx(want, abs=1e-8)


def test_v_closed_form_dimension_six(ctx6, spec):
    d = density(ctx6, catalog_sphere_family(ctx6, 0.25))
    want = 0.125 * math.log(1.0 + 100.0)
    assert potential_v(ctx6, d, 10.0, spec) == pytest.approx(want, abs=1e-9)


def test_v_against_two_dimensional_brute_force(ctx4, spec):
    # dense (s, phi) tensor quadrature of the raw kernel, no angular-mean
    # shortcut; checks the whole radial-reduction pipeline at three radii
    alpha = 0.5
    d = density(ctx4, catalog_sphere_family(ctx4, alpha))
    phi = np.linspace(0.0, math.pi, 3001)[1:-1]
    wphi = np.sin(phi) ** 2
    s = np.linspace(1e-4, 250.0, 12000)
    f = 24.0 * alpha / (1.0 + s * s) ** 4
    for r in (0.5, 2.0, 8.0):
        d2 = r * r + s[:, None] ** 2 - 2.0 * r * s[:, None] * np.cos(phi)[None, :]
        kern = 0.5 * np.log(d2) - np.log(s)[:, None]
        angular = np.trapezoid(kern * wphi[None, :], phi, axis=1) / np.trapezoid(wphi, phi)
        brute = np.trapezoid(s**3 * f * angular, s) * ctx4.omega_n_minus_1 / ctx4.c_n
        got = potential_v(ctx4, d, r, spec)
        assert got == pytest.approx(brute, abs=5e-4)


def test_bad_term_zero_density(ctx4, spec):
    assert bad_term_b(ctx4, _zero_density(4), 3.0, spec) == 0.0


def test_bad_term_bounded_by_kernel_mass(ctx4, spec):
    # int_{B_1 in R^4} log(1/|z|) dz = pi^2 / 8
    d = density(ctx4, catalog_sphere_family(ctx4, 1.0))
    b = bad_term_b(ctx4, d, 10.0, spec)
    sup_f = 24.0 / (1.0 + 81.0) ** 4
    bound = sup_f * (math.pi**2 / 8.0) / ctx4.c_n
    assert 0.0 < b <= bound
    assert b < 2e-8


def test_bad_term_monotone_decay(ctx4, spec):
    d = density(ctx4, catalog_sphere_family(ctx4, 1.0))
    vals = [bad_term_b(ctx4, d, r, spec) for r in (10.0, 30.0, 100.0, 300.0)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    ratios = [v / math.log(r) for v, r in zip(vals, (10.0, 30.0, 100.0, 300.0))]
    assert all(a > b for a, b in zip(ratios, ratios[1:]))
    assert ratios[-1] < 1e-8


def test_normality_sphere_family(ctx4, spec):
    u = catalog_sphere_family(ctx4, 0.5)
    rep = normality_residual(ctx4, u, spec, [0.5, 1.0, 2.0, 5.0, 10.0, 50.0])
    assert rep.constant_estimate == pytest.approx(0.25 * math.log(2.0), rel=1e-12)
    assert rep.residual_sup < 1e-4


def test_normality_numeric_profile(ctx4, spec):
    # spline-differentiated input: tolerances track the data's noise floor
    from qcurv.profiles import numeric_profile

    rs = np.linspace(0.0, 60.0, 4000)
    u = 0.25 * (math.log(2.0) - np.log1p(rs * rs))
    num = numeric_profile(np.column_stack([rs, u]), max_order=4)
    assert density(ctx4, num).noise_floor > 0.0
    rep = normality_residual(ctx4, num, spec, [1.0, 5.0, 20.0])
    assert rep.residual_sup < 1e-3


def test_normality_dimension_six(ctx6, spec):
    u = catalog_sphere_family(ctx6, 0.5)
    rep = normality_residual(ctx6, u, spec, [0.5, 2.0, 10.0, 50.0])
    assert rep.constant_estimate == pytest.approx(0.25 * math.log(2.0), rel=1e-12)
    assert rep.residual_sup < 1e-4


def test_normality_zero_profile(ctx4, spec):
    zero = RadialProfile(lambda r, o: np.zeros_like(r), 4, "closed_form", None, "0")
    rep = normality_residual(ctx4, zero, spec, [1.0, 5.0])
    assert rep.residual_sup == pytest.approx(0.0, abs=1e-12)
    assert rep.constant_estimate == 0.0


def test_normality_counterexample_grows_quadratically(ctx4, spec):
    u = catalog_counterexample(ctx4)
    rep = normality_residual(ctx4, u, spec, [0.5, 1.0, 2.0, 5.0, 10.0])
    assert rep.residual_sup > 90.0
    r10 = abs(u.eval(10.0, 0) + rep.v_values[-1][1] - rep.constant_estimate)
    assert r10 == pytest.approx(100.0, abs=0.1)


def test_bound_margins_alpha_one(ctx4, spec):
    rep = bound_margins(ctx4, catalog_sphere_family(ctx4, 1.0), 0.1, spec, [10.0, 30.0, 100.0])
    # v - log r = (1/2) log(1 + r^-2), positive and tiny on the tail
    assert 0.0 <= rep.upper_margin <= 0.01
    assert rep.alpha == pytest.approx(1.0, abs=1e-8)


def test_bound_margins_lower_side(ctx4, spec):
    rep = bound_margins(ctx4, catalog_sphere_family(ctx4, 0.5), 0.1, spec, [10.0, 100.0, 1000.0])
    assert all(v > -1.0 for _, v in rep.lower_check)
    assert rep.eps == 0.1


def test_bound_margins_requires_positive_eps(ctx4, spec):
    with pytest.raises(ValueError):
        bound_margins(ctx4, catalog_sphere_family(ctx4, 0.5), 0.0, spec, [10.0])


def test_bound_margins_zero_profile(ctx4, spec):
    # v == 0 and alpha == 0: upper margin is 0, lower rows are eps log r
    zero = RadialProfile(lambda r, o: np.zeros_like(r), 4, "closed_form", None, "0")
    rep = bound_margins(ctx4, zero, 0.1, spec, [10.0, 100.0])
    assert rep.alpha == pytest.approx(0.0, abs=1e-12)
    assert rep.upper_margin == pytest.approx(0.0, abs=1e-10)
    for r, v in rep.lower_check:
        assert v == pytest.approx(0.1 * math.log(r), abs=1e-10)


def test_iterated_laplacian_value_at_origin(ctx4, spec):
    d = density(ctx4, catalog_sphere_family(ctx4, 1.0))
    assert iterated_laplacian_v(ctx4, d, 1, 0.0, spec) == pytest.approx(-4.0, abs=1e-4)


def test_iterated_laplacian_matches_laplacian_of_u(ctx4, spec):
    # u = C - v, so (-Lap) v = Lap u pointwise
    u = catalog_sphere_family(ctx4, 0.5)
    d = density(ctx4, u)
    lap = radial_laplacian(ctx4, u)
    for r in (0.5, 1.0, 2.0):
        got = iterated_laplacian_v(ctx4, d, 1, r, spec)
        assert got == pytest.approx(lap.eval(r, 0), abs=1e-4)


def test_iterated_laplacian_second_order_n6(ctx6, spec):
    # (-Lap)^2 v = -(-Lap)^2 u; at the origin (-Lap)^2 u_alpha = 96 alpha
    alpha = 0.5
    u = catalog_sphere_family(ctx6, alpha)
    d = density(ctx6, u)
    got = iterated_laplacian_v(ctx6, d, 2, 0.0, spec)
    assert got == pytest.approx(-96.0 * alpha, rel=1e-8)


def test_iterated_laplacian_zero_density(ctx4, spec):
    assert iterated_laplacian_v(ctx4, _zero_density(4), 1, 2.0, spec) == pytest.approx(0.0, abs=1e-12)


def test_iterated_laplacian_k_out_of_range(ctx4, spec):
    d = _zero_density(4)
    with pytest.raises(DimensionError):
        iterated_laplacian_v(ctx4, d, 2, 1.0, spec)  # m - 1 = 1 in dimension 4


def test_kernel_vs_finite_difference_laplacian_of_v(ctx4, spec):
    # Lap v at r from 4th-order central differences of potential_v
    u = catalog_sphere_family(ctx4, 0.5)
    d = density(ctx4, u)
    for r in (0.5, 2.0, 10.0):
        h = 0.05 * max(1.0, r / 5.0)
        vm2, vm1, v0, vp1, vp2 = (
            potential_v(ctx4, d, r + k * h, spec) for k in (-2, -1, 0, 1, 2)
        )
        d2 = (-vp2 + 16 * vp1 - 30 * v0 + 16 * vm1 - vm2) / (12 * h * h)
        d1 = (vm2 - 8 * vm1 + 8 * vp1 - vp2) / (12 * h)
        lap_v = d2 + 3.0 * d1 / r
        want = -iterated_laplacian_v(ctx4, d, 1, r, spec)
        assert lap_v == pytest.approx(want, rel=1e-3)


def test_monotone_bad_term_vs_log(ctx4, spec):
    d = density(ctx4, catalog_sphere_family(ctx4, 0.5))
    seq = [bad_term_b(ctx4, d, r, spec) / math.log(r) for r in (10.0, 100.0, 1000.0)]
    assert seq[0] > seq[1] > seq[2]
