import math

import numpy as np
import pytest

from qcurv.errors import DerivativeOrderError, ProfileError
from qcurv.profiles import (
    catalog_counterexample,
    catalog_sphere_family,
    make_perturbed,
    numeric_profile,
)


def test_sphere_family_values(ctx4):
    u = catalog_sphere_family(ctx4, 0.5)
    assert u.eval(0.0, 0) == pytest.approx(0.25 * math.log(2.0), rel=1e-15)
    u1 = catalog_sphere_family(ctx4, 1.0)
    assert u1.eval(0.0, 1) == 0.0
    # u'(r) = -alpha r / (1 + r^2)
    assert u1.eval(10.0, 1) == pytest.approx(-10.0 / 101.0, rel=1e-14)
    assert u.eval(3.0, 1) == pytest.approx(-0.5 * 3.0 / 10.0, rel=1e-14)


def test_sphere_family_rejects_bad_alpha(ctx4):
    for alpha in (0.0, -0.5, 1.2):
        with pytest.raises(ProfileError):
            catalog_sphere_family(ctx4, alpha)


@pytest.mark.parametrize("alpha", [0.25, 1.0])
def test_odd_orders_vanish_at_origin(ctx4, alpha):
    u = catalog_sphere_family(ctx4, alpha)
    for order in (1, 3):
        assert u.eval(0.0, order) == 0.0


@pytest.mark.parametrize("r", [0.1, 1.0, 10.0])
def test_derivatives_match_finite_differences(ctx6, r):
    # successive orders must be consistent under central differencing:
    # low orders to 1e-6 relative, all exposed orders to 1e-3
    u = catalog_sphere_family(ctx6, 0.75)
    h = 1e-4 * max(1.0, r)
    for order in range(1, 2 * ctx6.m + 1):
        fd = (u.eval(r + h, order - 1) - u.eval(r - h, order - 1)) / (2 * h)
        exact = u.eval(r, order)
        scale = max(abs(exact), 1.0)  # unit floor: some orders vanish at r = 1
        tol = 1e-6 if order <= 2 else 1e-3
        assert abs(fd - exact) / scale < tol


def test_slope_hint_and_tail_boundedness(ctx4):
    alpha = 0.5
    u = catalog_sphere_family(ctx4, alpha)
    assert u.asymptotic_slope_hint == -alpha
    rs = np.geomspace(10.0, 1e4, 13)
    dev = np.abs(u.eval(rs, 0) + alpha * np.log(rs) - 0.5 * alpha * math.log(2.0))
    assert float(np.max(dev)) < 1.0
    assert dev[-1] < dev[0]  # converging toward the constant


def test_counterexample_values(ctx4):
    u = catalog_counterexample(ctx4)
    assert u.eval(0.0, 0) == pytest.approx(math.log(2.0), rel=1e-15)
    assert u.eval(1.0, 0) == pytest.approx(1.0, abs=1e-15)  # log(1) + 1
    assert u.asymptotic_slope_hint is None


def test_order_limit_enforced(ctx4):
    u = catalog_sphere_family(ctx4, 0.5)
    with pytest.raises(DerivativeOrderError):
        u.eval(1.0, 2 * ctx4.m + 1)
    with pytest.raises(ProfileError):
        u.eval(-1.0, 0)


# --- numeric profiles --------------------------------------------------------


def test_numeric_profile_matches_catalog(ctx4):
    u = catalog_sphere_family(ctx4, 0.5)
    rs = np.linspace(0.0, 30.0, 3000)
    num = numeric_profile(np.column_stack([rs, u.eval(rs, 0)]), max_order=2 * ctx4.m)
    assert num.provenance == "numeric_differentiated"
    for r in (0.5, 2.0, 10.0):
        assert num.eval(r, 0) == pytest.approx(u.eval(r, 0), abs=1e-6)
        top = 2 * ctx4.m
        scale = max(abs(u.eval(r, top)), 1e-4)
        assert abs(num.eval(r, top) - u.eval(r, top)) / scale < 1e-3


def test_numeric_profile_constant_samples():
    rs = np.linspace(0.0, 5.0, 40)
    num = numeric_profile(np.column_stack([rs, np.zeros_like(rs)]), max_order=4)
    for order in range(5):
        assert abs(num.eval(2.0, order)) < 1e-12


def test_numeric_profile_rejects_bad_grids():
    with pytest.raises(ProfileError):
        numeric_profile(np.array([[0.0, 1.0], [1.0, 2.0]]), max_order=4)
    rs = np.linspace(0.0, 5.0, 40)
    rs2 = rs.copy()
    rs2[10] = rs2[9]  # not strictly increasing
    with pytest.raises(ProfileError):
        numeric_profile(np.column_stack([rs2, np.zeros_like(rs2)]), max_order=4)
    with pytest.raises(ProfileError):
        numeric_profile(np.zeros((40, 3)), max_order=4)


def test_numeric_profile_slope_hint(ctx4):
    u = catalog_sphere_family(ctx4, 0.5)
    rs = np.geomspace(0.1, 1e3, 400)
    num = numeric_profile(np.column_stack([rs, u.eval(rs, 0)]), max_order=4)
    assert num.asymptotic_slope_hint == pytest.approx(-0.5, abs=0.02)


# --- perturbed fields --------------------------------------------------------


def test_perturbed_zero_amplitude(ctx4):
    base = catalog_sphere_family(ctx4, 0.5)
    pf = make_perturbed(base, 0.0, 1.0)
    pts = np.array([[1.0, 0.0, 0.0, 0.0], [0.3, -0.4, 0.0, 0.5]])
    r = np.linalg.norm(pts, axis=1)
    assert np.allclose(pf.value_at(pts), base.eval(r, 0))


def test_perturbed_envelope_decays(ctx4):
    pf = make_perturbed(catalog_sphere_family(ctx4, 0.5), 0.1, 1.0)
    rs = np.array([1.0, 10.0, 100.0, 1e4])
    env = pf.envelope(rs)
    assert np.all(np.diff(env) < 0)
    assert env[-1] < 1e-4


def test_perturbed_rejects_bad_decay(ctx4):
    with pytest.raises(ProfileError):
        make_perturbed(catalog_sphere_family(ctx4, 0.5), 0.1, 0.0)


def test_perturbed_value_at_origin(ctx4):
    pf = make_perturbed(catalog_sphere_family(ctx4, 0.5), 0.1, 1.0)
    val = pf.value_at(np.zeros((1, 4)))
    assert val[0] == pytest.approx(0.25 * math.log(2.0), rel=1e-12)
