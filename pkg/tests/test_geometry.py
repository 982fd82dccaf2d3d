import math

import numpy as np
import pytest

from qcurv.geometry import (
    completeness_classify,
    defect_extrapolate,
    isoperimetric_ratio,
    metric_ball_volume,
    metric_sphere_area,
)
from qcurv.curvature import decay_margin
from qcurv.profiles import RadialProfile, catalog_counterexample, catalog_sphere_family

GRID = [10.0 * 2**k for k in range(8)]


def _flat(n):
    return RadialProfile(
        lambda r, o: np.zeros_like(r), max_order=2 * (n // 2), provenance="closed_form", label="0"
    )


def test_flat_area(ctx4):
    assert metric_sphere_area(ctx4, _flat(4), 1.0) == pytest.approx(2 * math.pi**2, rel=1e-14)


def test_area_scaling(ctx4):
    a1 = metric_sphere_area(ctx4, _flat(4), 1.7)
    a2 = metric_sphere_area(ctx4, _flat(4), 3.4)
    assert a2 / a1 == pytest.approx(2.0**3, rel=1e-12)


def test_sphere_family_area_at_unit_radius(ctx4):
    # u_1(1) = 0, so the metric sphere has the flat area
    u = catalog_sphere_family(ctx4, 1.0)
    assert metric_sphere_area(ctx4, u, 1.0) == pytest.approx(2 * math.pi**2, rel=1e-12)


def test_flat_volume(ctx4, spec):
    for r in (1.0, 2.0):
        want = math.pi**2 * r**4 / 2.0
        assert metric_ball_volume(ctx4, _flat(4), r, spec) == pytest.approx(want, rel=1e-10)


def test_volume_monotone(ctx4, spec):
    u = catalog_sphere_family(ctx4, 1.0)
    vols = [metric_ball_volume(ctx4, u, r, spec) for r in (1.0, 3.0, 10.0)]
    assert vols[0] < vols[1] < vols[2]


def test_volume_derivative_is_weighted_area(ctx4, spec):
    # d/dr |B_r| = omega_{n-1} r^(n-1) e^(n u(r))
    u = catalog_sphere_family(ctx4, 0.5)
    r, h = 2.0, 1e-4
    fd = (
        metric_ball_volume(ctx4, u, r + h, spec) - metric_ball_volume(ctx4, u, r - h, spec)
    ) / (2 * h)
    want = ctx4.omega_n_minus_1 * r**3 * math.exp(4.0 * u.eval(r, 0))
    assert fd == pytest.approx(want, rel=1e-6)


def test_flat_isoperimetric_identity(ctx4, spec):
    for r in (0.5, 1.0, 7.0, 300.0):
        assert isoperimetric_ratio(ctx4, _flat(4), r, spec) == pytest.approx(1.0, abs=1e-8)


def test_isoperimetric_approaches_defect(ctx4, spec):
    got = isoperimetric_ratio(ctx4, catalog_sphere_family(ctx4, 0.5), 1000.0, spec)
    assert abs(got - 0.5) < 0.01


def test_defect_flat(ctx4, spec):
    rep = defect_extrapolate(ctx4, _flat(4), spec, GRID)
    assert rep.defect_extrapolated == pytest.approx(1.0, abs=1e-8)
    assert rep.consistency_gap < 1e-8


@pytest.mark.parametrize("n", [4, 6])
@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75, 1.0])
def test_defect_matrix(n, alpha, spec):
    from qcurv.dimension import make_context

    ctx = make_context(n)
    rep = defect_extrapolate(ctx, catalog_sphere_family(ctx, alpha), spec, GRID)
    assert rep.defect_extrapolated == pytest.approx(1.0 - alpha, abs=2e-3)
    assert rep.consistency_gap < 2e-3
    assert not rep.low_confidence


def test_defect_alpha_one_tight(ctx4, spec):
    rep = defect_extrapolate(ctx4, catalog_sphere_family(ctx4, 1.0), spec, GRID)
    assert abs(rep.defect_extrapolated) < 1e-3
    assert "log" in rep.fit_model


def test_defect_needs_six_radii(ctx4, spec):
    with pytest.raises(ValueError):
        defect_extrapolate(ctx4, _flat(4), spec, [1.0, 2.0, 4.0])


def test_defect_counterexample_diverges(ctx4, spec):
    rep = defect_extrapolate(ctx4, catalog_counterexample(ctx4), spec, GRID)
    assert rep.low_confidence
    assert math.isnan(rep.defect_extrapolated)
    assert rep.alpha == pytest.approx(2.0, abs=1e-6)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 1.0])
def test_sphere_family_complete(ctx4, spec, alpha):
    rep = completeness_classify(ctx4, catalog_sphere_family(ctx4, alpha), spec)
    assert rep.verdict == "complete"


def test_flat_complete(ctx4, spec):
    assert completeness_classify(ctx4, _flat(4), spec).verdict == "complete"


def test_incomplete_profile(ctx4, spec):
    def deriv(r, order):
        if order == 0:
            return -2.0 * np.log1p(r)
        return -2.0 * (-1.0) ** (order - 1) * math.factorial(order - 1) / (1.0 + r) ** order

    u = RadialProfile(deriv, max_order=4, provenance="closed_form", label="-2log(1+r)")
    rep = completeness_classify(ctx4, u, spec)
    assert rep.verdict == "incomplete"


def test_counterexample_joint_story(ctx4, spec):
    # complete, total mass 2 > 1, and quadratic curvature decay: all three
    # facts together show why the sharp theorem excludes it
    u = catalog_counterexample(ctx4)
    comp = completeness_classify(ctx4, u, spec)
    assert comp.verdict == "complete"
    assert math.isinf(comp.partial_lengths[-1][1])
    rep = defect_extrapolate(ctx4, u, spec, GRID)
    assert rep.alpha == pytest.approx(2.0, abs=1e-6)
    decay = decay_margin(ctx4, u, np.geomspace(3.0, 12.0, 8))
    assert decay.verdict == "violates"
