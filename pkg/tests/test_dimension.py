import math

import pytest

from qcurv.dimension import make_context
from qcurv.errors import DimensionError


def test_dimension_four_constants():
    ctx = make_context(4)
    assert ctx.m == 2
    assert ctx.c_n == pytest.approx(4 * math.pi**2, rel=1e-15)
    assert ctx.omega_n_minus_1 == pytest.approx(2 * math.pi**2, rel=1e-15)
    assert ctx.omega_n == pytest.approx(8 * math.pi**2 / 3, rel=1e-15)
    assert ctx.q_sphere == 3.0
    assert ctx.pizzetti == (1.0, pytest.approx(1.0 / 12.0, abs=0))
    assert ctx.d_chain == (-2.0,)


def test_dimension_six_constants():
    ctx = make_context(6)
    assert ctx.m == 3
    assert ctx.c_n == pytest.approx(32 * math.pi**3, rel=1e-15)
    assert ctx.omega_n_minus_1 == pytest.approx(math.pi**3, rel=1e-15)
    assert ctx.omega_n == pytest.approx(16 * math.pi**3 / 15, rel=1e-15)
    assert ctx.q_sphere == 60.0
    assert ctx.pizzetti == (1.0, 1.0 / 16.0, 1.0 / 640.0)
    assert ctx.d_chain == (-4.0, -16.0)


@pytest.mark.parametrize("n", [4, 6, 8, 10, 12])
def test_cn_equals_half_omega_q(n):
    ctx = make_context(n)
    assert abs(ctx.c_n - 0.5 * ctx.omega_n * ctx.q_sphere) <= 1e-12 * ctx.c_n


@pytest.mark.parametrize("n", [4, 6, 8])
def test_first_ball_mean_coefficient(n):
    # the exact ball mean of |x|^2 is n R^2 / (n+2) and Lap|x|^2 = 2n, so
    # the first expansion coefficient must be 1 / (2 (n+2))
    ctx = make_context(n)
    assert ctx.pizzetti[1] == pytest.approx(1.0 / (2 * (n + 2)), rel=1e-15)


def test_d_chain_recursion():
    ctx = make_context(10)
    d = ctx.d_chain
    assert d[0] == -(10 - 2)
    for k in range(1, len(d)):
        assert d[k] == 2 * k * (10 - 2 * k - 2) * d[k - 1]
    assert ctx.d(1) == d[0]
    with pytest.raises(DimensionError):
        ctx.d(len(d) + 1)


@pytest.mark.parametrize("bad", [5, 3, 2, 0, -4])
def test_rejects_bad_dimensions(bad):
    with pytest.raises(DimensionError):
        make_context(bad)


def test_rejects_non_integer():
    with pytest.raises(DimensionError):
        make_context(4.0)


def test_context_is_frozen(ctx4):
    with pytest.raises(Exception):
        ctx4.n = 6
