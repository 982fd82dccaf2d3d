import pytest

from qcurv.dimension import make_context
from qcurv.quadrature import QuadratureSpec


@pytest.fixture(scope="session")
def ctx4():
    return make_context(4)


@pytest.fixture(scope="session")
def ctx6():
    return make_context(6)


@pytest.fixture(scope="session")
def spec():
    return QuadratureSpec()


@pytest.fixture(scope="session")
def fast_spec():
    # smaller sphere budget for tests dominated by direction counts
    return QuadratureSpec(sphere_nodes=16)
