"""Backend dispatch for the hot angular-kernel loops.

The environment variable QCURV_BACKEND selects the implementation:

  auto   (default) numba if it imports, numpy otherwise
  numba  require the JIT backend, fail loudly if unavailable
  numpy  force the pure-numpy path

Both backends share one node layout and agree to machine precision;
tests/test_kernels.py compares them directly and benchmarks/bench_kernels.py
times them against each other.
"""

from __future__ import annotations

import os

_requested = os.environ.get("QCURV_BACKEND", "auto").strip().lower()
if _requested not in ("auto", "numba", "numpy"):
    raise ValueError(
        f"QCURV_BACKEND must be one of auto/numba/numpy, got {_requested!r}"
    )

if _requested == "numpy":
    from . import _numpy_impl as _impl

    BACKEND = "numpy"
elif _requested == "numba":
    from . import _numba_impl as _impl

    BACKEND = "numba"
else:
    try:
        from . import _numba_impl as _impl

        BACKEND = "numba"
    except ImportError:
        from . import _numpy_impl as _impl

        BACKEND = "numpy"

log_kernel_mean = _impl.log_kernel_mean
riesz_kernel_mean = _impl.riesz_kernel_mean
ball_log_mass = _impl.ball_log_mass


def backend_name() -> str:
    return BACKEND
