"""Dimension-dependent constants for even dimension n = 2m.

Everything downstream (total-mass normalisation, sphere measures, ball-mean
coefficients, kernel recursion factors) is derived from the handful of
constants below.  Factorials and double factorials are evaluated in exact
integer/rational arithmetic and converted to float once, so the constants
carry no accumulated rounding.

Conventions:
  c_n       = 2^(n-2) * ((n-2)/2)! * pi^(n/2)
  q_sphere  = 2 * c_n / omega_n   (the round-sphere curvature constant in the
              normalisation where the conformal factor solves
              (-Lap)^m u = 2 Q e^(n u); equals (n-1)!/2)
  pizzetti  = ball-mean coefficients c_0..c_{m-1} of the polyharmonic
              mean-value expansion
  d_chain   = d_1..d_{m-1} with d_1 = -(n-2), d_{k+1} = 2k(n-2k-2) d_k,
              relating iterated Laplacians of the log-kernel potential to
              inverse-power kernels
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionError

__all__ = ["DimensionContext", "make_context"]


def _double_factorial(k: int) -> int:
    if k <= 0:
        return 1
    out = 1
    while k > 0:
        out *= k
        k -= 2
    return out


@dataclass(frozen=True)
class DimensionContext:
    """Immutable bag of constants for one even dimension.

    Safe to share freely across concurrent evaluations.
    """

    n: int
    m: int
    c_n: float
    omega_n_minus_1: float
    omega_n: float
    q_sphere: float
    pizzetti: tuple[float, ...]
    d_chain: tuple[float, ...]

    def d(self, k: int) -> float:
        """Recursion factor d_k for k = 1..m-1 (d_chain is stored 0-based)."""
        if not 1 <= k <= self.m - 1:
            raise DimensionError(f"d_k defined for 1 <= k <= m-1 = {self.m - 1}, got {k}")
        return self.d_chain[k - 1]


def make_context(n: int) -> DimensionContext:
    """Build the constant table for even dimension n >= 4.

    Raises DimensionError for odd n or n < 4.
    """
    if not isinstance(n, int) or isinstance(n, bool):
        raise DimensionError(f"dimension must be an integer, got {n!r}")
    if n < 4 or n % 2 != 0:
        raise DimensionError(f"dimension must be even and >= 4, got {n}")
    m = n // 2

    pi_m = math.pi**m

    # c_n = 2^(n-2) (m-1)! pi^m, exact integer prefactor
    c_n = float(2 ** (n - 2) * math.factorial(m - 1)) * pi_m

    # |S^(n-1)| = 2 pi^(n/2) / Gamma(n/2); Gamma(m) = (m-1)!
    omega_n_minus_1 = 2.0 * pi_m / math.factorial(m - 1)

    # |S^n| = 2 pi^((n+1)/2) / Gamma((n+1)/2) = 2 pi^m 4^m m! / (2m)!
    omega_n = float(Fraction(2 * 4**m * math.factorial(m), math.factorial(2 * m))) * pi_m

    # q_sphere = 2 c_n / omega_n reduces to the exact integer (n-1)!/2
    q_sphere_frac = Fraction(math.factorial(n - 1), 2)
    q_sphere = float(q_sphere_frac)

    piz = [Fraction(1)]
    for i in range(1, m):
        piz.append(
            Fraction(n, n + 2 * i)
            * Fraction(
                _double_factorial(n - 2),
                _double_factorial(2 * i) * _double_factorial(2 * i + n - 2),
            )
        )
    pizzetti = tuple(float(c) for c in piz)

    d_chain_list: list[float] = []
    if m >= 2:
        d = -(n - 2)
        d_chain_list.append(float(d))
        for k in range(1, m - 1):
            d = 2 * k * (n - 2 * k - 2) * d
            d_chain_list.append(float(d))

    return DimensionContext(
        n=n,
        m=m,
        c_n=c_n,
        omega_n_minus_1=omega_n_minus_1,
        omega_n=omega_n,
        q_sphere=q_sphere,
        pizzetti=pizzetti,
        d_chain=tuple(d_chain_list),
    )
