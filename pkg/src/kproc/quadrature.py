"""Quadrature helpers shared by the closed-form limit laws.

Improper or endpoint-singular integrals are reduced to smooth integrands on
finite intervals before being handed to the adaptive integrator:

- (0, inf) is mapped onto (0, 1) by w = u/(1-u);
- an integrable endpoint factor s^(p-1) at s = 0 is absorbed by s = u^(1/p),
  under which s^(p-1) ds = (1/p) du.

The two normalizers that several limit formulas share - the factorial-type
integral G(a) = int_0^inf t^a e^(-t) dt and the weight-measure normalizer
int_0^inf w^(-alpha)/(1+w) dw - are evaluated here with the same machinery,
so the package needs no special-function library.
"""

from __future__ import annotations

import math
from functools import lru_cache

from scipy.integrate import quad

from .env import check_alpha

__all__ = [
    "integral_01",
    "integral_0_inf",
    "integral_power_left",
    "g_norm",
    "weight_norm",
]

_QUAD_LIMIT = 200


def integral_01(f, rel_tol: float = 1e-10) -> float:
    """Adaptive integral of f over (0, 1)."""
    value, _ = quad(f, 0.0, 1.0, epsabs=1e-14, epsrel=rel_tol, limit=_QUAD_LIMIT)
    return value


def integral_0_inf(f, rel_tol: float = 1e-10) -> float:
    """Adaptive integral of f over (0, inf) via w = u/(1-u)."""

    def mapped(u: float) -> float:
        one_minus = 1.0 - u
        return f(u / one_minus) / (one_minus * one_minus)

    return integral_01(mapped, rel_tol)


def integral_power_left(f, p: float, upper: float = 1.0, rel_tol: float = 1e-10) -> float:
    """Adaptive integral of s^(p-1) * f(s) over (0, upper), p > 0.

    The substitution s = u^(1/p) removes the endpoint factor exactly:
    the result is (1/p) * int_0^(upper^p) f(u^(1/p)) du.
    """
    if p <= 0.0:
        raise ValueError(f"p must be positive, got {p}")
    inv_p = 1.0 / p
    value, _ = quad(lambda u: f(u**inv_p), 0.0, upper**p,
                    epsabs=1e-14, epsrel=rel_tol, limit=_QUAD_LIMIT)
    return value / p


@lru_cache(maxsize=None)
def g_norm(a: float, rel_tol: float = 1e-11) -> float:
    """G(a) = int_0^inf t^a e^(-t) dt for a > 0, by quadrature."""
    if not a > 0.0:
        raise ValueError(f"a must be positive, got {a}")
    return integral_0_inf(lambda t: t**a * math.exp(-t), rel_tol)


@lru_cache(maxsize=None)
def weight_norm(alpha: float, rel_tol: float = 1e-11) -> float:
    """int_0^inf w^(-alpha)/(1+w) dw, split at w=1 into two smooth pieces.

    On (0,1) the factor w^(-alpha) is absorbed by a power substitution; on
    (1,inf) the inversion w -> 1/s gives int_0^1 s^(alpha-1)/(1+s) ds, whose
    endpoint factor is absorbed the same way. Equals pi/sin(pi*alpha), which
    the tests check independently.
    """
    alpha = check_alpha(alpha)
    head = integral_power_left(lambda w: 1.0 / (1.0 + w), 1.0 - alpha)
    tail = integral_power_left(lambda s: 1.0 / (1.0 + s), alpha)
    return head + tail
