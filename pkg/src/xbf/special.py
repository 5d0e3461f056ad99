"""Modified Bessel functions, Bessel J0, the Gauss hypergeometric function,
and the I*K product kernel.

Real-order Bessel evaluations are delegated to scipy; K of purely imaginary
order is computed from its cosine-cosh integral representation, which is the
only representation used downstream.  The hypergeometric function carries two
deliberately independent evaluation paths (power series and Euler integral)
that are cross-checked in the test suite.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import special as sc

from .errors import ConvergenceWarning, DomainError
from .quadrature import IntegralResult, QuadratureSpec, integrate_adaptive

__all__ = [
    "BesselOrder",
    "bessel_i",
    "bessel_i_scaled",
    "bessel_k",
    "bessel_k_scaled",
    "bessel_k_imag",
    "bessel_j0",
    "gauss_2f1",
    "f_product",
]


@dataclass(frozen=True)
class BesselOrder:
    """A Bessel index, real or purely imaginary (order ``i*order``)."""

    order: float
    is_imaginary: bool = False

    def __post_init__(self) -> None:
        if not math.isfinite(self.order):
            raise DomainError("Bessel order must be finite")


def _as_order(order) -> BesselOrder:
    if isinstance(order, BesselOrder):
        return order
    return BesselOrder(float(order))


def bessel_i(order, x: float) -> float:
    """Modified Bessel function I_order(x) for real order > -1, x >= 0."""
    nu = _as_order(order)
    if nu.is_imaginary:
        raise DomainError("imaginary order is only supported for K (bessel_k_imag)")
    if nu.order <= -1.0:
        raise DomainError(f"bessel_i requires order > -1, got {nu.order}")
    if not (math.isfinite(x) and x >= 0.0):
        raise DomainError(f"bessel_i requires finite x >= 0, got {x}")
    return float(sc.iv(nu.order, x))


def bessel_i_scaled(order, x: float) -> float:
    """exp(-x) * I_order(x); stable for large arguments."""
    nu = _as_order(order)
    if nu.order <= -1.0:
        raise DomainError(f"bessel_i_scaled requires order > -1, got {nu.order}")
    if not (math.isfinite(x) and x >= 0.0):
        raise DomainError(f"bessel_i_scaled requires finite x >= 0, got {x}")
    return float(sc.ive(nu.order, x))


def bessel_k(order: float, x: float) -> float:
    """Macdonald function K_order(x) for x > 0; K_{-v} = K_v."""
    if not x > 0.0:
        raise DomainError(f"bessel_k requires x > 0, got {x}")
    return float(sc.kv(float(order), x))


def bessel_k_scaled(order: float, x: float) -> float:
    """exp(x) * K_order(x); stable for large arguments."""
    if not x > 0.0:
        raise DomainError(f"bessel_k_scaled requires x > 0, got {x}")
    return float(sc.kve(float(order), x))


def bessel_k_imag(eta: float, x: float, spec: QuadratureSpec | None = None) -> float:
    """K of purely imaginary order: K_{i*eta}(x) for x > 0.

    Evaluated as the real integral of exp(-x cosh u) cos(eta u) over u >= 0;
    real-valued and even in eta.  A non-converged quadrature emits a
    ConvergenceWarning rather than raising.
    """
    if not x > 0.0:
        raise DomainError(f"bessel_k_imag requires x > 0, got {x}")
    res = bessel_k_imag_result(eta, x, spec)
    if not res.converged:
        warnings.warn(
            f"K_(i{eta})({x}) quadrature did not converge (err~{res.error_estimate:.2e})",
            ConvergenceWarning,
            stacklevel=2,
        )
    return res.value


def bessel_k_imag_result(eta: float, x: float, spec: QuadratureSpec | None = None) -> IntegralResult:
    """Same as :func:`bessel_k_imag` but returning the full quadrature result."""
    if not x > 0.0:
        raise DomainError(f"bessel_k_imag requires x > 0, got {x}")
    spec = spec or QuadratureSpec(rel_tol=1e-11, abs_tol=1e-13, max_subdivisions=300)
    e = abs(float(eta))

    def f(u: float) -> float:
        return math.exp(-x * math.cosh(u)) * math.cos(e * u)

    return integrate_adaptive(f, (0.0, math.inf), spec)


def bessel_j0(x: float) -> float:
    """Bessel function of the first kind, order zero."""
    return float(sc.j0(x))


# ---------------------------------------------------------------------------
# Gauss hypergeometric 2F1 on (0, 1]

_SERIES_SWITCH = 0.9


def _gauss_2f1_series(a: float, b: float, c: float, z: float, max_terms: int = 20000) -> float:
    total = 1.0
    term = 1.0
    for k in range(max_terms):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
        total += term
        if abs(term) <= 1e-17 * abs(total):
            return total
    warnings.warn("2F1 series did not reach machine accuracy", ConvergenceWarning, stacklevel=2)
    return total


def _gauss_2f1_euler(a: float, b: float, c: float, z: float) -> float:
    # Euler integral representation; requires c > b > 0.
    if not (c > b > 0.0):
        raise DomainError(f"Euler integral needs c > b > 0, got b={b}, c={c}")
    spec = QuadratureSpec(rel_tol=1e-11, abs_tol=1e-13, max_subdivisions=400)

    def f(t: float) -> float:
        return t ** (b - 1.0) * (1.0 - t) ** (c - b - 1.0) * (1.0 - t * z) ** (-a)

    res = integrate_adaptive(f, (0.0, 1.0), spec)
    lg = math.lgamma(c) - math.lgamma(b) - math.lgamma(c - b)
    return math.exp(lg) * res.value


def gauss_2f1(a: float, b: float, c: float, z: float) -> float:
    """2F1(a, b; c; z) for argument z in (0, 1].

    Power series for z <= 0.9, Euler integral above, Gauss summation at z = 1
    (which needs c - a - b > 0; otherwise the value diverges).
    """
    if c <= 0.0 and c == math.floor(c):
        raise DomainError(f"2F1 undefined at non-positive integer c = {c}")
    if not 0.0 < z <= 1.0:
        raise DomainError(f"gauss_2f1 is restricted to z in (0, 1], got {z}")
    if z == 1.0:
        if c - a - b <= 0.0:
            raise DomainError(f"2F1 diverges at z=1 when c-a-b <= 0 (got {c - a - b})")
        lg = math.lgamma(c) + math.lgamma(c - a - b) - math.lgamma(c - a) - math.lgamma(c - b)
        return math.exp(lg)
    if z <= _SERIES_SWITCH:
        return _gauss_2f1_series(a, b, c, z)
    return _gauss_2f1_euler(a, b, c, z)


def f_product(mu: float, x: float, y: float) -> float:
    """Symmetric Bessel product kernel I_mu(min(x,y)) * K_mu(max(x,y))."""
    if mu <= -1.0:
        raise DomainError(f"f_product requires mu > -1, got {mu}")
    if not (x > 0.0 and y > 0.0):
        raise DomainError("f_product requires x, y > 0")
    lo, hi = (x, y) if x <= y else (y, x)
    # scaled recombination: I_mu(lo) K_mu(hi) = ive(lo) kve(hi) exp(lo - hi)
    return float(sc.ive(mu, lo) * sc.kve(mu, hi) * math.exp(lo - hi))
