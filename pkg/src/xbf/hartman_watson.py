"""The Hartman-Watson density kernel theta(r, t) and its transform identities.

theta is defined through an oscillatory integral:

    theta(r, t) = r / sqrt(2 pi^3 t) * exp(pi^2 / 2t)
                  * int_0^inf exp(-xi^2/2t - r cosh xi) sinh(xi) sin(pi xi / t) dxi

The sine factor changes sign at xi = k*t, so the evaluation splits exactly
there and sums half-period contributions.  For small t the exp(pi^2/2t)
prefactor forces catastrophic cancellation inside the integral; evaluations below
``ThetaEngine.t_min`` carry a degraded-accuracy flag, and the oscillatory
engine transparently escalates to extended precision when float64 cannot
reach the requested tolerance.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import mpmath
import numpy as np
from scipy import special as sc

from .errors import ConvergenceWarning, DegradedAccuracyWarning, DomainError, NumericalError
from .quadrature import IntegralResult, QuadratureSpec, integrate_adaptive, integrate_oscillatory

__all__ = [
    "ThetaEngine",
    "HwQuery",
    "ThetaResult",
    "theta",
    "theta_detail",
    "hw_density",
    "theta_laplace_in_r",
    "theta_laplace_in_r_quadrature",
    "theta_time_laplace",
    "stieltjes_integral",
    "lognormal_moment",
]

_LOG_2PI3 = math.log(2.0 * math.pi**3)


@dataclass(frozen=True)
class ThetaEngine:
    """Evaluation policy for the oscillatory theta integrand.

    ``spec.abs_tol`` is interpreted in units of theta itself.  Below ``t_min``
    results still evaluate (in extended precision where necessary) but carry
    a degraded-accuracy flag: the oscillation density there is beyond what we
    are willing to certify.
    """

    spec: QuadratureSpec = QuadratureSpec(rel_tol=1e-10, abs_tol=1e-9, max_subdivisions=300)
    t_min: float = 0.2
    acceleration_enabled: bool = True

    def __post_init__(self) -> None:
        if not self.t_min > 0.0:
            raise DomainError("t_min must be positive")


@dataclass(frozen=True)
class HwQuery:
    """Arguments (r, t) of the kernel: r is the Bessel-ratio argument x*y/t."""

    r: float
    t: float

    def __post_init__(self) -> None:
        if not (self.r > 0.0 and math.isfinite(self.r)):
            raise DomainError(f"HwQuery.r must be positive and finite, got {self.r}")
        if not (self.t > 0.0 and math.isfinite(self.t)):
            raise DomainError(f"HwQuery.t must be positive and finite, got {self.t}")


class ThetaResult(NamedTuple):
    value: float
    error_estimate: float
    degraded: bool
    converged: bool


def _support_cut(r: float, t: float) -> float:
    """xi beyond which the integrand is negligible at any precision we use."""
    budget = 115.0
    b_cosh = math.acosh(1.0 + budget / r) if r > budget / 1e305 else 710.0
    b_gauss = math.sqrt(2.0 * budget * t)
    return min(b_cosh, b_gauss) * 1.05 + 1e-3


def _theta_integrands(r: float, t: float):
    inv2t = 1.0 / (2.0 * t)
    w = math.pi / t

    def f(xi: np.ndarray) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        return np.exp(-xi * xi * inv2t - r * np.cosh(xi)) * np.sinh(xi) * np.sin(w * xi)

    r_mp = mpmath.mpf(r)
    t_mp = mpmath.mpf(t)

    def f_mp(xi):
        return (
            mpmath.exp(-xi * xi / (2 * t_mp) - r_mp * mpmath.cosh(xi))
            * mpmath.sinh(xi)
            * mpmath.sin(mpmath.pi * xi / t_mp)
        )

    return f, f_mp


def theta_detail(q: HwQuery, engine: ThetaEngine = ThetaEngine()) -> ThetaResult:
    """Full evaluation record for theta(r, t)."""
    r, t = q.r, q.t
    spec0 = engine.spec
    logpref = math.log(r) - 0.5 * (math.log(t) + _LOG_2PI3) + math.pi**2 / (2.0 * t)

    abs_tol_int = max(1e-320, spec0.abs_tol * math.exp(-min(logpref, 700.0)))
    spec = QuadratureSpec(
        rel_tol=spec0.rel_tol,
        abs_tol=abs_tol_int,
        max_subdivisions=spec0.max_subdivisions,
        truncation_threshold=spec0.truncation_threshold,
    )
    f, f_mp = _theta_integrands(r, t)
    zeros = (k * t for k in itertools.count(1))
    res = integrate_oscillatory(
        f,
        zeros,
        spec,
        domain=(0.0, _support_cut(r, t)),
        f_mp=f_mp,
        accelerate=engine.acceleration_enabled,
    )

    degraded = t < engine.t_min
    if res.value == 0.0:
        err = res.error_estimate * math.exp(min(logpref, 700.0))
        return ThetaResult(0.0, err, degraded, res.converged)

    log_value = logpref + math.log(abs(res.value))
    if log_value > 700.0:
        raise NumericalError(f"theta({r}, {t}) overflows double precision")
    value = math.copysign(math.exp(log_value), res.value)
    err = (
        math.exp(min(logpref + math.log(res.error_estimate), 700.0))
        if res.error_estimate > 0.0
        else 0.0
    )

    if value < 0.0:
        if -value <= max(err, 10.0 * spec0.abs_tol):
            value = 0.0
        else:
            raise NumericalError(
                f"theta({r}, {t}) = {value:.3e} is negative beyond the error estimate {err:.3e}"
            )
    return ThetaResult(value, err, degraded, res.converged)


def theta(q: HwQuery, engine: ThetaEngine = ThetaEngine()) -> float:
    """The kernel theta(r, t); nonnegative."""
    res = theta_detail(q, engine)
    if res.degraded:
        warnings.warn(
            f"theta evaluated at t={q.t} < t_min={engine.t_min}: accuracy not certified",
            DegradedAccuracyWarning,
            stacklevel=2,
        )
    if not res.converged:
        warnings.warn(
            f"theta({q.r}, {q.t}) quadrature did not converge (err~{res.error_estimate:.2e})",
            ConvergenceWarning,
            stacklevel=2,
        )
    return res.value


def hw_density(q: HwQuery, engine: ThetaEngine = ThetaEngine()) -> float:
    """Density of the Hartman-Watson law with parameter r, at time t."""
    res = theta_detail(q, engine)
    if res.degraded:
        warnings.warn(
            f"hw_density at t={q.t} < t_min={engine.t_min}: accuracy not certified",
            DegradedAccuracyWarning,
            stacklevel=2,
        )
    # theta / I_0(r), with the scaled Bessel to survive large r
    return res.value * math.exp(-q.r) / float(sc.ive(0.0, q.r))


def theta_laplace_in_r(x: float, t: float, weight: str = "over_r") -> float:
    """Closed forms of the Laplace transform of theta in its first argument.

    ``weight="over_r"`` is the transform of theta(r,t)/r, ``weight="plain"``
    the transform of theta(r,t) itself.  Both continue analytically to
    -1 < x < 1, where the inverse cosh is replaced by an arccos branch.
    """
    if not t > 0.0:
        raise DomainError(f"t must be positive, got {t}")
    if not x > -1.0:
        raise DomainError(f"transform defined for x > -1, got {x}")
    if weight not in ("over_r", "plain"):
        raise DomainError(f"unknown weight {weight!r}")

    if weight == "over_r":
        if x >= 1.0:
            return math.exp(-math.acosh(x) ** 2 / (2.0 * t)) / math.sqrt(2.0 * math.pi * t)
        return math.exp(math.acos(x) ** 2 / (2.0 * t)) / math.sqrt(2.0 * math.pi * t)

    pref = 1.0 / math.sqrt(2.0 * math.pi * t**3)
    if abs(x - 1.0) < 1e-8:
        return pref  # a_c(x) * a_c'(x) -> 1 as x -> 1
    if x > 1.0:
        a = math.acosh(x)
        return pref * a / math.sqrt(x * x - 1.0) * math.exp(-a * a / (2.0 * t))
    a = math.acos(x)
    return pref * a / math.sqrt(1.0 - x * x) * math.exp(a * a / (2.0 * t))


def theta_laplace_in_r_quadrature(
    x: float, t: float, engine: ThetaEngine = ThetaEngine(), weight: str = "over_r"
) -> float:
    """Quadrature side of :func:`theta_laplace_in_r`, for cross-checking."""
    if not x > -1.0:
        raise DomainError(f"transform defined for x > -1, got {x}")
    if weight not in ("over_r", "plain"):
        raise DomainError(f"unknown weight {weight!r}")

    def g(r: float) -> float:
        if r <= 0.0:
            return 0.0
        th = theta_detail(HwQuery(r, t), engine).value
        return math.exp(-x * r) * (th / r if weight == "over_r" else th)

    spec = QuadratureSpec(rel_tol=1e-8, abs_tol=1e-11, max_subdivisions=300)
    res = integrate_adaptive(g, (0.0, math.inf), spec)
    return res.value


def _theta_value(r: float, t: float, engine: ThetaEngine) -> float:
    return theta_detail(HwQuery(r, t), engine).value


def theta_time_laplace(
    nu: float,
    r: float,
    engine: ThetaEngine = ThetaEngine(),
    rel_tol: float = 1e-6,
) -> float:
    """Quadrature evaluation of int_0^inf exp(-nu^2 t/2) theta(r, t) dt.

    This is the verification path for the Laplace characterization of the
    kernel (the closed form is the modified Bessel function I_|nu|(r)).  For
    nu = 0 the integrand only decays like t^(-3/2); the far tail is completed
    with its known power-law form, coefficient fitted from the computed
    kernel itself.
    """
    if not r > 0.0:
        raise DomainError(f"r must be positive, got {r}")
    nu = abs(float(nu))
    half_nu2 = 0.5 * nu * nu

    def g(t: float) -> float:
        return math.exp(-half_nu2 * t) * _theta_value(r, t, engine)

    # main body
    t_break = 0.3
    body, _ = _quad_simple(g, t_break, 50.0, rel_tol)

    # lower extension: theta dies superexponentially as t -> 0; walk down
    # until the integrand is negligible against the running total
    t_lo = t_break
    total_scale = abs(body) + 1e-300
    while t_lo > 0.04:
        t_try = t_lo * 0.78
        if g(t_try) * t_try < 1e-8 * total_scale:
            t_lo = t_try
            break
        t_lo = t_try
    low, _ = _quad_simple(g, t_lo, t_break, rel_tol)

    # upper tail
    if nu > 0.0:
        t_hi = 50.0
        while g(t_hi) * t_hi > 1e-9 * total_scale and t_hi < 1e6:
            t_hi *= 1.6
        upper = 0.0
        if t_hi > 50.0:
            upper, _ = _quad_simple(g, 50.0, t_hi, rel_tol)
        return low + body + upper

    # nu = 0: integrate to a large horizon in log-t, then attach the
    # power-law tail theta ~ (K0(r) + c/t) / sqrt(2 pi t^3)
    t_pow = 8000.0

    def g_log(s: float) -> float:
        ts = math.exp(s)
        return g(ts) * ts

    upper, _ = _quad_simple(g_log, math.log(50.0), math.log(t_pow), rel_tol)
    k0 = float(sc.kv(0.0, r))
    probes = [0.5 * t_pow, 0.7 * t_pow, t_pow]
    cs = [
        (_theta_value(r, tp, engine) * math.sqrt(2.0 * math.pi * tp**3) - k0) * tp
        for tp in probes
    ]
    c = sum(cs) / len(cs)
    tail = (2.0 * k0 / math.sqrt(t_pow) + (2.0 / 3.0) * c * t_pow**-1.5) / math.sqrt(2.0 * math.pi)
    return low + body + upper + tail


def _quad_simple(g, a: float, b: float, rel_tol: float):
    spec = QuadratureSpec(rel_tol=rel_tol, abs_tol=1e-13, max_subdivisions=300)
    res = integrate_adaptive(g, (a, b), spec)
    return res.value, res.error_estimate


def stieltjes_integral(n: int, t: float, spec: QuadratureSpec | None = None) -> float:
    """int_0^inf exp(-xi^2/2t) sinh(n xi) sin(pi xi/t) dxi.

    Exactly zero for integer n; the evaluation is the cancellation gate for
    the oscillatory integrator.
    """
    if not (isinstance(n, (int, np.integer)) and n >= 1):
        raise DomainError(f"n must be a positive integer, got {n}")
    if not t > 0.0:
        raise DomainError(f"t must be positive, got {t}")
    spec = spec or QuadratureSpec(rel_tol=1e-9, abs_tol=1e-9)
    inv2t = 1.0 / (2.0 * t)
    w = math.pi / t

    # sinh expanded into exponentials so huge sinh never meets zero gaussian
    def f(xi: np.ndarray) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        return 0.5 * (np.exp(n * xi - xi * xi * inv2t) - np.exp(-n * xi - xi * xi * inv2t)) * np.sin(w * xi)

    t_mp = mpmath.mpf(t)

    def f_mp(xi):
        return (
            mpmath.exp(-xi * xi / (2 * t_mp))
            * mpmath.sinh(n * xi)
            * mpmath.sin(mpmath.pi * xi / t_mp)
        )

    # the gaussian kills the integrand past n*t + a wide safety margin
    cut = n * t + math.sqrt(2.0 * t * 120.0) + 5.0
    zeros = (k * t for k in itertools.count(1))
    res = integrate_oscillatory(f, zeros, spec, domain=(0.0, cut), f_mp=f_mp)
    return res.value


def lognormal_moment(n: int, t: float, lam: float) -> float:
    """Exponential moment of the sine-perturbed gaussian measure.

    The perturbation integrates to zero against every exp(n xi), so the
    result equals exp(n^2 t / 2) for any |lam| < 1: the moments cannot see
    lam, which is the classical indeterminacy of the log-normal moment
    problem.
    """
    if not (isinstance(n, (int, np.integer)) and n >= 1):
        raise DomainError(f"n must be a positive integer, got {n}")
    if not t > 0.0:
        raise DomainError(f"t must be positive, got {t}")
    if not abs(lam) < 1.0:
        raise DomainError(f"|lam| must be < 1, got {lam}")

    inv2t = 1.0 / (2.0 * t)
    w = math.pi / t
    norm = 1.0 / math.sqrt(2.0 * math.pi * t)

    def f(xi: float) -> float:
        return norm * math.exp(n * xi - xi * xi * inv2t) * (1.0 + lam * math.sin(w * xi))

    half_width = n * t + 12.0 * math.sqrt(t) + 2.0
    spec = QuadratureSpec(rel_tol=1e-11, abs_tol=1e-13, max_subdivisions=400)
    res = integrate_adaptive(f, (-half_width, half_width), spec)
    return res.value
