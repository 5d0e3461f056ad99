"""Adaptive and oscillatory quadrature engines.

Every numeric integral in the package funnels through the two entry points
here, so tolerances, tail truncation and subdivision budgets are governed by
a single :class:`QuadratureSpec`.

The oscillatory engine splits the domain at caller-supplied sign-change
abscissae, integrates each half-period with a Gauss-Legendre pair, and sums
with compensated summation plus optional alternating-series (Euler)
acceleration.  When the requested tolerance demands more cancellation than
float64 can deliver (half-period pieces exceeding ~1e15 times the target
absolute error), the same segmentation is re-evaluated in extended precision,
provided the caller supplied an ``f_mp`` integrand.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Tuple

import mpmath
import numpy as np
from scipy.integrate import quad

from .errors import DomainError

__all__ = [
    "QuadratureSpec",
    "IntegralResult",
    "integrate_adaptive",
    "integrate_oscillatory",
]

_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances, truncation and subdivision policy for numeric integrals.

    ``truncation_threshold`` is relative: a semi-infinite tail is cut once the
    integrand magnitude has fallen below ``truncation_threshold`` times its
    running maximum (every integrand handled here decays at least
    exponentially).
    """

    rel_tol: float = 1e-9
    abs_tol: float = 1e-11
    max_subdivisions: int = 200
    truncation_threshold: float = 1e-14

    def __post_init__(self) -> None:
        if not (self.rel_tol > 0.0 and self.abs_tol > 0.0):
            raise DomainError("rel_tol and abs_tol must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")
        if not self.truncation_threshold > 0.0:
            raise DomainError("truncation_threshold must be positive")

    def tolerance_for(self, value: float) -> float:
        """Absolute error budget for a result of the given magnitude."""
        return max(self.abs_tol, self.rel_tol * abs(value))


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error_estimate: float
    subdivisions_used: int
    converged: bool


def _scan_truncation(f: Callable[[float], float], a: float, spec: QuadratureSpec) -> Tuple[float, float]:
    """Find a cut point for a semi-infinite tail; returns (cut, running max).

    Three probes per geometric step so an isolated zero of the integrand
    cannot fake decay.
    """
    h = 1.0
    run_max = 0.0
    quiet = 0
    x = a
    for _ in range(220):
        probes = (x + 0.31 * h, x + 0.73 * h, x + h)
        m = max(abs(float(f(p))) for p in probes)
        run_max = max(run_max, m)
        x += h
        if run_max > 0.0 and m <= spec.truncation_threshold * run_max:
            quiet += 1
            if quiet >= 2:
                return x, run_max
        else:
            quiet = 0
        h *= 1.6
    return x, run_max


def integrate_adaptive(
    f: Callable[[float], float],
    domain: Tuple[float, float],
    spec: QuadratureSpec = QuadratureSpec(),
) -> IntegralResult:
    """Adaptive quadrature over a finite or semi-infinite interval.

    Non-convergence never raises: the result comes back ``converged=False``.
    """
    a, b = float(domain[0]), float(domain[1])
    if math.isnan(a) or math.isnan(b) or not a < b:
        raise DomainError(f"invalid integration domain ({a}, {b})")
    if math.isinf(a) and math.isinf(b):
        raise DomainError("two-sided infinite domains are not supported; split at a finite point")
    if math.isinf(a):
        return integrate_adaptive(lambda x: f(-x), (-b, math.inf), spec)

    tail_err = 0.0
    if math.isinf(b):
        b, run_max = _scan_truncation(f, a, spec)
        tail_err = spec.truncation_threshold * run_max * max(b - a, 1.0)

    out = quad(
        f,
        a,
        b,
        epsabs=0.5 * spec.abs_tol,
        epsrel=0.5 * spec.rel_tol,
        limit=spec.max_subdivisions,
        full_output=True,
    )
    value, abserr, info = out[0], out[1], out[2]
    flagged = len(out) > 3
    err = abserr + tail_err
    converged = (not flagged) and err <= spec.tolerance_for(value)
    return IntegralResult(float(value), float(err), int(info["last"]), converged)


# ---------------------------------------------------------------------------
# oscillatory path


def _gl_nodes(n: int) -> Tuple[np.ndarray, np.ndarray]:
    cache = _gl_nodes.__dict__.setdefault("cache", {})
    if n not in cache:
        cache[n] = np.polynomial.legendre.leggauss(n)
    return cache[n]


def _segment(f, a: float, b: float) -> Tuple[float, float, float]:
    """Integrate one half-period; returns (value, error estimate, node peak)."""
    x_hi, w_hi = _gl_nodes(25)
    x_lo, w_lo = _gl_nodes(12)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    y_hi = np.asarray(f(mid + half * x_hi), dtype=float)
    y_lo = np.asarray(f(mid + half * x_lo), dtype=float)
    v_hi = half * float(w_hi @ y_hi)
    v_lo = half * float(w_lo @ y_lo)
    peak = float(np.max(np.abs(y_hi))) if y_hi.size else 0.0
    return v_hi, abs(v_hi - v_lo), peak


def _segment_refined(f, a: float, b: float, tol: float, depth: int = 0):
    v, e, peak = _segment(f, a, b)
    floor = 4.0 * _EPS * (abs(v) + peak * (b - a))
    if e <= max(tol, floor) or depth >= 5:
        return v, e, peak
    m = 0.5 * (a + b)
    v1, e1, p1 = _segment_refined(f, a, m, 0.5 * tol, depth + 1)
    v2, e2, p2 = _segment_refined(f, m, b, 0.5 * tol, depth + 1)
    return v1 + v2, e1 + e2, max(p1, p2)


def _euler_sum(terms: np.ndarray) -> float:
    """Euler transform of a (near-)alternating tail: repeated pairwise
    averaging of the partial sums."""
    s = np.cumsum(terms)
    while s.size > 1:
        s = 0.5 * (s[1:] + s[:-1])
    return float(s[0])


def _mp_pass(
    f_mp,
    boundaries,
    zero_iter,
    hard_stop: float,
    spec: QuadratureSpec,
    target_abs: float,
    max_piece: float,
) -> IntegralResult:
    """Re-run the segment sum in extended precision.

    Reuses the float64 segmentation and keeps consuming zeros while the
    pieces remain significant relative to the target absolute error.
    """
    excess = max(max_piece / max(target_abs, 5e-324), 1.0)
    digits = min(16 + int(math.ceil(math.log10(excess))) + 8, 350)
    pieces = []
    with mpmath.workdps(digits):
        for lo, hi in zip(boundaries[:-1], boundaries[1:]):
            pieces.append(mpmath.quad(f_mp, [lo, hi]))
        prev = boundaries[-1]
        small = 0
        while len(pieces) < spec.max_subdivisions and prev < hard_stop:
            z = next(zero_iter, None)
            if z is not None and z <= prev:
                continue
            nxt = hard_stop if (z is None or z >= hard_stop) else float(z)
            if math.isinf(nxt):
                break
            piece = mpmath.quad(f_mp, [prev, nxt])
            pieces.append(piece)
            prev = nxt
            if abs(piece) < 1e-3 * target_abs:
                small += 1
                if small >= 2:
                    break
            else:
                small = 0
        total = mpmath.fsum(pieces)
        tail = float(abs(pieces[-1])) if pieces else 0.0
        peak = float(max(abs(p) for p in pieces)) if pieces else 0.0
    value = float(total)
    err = peak * 10.0 ** (-(digits - 3)) + tail
    return IntegralResult(value, err, len(pieces), err <= spec.tolerance_for(value))


def integrate_oscillatory(
    f,
    zeros: Iterable[float],
    spec: QuadratureSpec = QuadratureSpec(),
    domain: Tuple[float, float] = (0.0, math.inf),
    f_mp=None,
    accelerate: bool = True,
) -> IntegralResult:
    """Sum of per-half-period integrals of a sign-alternating integrand.

    ``f`` must accept numpy arrays.  ``zeros`` is an increasing iterable of
    sign-change abscissae (a generator is fine; it is consumed lazily).  With
    fewer than two zeros inside the truncated domain this falls back to
    :func:`integrate_adaptive`.  ``f_mp``, when given, enables the extended
    precision re-evaluation described in the module docstring.
    """
    a, b = float(domain[0]), float(domain[1])
    if math.isnan(a) or not a < b:
        raise DomainError(f"invalid integration domain ({a}, {b})")

    zero_iter = iter(zeros)
    boundaries = [a]
    values: list[float] = []
    errors: list[float] = []
    max_abs = 0.0
    stop = "budget"

    while len(values) < spec.max_subdivisions:
        z = next(zero_iter, None)
        if z is not None and z <= boundaries[-1]:
            continue
        nxt = b if (z is None or z >= b) else float(z)
        if math.isinf(nxt):
            stop = "zeros_exhausted"
            break
        seg_tol = max(0.02 * spec.abs_tol, 1e-15 * max_abs)
        v, e, _peak = _segment_refined(f, boundaries[-1], nxt, seg_tol)
        boundaries.append(nxt)
        values.append(v)
        errors.append(e)
        max_abs = max(max_abs, abs(v))
        if z is None or nxt >= b:
            stop = "domain_end"
            break
        if max_abs > 0.0 and abs(v) <= max(0.05 * spec.abs_tol, spec.truncation_threshold * max_abs):
            if len(values) >= 3 and abs(values[-2]) <= max(
                0.05 * spec.abs_tol, spec.truncation_threshold * max_abs
            ):
                stop = "tail_negligible"
                break

    if len(values) < 2:
        def f_scalar(x: float) -> float:
            return float(np.asarray(f(np.asarray([x], dtype=float)))[0])

        return integrate_adaptive(f_scalar, (a, b), spec)

    if stop == "zeros_exhausted":
        # finitely many zeros over an infinite domain: finish the tail
        def f_scalar(x: float) -> float:
            return float(np.asarray(f(np.asarray([x], dtype=float)))[0])

        rest = integrate_adaptive(f_scalar, (boundaries[-1], b), spec)
        values.append(rest.value)
        errors.append(rest.error_estimate)
        boundaries.append(b)
        max_abs = max(max_abs, abs(rest.value))
        stop = "domain_end"

    plain = math.fsum(values)
    quad_err = math.fsum(errors)
    trunc_err = 0.0 if stop == "domain_end" else abs(values[-1])

    value = plain
    if accelerate and stop != "domain_end" and len(values) >= 6:
        tail = np.asarray(values[-6:])
        signs = np.sign(tail)
        ratios = np.abs(tail[1:]) / np.maximum(np.abs(tail[:-1]), 5e-324)
        if np.all(signs[1:] * signs[:-1] < 0) and float(np.median(ratios)) > 0.4:
            value = math.fsum(values[:-6]) + _euler_sum(tail)
            trunc_err = abs(value - plain) * 0.5 + 0.1 * abs(float(tail[-1]))

    err = quad_err + trunc_err
    target = spec.tolerance_for(value)
    noise_floor = _EPS * max_abs * math.sqrt(max(len(values), 1))
    converged = err <= target and noise_floor <= 0.5 * target

    if not converged and f_mp is not None and noise_floor > 0.25 * target:
        return _mp_pass(f_mp, boundaries, zero_iter, b, spec, target, max_abs)

    return IntegralResult(value, err + noise_floor, len(values), converged)
