"""Bessel-process transition densities, Green functions and the conditional
characteristic function of the time-integral of the inverse squared radius.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import special as sc

from .errors import DomainError
from .special import f_product

__all__ = [
    "BesselParams",
    "transition_density",
    "green_function",
    "hw_conditional_char",
]


@dataclass(frozen=True)
class BesselParams:
    """Index and starting point of a Bessel process."""

    index: float
    start: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.index):
            raise DomainError("index must be finite")
        if not (math.isfinite(self.start) and self.start >= 0.0):
            raise DomainError(f"start must be >= 0, got {self.start}")


_ZERO_START = 1e-12


def transition_density(p: BesselParams, t: float, y: float) -> float:
    """Transition density p(t, x, y) of the Bessel process of index > -1.

    The x = 0 starting point has its own closed form; the two branches join
    continuously and switch at x < 1e-12.
    """
    mu, x = p.index, p.start
    if mu <= -1.0:
        raise DomainError(f"transition density requires index > -1, got {mu}")
    if not t > 0.0:
        raise DomainError(f"t must be positive, got {t}")
    if not y > 0.0:
        raise DomainError(f"y must be positive, got {y}")

    if x < _ZERO_START:
        log_dens = (
            (1.0 + 2.0 * mu) * math.log(y)
            - y * y / (2.0 * t)
            - mu * math.log(2.0)
            - (1.0 + mu) * math.log(t)
            - math.lgamma(1.0 + mu)
        )
        return math.exp(log_dens)

    # scaled Bessel keeps exp(-(x^2+y^2)/2t) * I_mu(xy/t) finite:
    # the combination reduces to exp(-(x-y)^2/2t) * ive(mu, xy/t)
    z = x * y / t
    return (y / x) ** mu * (y / t) * float(sc.ive(mu, z)) * math.exp(-((x - y) ** 2) / (2.0 * t))


def green_function(p: BesselParams, alpha: float, y: float) -> float:
    """Resolvent kernel of the Bessel process: the Laplace transform in time
    of the transition density, at rate alpha."""
    mu, x = p.index, p.start
    if not alpha > 0.0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    if not x > 0.0:
        raise DomainError("green_function requires a positive starting point")
    if not y > 0.0:
        raise DomainError(f"y must be positive, got {y}")
    s = math.sqrt(2.0 * alpha)
    return 2.0 * y * (y / x) ** mu * f_product(mu, s * x, s * y)


def hw_conditional_char(x: float, y: float, t: float, mu: float) -> float:
    """Conditional Laplace transform, given R_t = y, of half the squared-index
    times the integrated inverse squared radius of a driftless Bessel process
    started at x.  Equals the ratio I_|mu| / I_0 evaluated at x*y/t, and also
    the conditional characteristic function of the planar Brownian winding
    angle."""
    if not (x > 0.0 and y > 0.0 and t > 0.0):
        raise DomainError("x, y, t must all be positive")
    z = x * y / t
    return float(sc.ive(abs(mu), z)) / float(sc.ive(0.0, z))
