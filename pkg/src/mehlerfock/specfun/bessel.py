"""Modified Bessel functions of imaginary order and incomplete Bessel integrals."""

from __future__ import annotations

import math

import numpy as np

from ..quadrature import (
    ExponentialDecay,
    IntegralResult,
    QuadratureConfig,
    finish,
    integrate_adaptive,
    integrate_semi_infinite,
)
from .legendre import DomainError

# e^{-y cosh t} is negligible once y (cosh t - 1) exceeds this
_DECAY_SPAN = 40.0


def bessel_k_imag_values(taus, y: float, cfg: QuadratureConfig) -> IntegralResult:
    """K_{i tau}(y) = int_0^inf exp(-y cosh t) cos(tau t) dt for a vector of taus.

    The factor exp(-y) is pulled out of the integrand so that the tolerances
    act on a quantity of order one even when K is exponentially small.
    """
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    y = float(y)
    if not y > 0:
        raise DomainError(f"y must be > 0 (got {y})")

    def f(t):
        with np.errstate(over="ignore"):
            w = np.exp(-2.0 * y * np.sinh(0.5 * t) ** 2)
        return np.cos(taus[:, None] * t[None, :]) * w[None, :]

    # local decay rate where y cosh t has grown by _DECAY_SPAN
    t_star = math.acosh(1.0 + _DECAY_SPAN / y)
    rate = y * math.sinh(t_star)
    res = integrate_semi_infinite(f, 0.0, ExponentialDecay(rate), cfg)
    return res.scaled(math.exp(-y))


def bessel_k_imag(tau: float, y: float, cfg: QuadratureConfig | None = None, full_output=False):
    """K_{i tau}(y), real for real tau and y > 0."""
    if tau < 0:
        raise ValueError("tau must be >= 0")
    res = bessel_k_imag_values([tau], y, cfg or QuadratureConfig())
    return finish(res, full_output, "K_{i tau}(y)")


def incomplete_bessel(
    n: int,
    y: float,
    omega: float = math.pi,
    cfg: QuadratureConfig | None = None,
    full_output: bool = False,
):
    """K_{in}(y, omega) = int_0^omega exp(-y cosh u) cos(n u) du."""
    if n < 0:
        raise ValueError("n must be a nonnegative integer")
    if y < 0:
        raise DomainError("y must be >= 0")
    if omega < 0:
        raise DomainError("omega must be >= 0")
    cfg = cfg or QuadratureConfig()
    if omega == 0:
        return finish(IntegralResult(0.0, 0.0, 0, True), full_output)
    if y == 0:
        # int_0^omega cos(n u) du; exactly zero at omega = pi for n >= 1
        if n == 0:
            value = float(omega)
        elif omega == math.pi and int(n) == n:
            value = 0.0
        else:
            value = math.sin(n * omega) / n
        return finish(IntegralResult(value, 0.0, 0, True), full_output)

    def f(u):
        return np.exp(-y * np.cosh(u)) * np.cos(n * u)

    return finish(integrate_adaptive(f, 0.0, omega, cfg), full_output, "incomplete Bessel integral")


def incomplete_bessel_ibp(
    n: int, y: float, cfg: QuadratureConfig | None = None, full_output: bool = False
):
    """K_{in}(y, pi) after integrating by parts twice.

    ((-1)^(n+1) / n^2) sinh(pi) y exp(-y cosh pi)
      + (y / n^2) int_0^pi exp(-y cosh u) (cosh u - y sinh^2 u) cos(n u) du

    Both terms carry 1/n^2 explicitly.
    """
    if n < 1:
        raise DomainError("n must be >= 1 (the representation divides by n^2)")
    if y < 0:
        raise DomainError("y must be >= 0")
    cfg = cfg or QuadratureConfig()

    def f(u):
        return np.exp(-y * np.cosh(u)) * (np.cosh(u) - y * np.sinh(u) ** 2) * np.cos(n * u)

    res = integrate_adaptive(f, 0.0, math.pi, cfg)
    boundary = (-1) ** (n + 1) / n**2 * math.sinh(math.pi) * y * math.exp(-y * math.cosh(math.pi))
    scale = y / n**2
    res = IntegralResult(
        boundary + scale * res.value, scale * res.error_estimate, res.evaluations, res.converged
    )
    return finish(res, full_output, "incomplete Bessel integral")
