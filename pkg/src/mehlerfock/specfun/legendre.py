"""Conical Legendre functions P^mu_{i tau - 1/2}(x), x > 1, and incomplete variants.

Three independent routes evaluate the complete kernel:

* ``mehler``   -- finite integral over (0, arccosh x) with an endpoint singularity,
* ``legendre`` -- semi-infinite integral over (0, inf) divided by the gamma pair,
* ``mellin_barnes`` -- vertical contour integral of a gamma-function ratio.

Internally every kernel is evaluated from the shift ``u = x - 1`` so that
points within rounding distance of ``x = 1`` stay representable; the
``*_values`` helpers take ``u`` and an array of indices and return one
vector-valued :class:`IntegralResult`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from ..quadrature import (
    ExponentialDecay,
    IntegralResult,
    QuadratureConfig,
    finish,
    integrate_adaptive,
    integrate_endpoint_singular,
    integrate_semi_infinite,
)
from .gamma import complex_gamma, gamma_pair, gamma_pair_array, log_gamma
from .params import MuParameter, as_mu, tau_of

Route = Literal["auto", "mehler", "legendre", "mellin_barnes"]

_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
_EPS = np.finfo(float).eps
MEHLER_CROSSOVER = 3.0
_LEGENDRE_LOSS = 1000.0


class DomainError(ValueError):
    """Argument outside the domain of a kernel."""


class ConfigurationError(ValueError):
    """Inconsistent numerical configuration (e.g. contour outside its strip)."""


def _shift(x: float) -> float:
    x = float(x)
    if not x > 1:
        raise DomainError(f"x must be > 1 (got {x})")
    return x - 1.0


def _acosh1p(u: float) -> float:
    """arccosh(1 + u) without cancellation for small u."""
    return math.log1p(u + math.sqrt(u * (u + 2.0)))


def _log_cosh_plus(t: np.ndarray, z: float) -> np.ndarray:
    """log(cosh t + z) for t >= 0, free of overflow."""
    return t + np.log(0.5 * (1.0 + np.exp(-2.0 * t)) + z * np.exp(-t))


def _log_2sinh(w: np.ndarray) -> np.ndarray:
    # w > 0
    return w + np.log(-np.expm1(-2.0 * w))


def _pow_real(base: float, expo: complex) -> complex:
    return complex(np.exp(expo * math.log(base)))


def _taus(taus) -> np.ndarray:
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    if np.any(taus < 0):
        raise ValueError("degree indices must be >= 0")
    return taus


def _collapse(result: IntegralResult, scalar: bool) -> IntegralResult:
    if scalar and np.ndim(result.value):
        return IntegralResult(
            complex(np.asarray(result.value).ravel()[0]),
            result.error_estimate,
            result.evaluations,
            result.converged,
        )
    return result


def _complex_vector(result: IntegralResult) -> IntegralResult:
    value = np.atleast_1d(np.asarray(result.value, dtype=complex))
    errors = np.broadcast_to(result.errors(), value.shape).astype(float)
    return IntegralResult(
        value, result.error_estimate, result.evaluations, result.converged, errors
    )


# ---------------------------------------------------------------------------
# Mehler route


def mehler_values(mu: complex, taus, u: float, cfg: QuadratureConfig) -> IntegralResult:
    """P^mu_{i tau - 1/2}(1 + u) for each tau, from the finite Mehler integral.

    The factor (cosh a - cosh t)^(-(1/2+mu)) is split into
    (a - t)^(-(1/2+mu)), removed by substitution, times a smooth ratio
    computed from 2 sinh(a - d/2) sinh(d/2) / d with d = a - t.
    """
    mu = complex(mu)
    taus = _taus(taus)
    if not u > 0:
        raise DomainError("x must be > 1")
    alpha = _acosh1p(u)
    sinh_alpha = math.sqrt(u * (u + 2.0))
    expo = 0.5 + mu
    # Re(1/2 + mu) < 0 leaves a bounded weight: keep it inside g
    weight_in_g = expo.real < 0
    prefactor = _SQRT_2_OVER_PI * _pow_real(sinh_alpha, mu) / complex_gamma(0.5 - mu)

    def g(t, d):
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(d > 1e-300, np.sinh(0.5 * d) / d, 0.5)
        log_ratio = _log_2sinh(alpha - 0.5 * d) + np.log(ratio)
        w = np.exp(-expo * log_ratio) * prefactor
        if weight_in_g:
            w = w * np.exp(-expo * np.log(d))
        return np.cos(taus[:, None] * t[None, :]) * w[None, :]

    res = integrate_endpoint_singular(
        g, 0.0, alpha, 0.0 if weight_in_g else expo, "right", cfg, with_distance=True
    )
    return _complex_vector(res)


def legendre_conical_mehler(
    mu: MuParameter | complex,
    degree,
    x: float,
    cfg: QuadratureConfig | None = None,
    full_output: bool = False,
):
    """P^mu_{i tau - 1/2}(x) from the Mehler integral over (0, arccosh x)."""
    m = as_mu(mu)
    res = mehler_values(m.mu, [tau_of(degree)], _shift(x), cfg or QuadratureConfig())
    return finish(_collapse(res, True), full_output, "Mehler integral")


# ---------------------------------------------------------------------------
# Legendre (semi-infinite) route and the incomplete kernels


def _legendre_prefactor(mu: complex, taus: np.ndarray, u: float) -> np.ndarray:
    x2m1 = u * (u + 2.0)
    return (
        _SQRT_2_OVER_PI
        * complex_gamma(0.5 - mu)
        * _pow_real(x2m1, -mu / 2.0)
        / gamma_pair_array(taus, mu)
    )


def legendre_values(
    mu: complex, taus, u: float, cfg: QuadratureConfig, omega: float | None = None
) -> IntegralResult:
    """Integral over (0, omega) of cos(tau t) (cosh t + x)^(mu - 1/2), with the
    complete-kernel prefactor; ``omega=None`` means the full half line."""
    mu = complex(mu)
    taus = _taus(taus)
    if not u > 0:
        raise DomainError("x must be > 1")
    z = 1.0 + u
    c = 0.5 - mu
    pref = _legendre_prefactor(mu, taus, u)

    def f(t):
        w = np.exp(-c * _log_cosh_plus(t, z))
        return pref[:, None] * np.cos(taus[:, None] * t[None, :]) * w[None, :]

    knee = math.log(2.0 * z)
    if omega is None:
        res = integrate_semi_infinite(f, 0.0, ExponentialDecay(c.real), cfg, breakpoints=(knee,))
    else:
        if omega < 0:
            raise DomainError("omega must be >= 0")
        if omega == 0:
            return IntegralResult(np.zeros(taus.size, dtype=complex), 0.0, 0, True)
        res = integrate_adaptive(f, 0.0, omega, cfg, breakpoints=(knee,))
    return _complex_vector(res)


def legendre_conical_integral(
    mu: MuParameter | complex,
    n,
    x: float,
    cfg: QuadratureConfig | None = None,
    full_output: bool = False,
):
    """P^mu_{i n - 1/2}(x) from the semi-infinite Legendre integral."""
    m = as_mu(mu)
    res = legendre_values(m.mu, [tau_of(n)], _shift(x), cfg or QuadratureConfig())
    return finish(_collapse(res, True), full_output, "Legendre integral")


def incomplete_legendre(
    mu: MuParameter | complex,
    n,
    x: float,
    omega: float,
    cfg: QuadratureConfig | None = None,
    full_output: bool = False,
):
    """Incomplete Legendre integral P^mu_{i n - 1/2}(x, omega).

    The complete-kernel Legendre integral with its upper limit cut at omega.
    """
    m = as_mu(mu)
    if omega < 0:
        raise DomainError("omega must be >= 0")
    res = legendre_values(m.mu, [tau_of(n)], _shift(x), cfg or QuadratureConfig(), float(omega))
    return finish(_collapse(res, True), full_output, "incomplete Legendre integral")


def incomplete_ibp_values(mu: complex, ms, u: float, cfg: QuadratureConfig) -> IntegralResult:
    """P^mu_{i m - 1/2}(1 + u, pi) after one integration by parts.

    sqrt(2/pi) Gamma(3/2 - mu) (x^2 - 1)^(-mu/2) / (m Gamma-pair)
      * int_0^pi sin(m t) sinh t (cosh t + x)^(mu - 3/2) dt
    """
    mu = complex(mu)
    ms = _taus(ms)
    if np.any(ms <= 0):
        raise ValueError("index m must be positive")
    if not u > 0:
        raise DomainError("x must be > 1")
    z = 1.0 + u
    c = 1.5 - mu
    pref = (
        _SQRT_2_OVER_PI
        * complex_gamma(c)
        * _pow_real(u * (u + 2.0), -mu / 2.0)
        / (ms * gamma_pair_array(ms, mu))
    )

    def f(t):
        w = np.sinh(t) * np.exp(-c * _log_cosh_plus(t, z))
        return pref[:, None] * np.sin(ms[:, None] * t[None, :]) * w[None, :]

    return _complex_vector(integrate_adaptive(f, 0.0, math.pi, cfg))


def incomplete_legendre_ibp(
    mu: MuParameter | complex,
    m: int,
    x: float,
    cfg: QuadratureConfig | None = None,
    full_output: bool = False,
):
    """P^mu_{i m - 1/2}(x, pi) from the integrated-by-parts representation."""
    mm = as_mu(mu)
    if m < 1:
        raise ValueError("m must be a positive integer")
    res = incomplete_ibp_values(mm.mu, [m], _shift(x), cfg or QuadratureConfig())
    return finish(_collapse(res, True), full_output, "incomplete Legendre integral")


# ---------------------------------------------------------------------------
# Mellin-Barnes route


@dataclass(frozen=True)
class MellinBarnesConfig:
    """Contour abscissa and truncation for the Mellin-Barnes integral.

    ``None`` selects the defaults: the strip midpoint 1/4 and ``T = n + 40``.
    """

    gamma_abscissa: float | None = None
    truncation_height: float | None = None
    cfg: QuadratureConfig = field(default_factory=QuadratureConfig)

    def __post_init__(self):
        if self.truncation_height is not None and not self.truncation_height > 0:
            raise ConfigurationError("truncation_height must be > 0")

    def abscissa(self, mu: complex) -> float:
        g = 0.25 if self.gamma_abscissa is None else float(self.gamma_abscissa)
        lo, hi = mu.real / 2.0, 0.5 - mu.real / 2.0
        if not lo < g < hi:
            raise ConfigurationError(
                f"contour abscissa {g} must satisfy Re mu/2 < gamma < 1/2 - Re mu/2 "
                f"= ({lo}, {hi})"
            )
        return g

    def height(self, n: float) -> float:
        return n + 40.0 if self.truncation_height is None else float(self.truncation_height)


def mellin_barnes_integrand(mu: complex, n: float, x_shift: float, s) -> np.ndarray:
    """Gamma(s - mu/2) Gamma(1/2 + i n - mu/2 - s) Gamma(1/2 - i n - mu/2 - s)
    / Gamma(1 - mu/2 - s) * x**(-s), unnormalised."""
    s = np.asarray(s, dtype=complex)
    mu = complex(mu)
    h = mu / 2.0
    lg = (
        log_gamma(s - h)
        + log_gamma(0.5 + 1j * n - h - s)
        + log_gamma(0.5 - 1j * n - h - s)
        - log_gamma(1.0 - h - s)
        - s * math.log(x_shift)
    )
    return np.exp(lg)


def mellin_barnes_legendre(
    mu: MuParameter | complex,
    n,
    x_shift: float,
    mb: MellinBarnesConfig | None = None,
    full_output: bool = False,
):
    """P^mu_{i n - 1/2}(2 x_shift + 1) from the Mellin-Barnes contour integral.

    The contour runs upward along Re s = gamma; the integrand is divided by
    Gamma-pair * (1 + x_shift)^(mu/2) before integration so the tolerance
    applies to the kernel value itself.  If the integrand at Im s = +-T is
    not below ``abs_tol`` the result is flagged unconverged.
    """
    m = as_mu(mu).mu
    mb = mb or MellinBarnesConfig()
    tau = tau_of(n)
    x_shift = float(x_shift)
    if not x_shift > 0:
        raise DomainError("x_shift must be > 0")
    g = mb.abscissa(m)
    T = mb.height(tau)
    norm = 1.0 / (2.0 * math.pi * gamma_pair(tau, m) * _pow_real(1.0 + x_shift, m / 2.0))

    def f(y):
        return mellin_barnes_integrand(m, tau, x_shift, g + 1j * y) * norm

    bps = sorted({-tau, 0.0, tau} - {-T, T})
    res = integrate_adaptive(f, -T, T, mb.cfg, breakpoints=bps)
    edge = float(np.max(np.abs(f(np.array([-T, T])))))
    res = IntegralResult(
        complex(res.value),
        res.error_estimate + edge * 2.0,
        res.evaluations,
        res.converged and edge <= mb.cfg.abs_tol,
    )
    return finish(res, full_output, "Mellin-Barnes integral")


# ---------------------------------------------------------------------------
# route selection


def select_route(tau: float, x: float, cfg: QuadratureConfig) -> str:
    """Mehler below x = 3; above it the Legendre route, unless its
    cancellation (a relative loss of about eps * exp(pi tau) from dividing by
    the gamma pair) would exceed the requested relative tolerance.

    The observed loss is up to ~60 eps exp(pi tau), hence the factor 1000.
    """
    if x < MEHLER_CROSSOVER:
        return "mehler"
    if _EPS * math.exp(math.pi * tau) * _LEGENDRE_LOSS > cfg.rel_tol:
        return "mehler"
    return "legendre"


def conical_values(
    mu: complex, taus, u: float, cfg: QuadratureConfig, route: str = "auto"
) -> IntegralResult:
    """Vector of complete kernels at x = 1 + u using one route for all taus."""
    taus = _taus(taus)
    if route == "auto":
        route = select_route(float(np.max(taus)), 1.0 + u, cfg)
    if route == "mehler":
        return mehler_values(mu, taus, u, cfg)
    if route == "legendre":
        return legendre_values(mu, taus, u, cfg)
    if route == "mellin_barnes":
        mb = MellinBarnesConfig(cfg=cfg)
        results = [mellin_barnes_legendre(mu, t, u / 2.0, mb, full_output=True) for t in taus]
        return IntegralResult(
            np.array([r.value for r in results], dtype=complex),
            max(r.error_estimate for r in results),
            sum(r.evaluations for r in results),
            all(r.converged for r in results),
        )
    raise ValueError(f"unknown kernel route {route!r}")


def conical_legendre(
    mu: MuParameter | complex,
    degree,
    x: float,
    route: Route = "auto",
    cfg: QuadratureConfig | None = None,
    full_output: bool = False,
):
    """P^mu_{i tau - 1/2}(x) by the chosen route (``auto`` picks by x and tau)."""
    m = as_mu(mu)
    res = conical_values(m.mu, [tau_of(degree)], _shift(x), cfg or QuadratureConfig(), route)
    return finish(_collapse(res, True), full_output, "conical kernel")
