"""Contour constant bounding |P^mu_{-1/2}(2t + 1)|."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..quadrature import integrate_adaptive
from .gamma import log_gamma
from .legendre import ConfigurationError, MellinBarnesConfig
from .params import MuParameter, as_mu


@dataclass(frozen=True)
class DecayBound:
    """``|P^mu_{-1/2}(2t+1)| <= C_mu t^(-gamma) (1+t)^(-Re mu / 2)``."""

    C_mu: float
    gamma_exponent: float
    mu: complex
    error_estimate: float = 0.0
    converged: bool = True

    def bound(self, t):
        t = np.asarray(t, dtype=float)
        return self.C_mu * t ** (-self.gamma_exponent) * (1.0 + t) ** (-self.mu.real / 2.0)


def decay_integrand(mu: complex, s) -> np.ndarray:
    """|Gamma(s - mu/2) Gamma((1-mu)/2 - s)^2 / (Gamma(1/2 - mu)^2 Gamma(1 - mu/2 - s))|."""
    s = np.asarray(s, dtype=complex)
    h = mu / 2.0
    lg = (
        log_gamma(s - h)
        + 2.0 * log_gamma((1.0 - mu) / 2.0 - s)
        - 2.0 * log_gamma(np.array([0.5 - mu]))[0]
        - log_gamma(1.0 - h - s)
    )
    return np.exp(lg.real)


def compute_decay_bound(
    mu: MuParameter | complex,
    gamma_exponent: float,
    mb: MellinBarnesConfig | None = None,
) -> DecayBound:
    """C_mu = (1/2pi) int |gamma ratio| |ds| along Re s = gamma_exponent.

    The absolute value is taken of the integrand with |ds| = dy on the
    vertical line.  Integrated over |Im s| <= T (``mb`` height for n = 0,
    default 40); the integrand decays like exp(-pi |y|).
    """
    m = as_mu(mu).mu
    mb = mb or MellinBarnesConfig()
    g = float(gamma_exponent)
    lo, hi = m.real / 2.0, (1.0 - m.real) / 2.0
    if not lo < g < hi:
        raise ConfigurationError(
            f"gamma exponent {g} must satisfy Re mu/2 < gamma < (1 - Re mu)/2 = ({lo}, {hi})"
        )
    T = mb.height(0.0)

    def f(y):
        return decay_integrand(m, g + 1j * y) / (2.0 * math.pi)

    res = integrate_adaptive(f, -T, T, mb.cfg, breakpoints=(0.0,))
    edge = float(np.max(f(np.array([-T, T]))))
    return DecayBound(
        float(res.value),
        g,
        m,
        res.error_estimate + 2.0 * edge,
        res.converged and edge <= mb.cfg.abs_tol,
    )
