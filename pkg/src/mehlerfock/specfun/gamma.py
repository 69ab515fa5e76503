"""Complex gamma function (Lanczos rational approximation) and the gamma pair factor."""

from __future__ import annotations

import cmath
import math

import numpy as np

from .params import MuParameter, as_mu

# g = 671/128 with 14 terms; the small coefficients keep the partial-fraction
# sum well conditioned far up the imaginary axis.
_G = 5.2421875
_C0 = 0.999999999999997092
_COEF = np.array([
    57.1562356658629235,
    -59.5979603554754912,
    14.1360979747417471,
    -0.491913816097620199,
    0.339946499848118887e-4,
    0.465236289270485756e-4,
    -0.983744753048795646e-4,
    0.158088703224912494e-3,
    -0.210264441724104883e-3,
    0.217439618115212643e-3,
    -0.164318106536763890e-3,
    0.844182239838527433e-4,
    -0.261908384015814087e-4,
    0.368991826595316234e-5,
])
_SQRT_2PI = 2.5066282746310005
_LOG_PI = math.log(math.pi)


class GammaPoleError(ValueError):
    """Raised at the poles z = 0, -1, -2, ..."""


def _is_pole(z: np.ndarray) -> np.ndarray:
    return (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))


def _lanczos_log(z: np.ndarray) -> np.ndarray:
    # valid for Re z >= 1/2
    series = np.full(z.shape, _C0, dtype=complex)
    for i, c in enumerate(_COEF, start=1):
        series = series + c / (z + i)
    t = z + _G
    return (z + 0.5) * np.log(t) - t + np.log(_SQRT_2PI * series / z)


def _log_sin_pi(z: np.ndarray) -> np.ndarray:
    """A logarithm of sin(pi z) that stays finite for large |Im z|."""
    upper = z.imag >= 0
    w = np.where(upper, z, np.conj(z))
    # sin(pi w) = (i/2) e^{-i pi w} (1 - e^{2 i pi w}), |e^{2 i pi w}| <= 1
    out = -1j * np.pi * w + cmath.log(0.5j) + np.log1p(-np.exp(2j * np.pi * w))
    return np.where(upper, out, np.conj(out))


def log_gamma(z) -> np.ndarray | complex:
    """A branch of log Gamma(z); exp of it is Gamma(z) to ~1e-14 relative.

    Reflection ``Gamma(z) Gamma(1-z) = pi / sin(pi z)`` covers Re z < 1/2.
    The branch is not the principal one; only ``exp`` of sums of these
    values is meaningful.
    """
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(_is_pole(z)):
        raise GammaPoleError("gamma function has a pole at nonpositive integers")
    out = np.empty_like(z)
    right = z.real >= 0.5
    out[right] = _lanczos_log(z[right])
    left = ~right
    if np.any(left):
        zl = z[left]
        out[left] = _LOG_PI - _log_sin_pi(zl) - _lanczos_log(1.0 - zl)
    return complex(out[0]) if scalar else out


def complex_gamma(z) -> complex | np.ndarray:
    """Euler's gamma function for complex arguments."""
    return np.exp(log_gamma(z)) if np.ndim(z) else cmath.exp(log_gamma(z))


def gamma_pair(n, mu: MuParameter | complex) -> complex:
    """``Gamma(1/2 + i n - mu) * Gamma(1/2 - i n - mu)``.

    For real ``mu`` the two factors are complex conjugates and the product
    is returned as ``|Gamma(1/2 + i n - mu)|**2`` with zero imaginary part.
    ``n`` may be any real index (the continuous tau included).
    """
    m = as_mu(mu).mu
    lg1 = log_gamma(0.5 + 1j * n - m)
    if m.imag == 0:
        return complex(math.exp(2.0 * lg1.real), 0.0)
    lg2 = log_gamma(0.5 - 1j * n - m)
    return cmath.exp(lg1 + lg2)


def gamma_pair_array(taus: np.ndarray, mu: complex) -> np.ndarray:
    taus = np.asarray(taus, dtype=float)
    lg1 = log_gamma(0.5 + 1j * taus - mu)
    if complex(mu).imag == 0:
        return np.exp(2.0 * np.real(lg1)).astype(complex)
    return np.exp(lg1 + log_gamma(0.5 - 1j * taus - mu))
