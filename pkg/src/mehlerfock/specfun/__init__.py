"""Special-function kernels: complex gamma, conical Legendre and imaginary-order Bessel."""

from .bessel import bessel_k_imag, incomplete_bessel, incomplete_bessel_ibp
from .decay import DecayBound, compute_decay_bound
from .gamma import GammaPoleError, complex_gamma, gamma_pair, log_gamma
from .legendre import (
    ConfigurationError,
    DomainError,
    MellinBarnesConfig,
    conical_legendre,
    incomplete_legendre,
    incomplete_legendre_ibp,
    legendre_conical_integral,
    legendre_conical_mehler,
    mellin_barnes_legendre,
)
from .params import KernelDegree, MuParameter, RegimeError, as_mu

__all__ = [
    "DecayBound",
    "ConfigurationError",
    "DomainError",
    "GammaPoleError",
    "KernelDegree",
    "MellinBarnesConfig",
    "MuParameter",
    "RegimeError",
    "as_mu",
    "bessel_k_imag",
    "complex_gamma",
    "compute_decay_bound",
    "conical_legendre",
    "gamma_pair",
    "incomplete_bessel",
    "incomplete_bessel_ibp",
    "incomplete_legendre",
    "incomplete_legendre_ibp",
    "legendre_conical_integral",
    "legendre_conical_mehler",
    "log_gamma",
    "mellin_barnes_legendre",
]
