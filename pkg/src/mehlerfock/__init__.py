"""Generalized discrete Mehler-Fock transforms on (1, inf).

Subpackages and modules:

* :mod:`mehlerfock.quadrature` - adaptive Gauss-Kronrod integration with
  endpoint substitutions and semi-infinite truncation.
* :mod:`mehlerfock.specfun` - complex gamma, conical Legendre kernels
  (three routes), incomplete kernels and imaginary-order Bessel functions.
* :mod:`mehlerfock.transform` - forward and inverse transforms and the two
  function expansions.
* :mod:`mehlerfock.oracle` - identity checks and the verification suite.
* :mod:`mehlerfock.cli` - the ``mfk`` command.
"""

from .quadrature import ConvergenceWarning, IntegralResult, QuadratureConfig
from .specfun import (
    MellinBarnesConfig,
    MuParameter,
    RegimeError,
    bessel_k_imag,
    complex_gamma,
    conical_legendre,
    gamma_pair,
    incomplete_bessel,
    incomplete_legendre,
)
from .transform import (
    CoefficientSequence,
    FunctionSpec,
    SampledFunction,
    TransformConfig,
    TransformResult,
    coefficients_from_psi,
    evaluate_f_from_spec,
    expand_function_complete,
    expand_function_incomplete,
    forward_series,
    inverse_coefficients,
    invert,
)

__version__ = "0.1.0"

__all__ = [
    "CoefficientSequence",
    "ConvergenceWarning",
    "FunctionSpec",
    "IntegralResult",
    "MellinBarnesConfig",
    "MuParameter",
    "QuadratureConfig",
    "RegimeError",
    "SampledFunction",
    "TransformConfig",
    "TransformResult",
    "bessel_k_imag",
    "coefficients_from_psi",
    "complex_gamma",
    "conical_legendre",
    "evaluate_f_from_spec",
    "expand_function_complete",
    "expand_function_incomplete",
    "forward_series",
    "gamma_pair",
    "incomplete_bessel",
    "incomplete_legendre",
    "inverse_coefficients",
    "invert",
]
