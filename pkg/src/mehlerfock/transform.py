"""Discrete Mehler-Fock transforms on (1, inf).

Forward synthesis ``F(x) = sum_m a_m P^mu_{im-1/2}(x)``, coefficient recovery
through the incomplete kernel ``P^mu_{in-1/2}(x, pi)``, the dual pair with the
roles of the two kernels swapped, and the two function expansions built on
them.

Every integral over ``(1, inf)`` is taken in ``u = x - 1`` through the
logarithmic map of :func:`integrate_log_mapped`.  The integrands are vectors
over the index ``n`` so that all coefficients share one set of quadrature
nodes, and evaluators receive ``u`` rather than ``x`` so that nodes within
rounding distance of ``x = 1`` stay exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal, Protocol, Sequence, Union

import numpy as np
from scipy.interpolate import CubicSpline

from .quadrature import (
    IntegralResult,
    QuadratureConfig,
    finish,
    integrate_adaptive,
    integrate_log_mapped,
)
from .specfun.gamma import complex_gamma, gamma_pair_array
from .specfun.legendre import (
    DomainError,
    _log_cosh_plus,
    _pow_real,
    conical_values,
    incomplete_ibp_values,
)
from .specfun.params import MuParameter, as_mu

__all__ = [
    "CoefficientSequence",
    "SampledFunction",
    "FunctionSpec",
    "TransformConfig",
    "TransformResult",
    "ForwardSeries",
    "DualSeries",
    "SpecFunction",
    "complete_coefficients",
    "incomplete_projection",
    "forward_series",
    "inverse_coefficients",
    "invert",
    "dual_inverse_coefficients",
    "dual_invert",
    "evaluate_f_from_spec",
    "coefficients_from_psi",
    "complete_projection",
    "expand_function_incomplete",
    "expand_function_complete",
    "inversion_factor",
]

KernelRoute = Literal["auto", "mehler", "legendre", "mellin_barnes"]


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class CoefficientSequence:
    """Finite-support coefficients ``a_1 .. a_N`` (index starts at 1)."""

    values: tuple
    l1_norm: float | None = None

    def __post_init__(self):
        vals = tuple(complex(v) for v in self.values)
        if not all(math.isfinite(v.real) and math.isfinite(v.imag) for v in vals):
            raise ValueError("coefficients must be finite")
        norm = math.fsum(abs(v) for v in vals)
        if self.l1_norm is not None and not math.isclose(
            self.l1_norm, norm, rel_tol=1e-12, abs_tol=1e-300
        ):
            raise ValueError(f"l1_norm {self.l1_norm} does not match sum |a_n| = {norm}")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "l1_norm", norm)

    @classmethod
    def of(cls, values: Sequence[complex]) -> "CoefficientSequence":
        return cls(tuple(values))

    @classmethod
    def unit(cls, m: int, length: int | None = None) -> "CoefficientSequence":
        """The sequence e_m with a single 1 at index m."""
        if m < 1:
            raise ValueError("index m must be >= 1")
        length = length or m
        return cls(tuple(1.0 if k == m else 0.0 for k in range(1, length + 1)))

    def __len__(self) -> int:
        return len(self.values)

    def array(self) -> np.ndarray:
        return np.array(self.values, dtype=complex)

    def indices(self) -> np.ndarray:
        return np.arange(1, len(self.values) + 1, dtype=float)

    def tail_norm(self, M: int) -> float:
        """sum_{m > M} |a_m|."""
        return math.fsum(abs(v) for v in self.values[max(M, 0):])

    def truncated(self, M: int) -> "CoefficientSequence":
        return CoefficientSequence(self.values[:M])

    def scaled(self, alpha: complex) -> "CoefficientSequence":
        return CoefficientSequence(tuple(alpha * v for v in self.values))

    @property
    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)


@dataclass(frozen=True)
class SampledFunction:
    """Samples of F on a grid in (1, inf) with a power-law tail beyond it.

    Between grid points F is a cubic spline in ``log(x - 1)``.  Beyond the
    last point it continues as ``F(x_N) (x / x_N)**(-tail_exponent)``; below
    the first point it is held at ``F(x_1)``.

    Error estimates of transforms of sampled data cover the quadrature of
    this interpolant only, not the interpolation error, which inversion
    amplifies by about ``exp(pi n)``.
    """

    grid: np.ndarray
    values: np.ndarray
    tail_exponent: float
    _spline: CubicSpline = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if grid.ndim != 1 or grid.size < 4:
            raise ValueError("grid needs at least 4 points")
        if values.shape != grid.shape:
            raise ValueError("values and grid must have the same length")
        if not grid[0] > 1:
            raise DomainError("grid points must satisfy x > 1")
        if not np.all(np.diff(grid) > 0):
            raise ValueError("grid must be strictly increasing")
        if not self.tail_exponent > 0:
            raise ValueError("tail_exponent must be positive")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "_spline", CubicSpline(np.log(grid - 1.0), values))

    def at_shift(self, u: float) -> complex:
        x = 1.0 + u
        if x >= self.grid[-1]:
            return complex(self.values[-1] * (x / self.grid[-1]) ** (-self.tail_exponent))
        if x <= self.grid[0]:
            return complex(self.values[0])
        return complex(self._spline(math.log(u)))

    def __call__(self, x: float) -> complex:
        if not x > 1:
            raise DomainError("x must be > 1")
        return self.at_shift(x - 1.0)


@dataclass(frozen=True)
class FunctionSpec:
    """psi(u) = constant + sum_k b_k sin(k u) + sum_k c_k cos(k u), with f built from it.

    f(t) = (t^2 - 1)^(-mu/2) int_{-pi}^{pi} psi(u) sinh(u) (t + cosh u)^(mu - 3/2) du.
    Only the sine part survives the odd factor sinh(u).
    """

    sine_coeffs: tuple
    mu: MuParameter = field(default_factory=lambda: MuParameter(0.0))
    cosine_coeffs: tuple = ()
    constant: complex = 0.0
    truncation_residual: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "sine_coeffs", tuple(complex(b) for b in self.sine_coeffs))
        object.__setattr__(self, "cosine_coeffs", tuple(complex(c) for c in self.cosine_coeffs))
        object.__setattr__(self, "constant", complex(self.constant))
        object.__setattr__(self, "mu", as_mu(self.mu))

    @property
    def degree(self) -> int:
        """Highest harmonic carrying a nonzero sine coefficient (0 if none)."""
        nz = [k for k, b in enumerate(self.sine_coeffs, start=1) if b != 0]
        return nz[-1] if nz else 0

    def sine(self, n: int) -> complex:
        return self.sine_coeffs[n - 1] if 1 <= n <= len(self.sine_coeffs) else 0j

    def psi(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        out = np.full(u.shape, self.constant, dtype=complex)
        for k, b in enumerate(self.sine_coeffs, start=1):
            out = out + b * np.sin(k * u)
        for k, c in enumerate(self.cosine_coeffs, start=1):
            out = out + c * np.cos(k * u)
        return out

    @classmethod
    def from_callable(
        cls, psi: Callable, mu: MuParameter | complex = 0.0, n_terms: int = 64
    ) -> "FunctionSpec":
        """Fourier coefficients of a 2pi-periodic ``psi`` by the FFT.

        ``truncation_residual`` is the largest misfit of the truncated series
        at the midpoints between the sample nodes.
        """
        if n_terms < 1:
            raise ValueError("n_terms must be >= 1")
        size = 2 * n_terms + 2
        u = 2.0 * np.pi * np.arange(size) / size - np.pi
        samples = np.asarray(psi(u), dtype=complex)
        # shift so that the FFT phase refers to u = 0
        spectrum = np.fft.fft(samples) / size * np.exp(1j * np.pi * np.arange(size))
        k = np.arange(1, n_terms + 1)
        pos, neg = spectrum[k], spectrum[size - k]
        spec = cls(
            tuple(1j * (pos - neg)),
            mu,
            tuple(pos + neg),
            spectrum[0],
        )
        mid = u + np.pi / size
        residual = float(np.max(np.abs(np.asarray(psi(mid)) - spec.psi(mid))))
        return cls(spec.sine_coeffs, spec.mu, spec.cosine_coeffs, spec.constant, residual)


@dataclass(frozen=True)
class TransformConfig:
    """Truncation and tolerances for the transforms.

    ``cfg`` governs the outer integrals over (1, inf) and direct kernel
    evaluations; ``kernel_cfg`` the kernel evaluations nested inside the
    outer integrals, which must be much tighter since recovering ``a_n``
    amplifies kernel errors by about ``exp(pi n)``.
    ``x_max=None`` lets the tail estimate choose the cut-off.
    """

    n_max: int = 20
    x_max: float | None = None
    cfg: QuadratureConfig = field(
        default_factory=lambda: QuadratureConfig(abs_tol=1e-10, rel_tol=1e-9)
    )
    kernel_cfg: QuadratureConfig = field(
        default_factory=lambda: QuadratureConfig(abs_tol=1e-15, rel_tol=1e-12)
    )
    kernel_route: KernelRoute = "auto"

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")
        if self.x_max is not None and not self.x_max > 1:
            raise ValueError("x_max must be > 1")
        if self.kernel_route not in ("auto", "mehler", "legendre", "mellin_barnes"):
            raise ValueError(f"unknown kernel route {self.kernel_route!r}")


@dataclass(frozen=True)
class TransformResult:
    """A transform value with its quadrature error and (where relevant) tail bound."""

    value: complex | np.ndarray
    error_estimate: float | np.ndarray
    converged: bool
    tail_bound: float = 0.0
    evaluations: int = 0


def _finish(res: TransformResult, full_output: bool, what: str):
    proxy = IntegralResult(
        res.value, float(np.max(res.error_estimate)), res.evaluations, res.converged
    )
    if full_output:
        return res
    return finish(proxy, False, what)


# ---------------------------------------------------------------------------
# evaluators


class ShiftEvaluator(Protocol):
    def at_shift(self, u: float) -> complex: ...


Evaluator = Union[ShiftEvaluator, Callable[[float], complex]]


def _shift_function(F: Evaluator) -> Callable[[float], complex]:
    if hasattr(F, "at_shift"):
        return F.at_shift
    if callable(F):
        return lambda u: complex(F(1.0 + u))
    raise TypeError("F must be a SampledFunction, an evaluator with at_shift, or a callable")


class ForwardSeries:
    """Evaluator of F(x) = sum_m a_m P^mu_{im-1/2}(x) (complete kernels)."""

    def __init__(self, a: CoefficientSequence, mu, kernel_cfg: QuadratureConfig, route="auto"):
        self.a = a
        self.mu = as_mu(mu).mu
        self.kernel_cfg = kernel_cfg
        self.route = route
        self._coef = a.array()
        self._ms = a.indices()

    def at_shift_result(self, u: float) -> IntegralResult:
        if self.a.is_zero:
            return IntegralResult(0j, 0.0, 0, True)
        k = conical_values(self.mu, self._ms, u, self.kernel_cfg, self.route)
        value = complex(np.dot(self._coef, k.value))
        error = float(np.dot(np.abs(self._coef), k.errors()))
        return IntegralResult(value, error, k.evaluations, k.converged)

    def at_shift(self, u: float) -> complex:
        return self.at_shift_result(u).value

    def __call__(self, x: float) -> complex:
        if not x > 1:
            raise DomainError("x must be > 1")
        return self.at_shift(x - 1.0)


class DualSeries:
    """Evaluator of G(x) = sum_m a_m gamma_pair(m, mu) P^mu_{im-1/2}(x, pi)."""

    def __init__(self, a: CoefficientSequence, mu, kernel_cfg: QuadratureConfig):
        self.a = a
        self.mu = as_mu(mu).mu
        self.kernel_cfg = kernel_cfg
        self._ms = a.indices()
        self._coef = a.array() * gamma_pair_array(self._ms, self.mu) if len(a) else a.array()

    def at_shift_result(self, u: float) -> IntegralResult:
        if self.a.is_zero:
            return IntegralResult(0j, 0.0, 0, True)
        k = incomplete_ibp_values(self.mu, self._ms, u, self.kernel_cfg)
        value = complex(np.dot(self._coef, k.value))
        error = float(np.dot(np.abs(self._coef), k.errors()))
        return IntegralResult(value, error, k.evaluations, k.converged)

    def at_shift(self, u: float) -> complex:
        return self.at_shift_result(u).value

    def __call__(self, x: float) -> complex:
        if not x > 1:
            raise DomainError("x must be > 1")
        return self.at_shift(x - 1.0)


# ---------------------------------------------------------------------------
# projections over (1, inf)


def inversion_factor(ns, mu: complex) -> np.ndarray:
    """(n / pi) sinh(pi n) gamma_pair(n, mu)."""
    ns = np.asarray(ns, dtype=float)
    return ns / np.pi * np.sinh(np.pi * ns) * gamma_pair_array(ns, mu)


def _project(
    kernel: Callable[[float], IntegralResult],
    F_shift: Callable[[float], IntegralResult],
    k: int,
    mu: complex,
    tc: TransformConfig,
) -> IntegralResult:
    """int_0^inf kernel(u) F(1 + u) du for a vector-valued kernel of length k.

    The errors of the nested evaluations, |dK| |F| + |K| |dF|, are integrated
    alongside as passive components and added to the quadrature error.
    """

    def h(u_nodes):
        out = np.zeros((2 * k, u_nodes.size), dtype=complex)
        for j, u in enumerate(u_nodes):
            fr = F_shift(float(u))
            if fr.value == 0 and fr.error_estimate == 0:
                continue
            kr = kernel(float(u))
            kv = np.asarray(kr.value)
            out[:k, j] = kv * fr.value
            out[k:, j] = kr.errors() * abs(fr.value) + np.abs(kv) * fr.error_estimate
        return out

    upper = None if tc.x_max is None else tc.x_max - 1.0
    # u * integrand ~ u^(1 - Re mu) at 0 and ~ 1/u at infinity (see module doc)
    res = integrate_log_mapped(
        h, tc.cfg, left_rate=1.0 - mu.real, right_rate=1.0, upper=upper, passive=k
    )
    full = np.asarray(res.value, dtype=complex)
    errors = np.asarray(res.errors())[:k] + np.abs(full[k:].real)
    return IntegralResult(full[:k], float(np.max(errors)), res.evaluations, res.converged, errors)


def _shift_result(F: Evaluator) -> Callable[[float], IntegralResult]:
    if hasattr(F, "at_shift_result"):
        return F.at_shift_result
    plain = _shift_function(F)
    return lambda u: IntegralResult(plain(u), 0.0, 1, True)


def _indices(ns) -> np.ndarray:
    ns = np.atleast_1d(np.asarray(ns))
    if ns.size == 0:
        raise ValueError("need at least one index")
    if np.any(ns < 1) or np.any(ns != np.round(ns)):
        raise ValueError("indices n must be positive integers")
    return ns.astype(float)


def _zero_vector(ns) -> TransformResult:
    z = np.zeros(len(ns), dtype=complex)
    return TransformResult(z, np.zeros(len(ns)), True)


def _is_zero(F) -> bool:
    a = getattr(F, "a", None)
    return isinstance(a, CoefficientSequence) and a.is_zero


# ---------------------------------------------------------------------------
# forward transform


def forward_series(
    a: CoefficientSequence | Sequence[complex],
    mu: MuParameter | complex,
    x: float,
    tc: TransformConfig | None = None,
    tail_mass: float = 0.0,
    full_output: bool = False,
):
    """F(x) = sum_{m <= N} a_m P^mu_{im-1/2}(x), N = min(len(a), n_max).

    The reported ``tail_bound`` is ``|P^mu_{-1/2}(x)|`` times the l1 mass of
    the dropped coefficients (those beyond ``n_max`` plus ``tail_mass``,
    which describes terms the caller truncated before passing ``a``).
    """
    tc = tc or TransformConfig()
    m = as_mu(mu)
    if not isinstance(a, CoefficientSequence):
        a = CoefficientSequence.of(a)
    if not x > 1:
        raise DomainError(f"x must be > 1 (got {x})")
    if tail_mass < 0:
        raise ValueError("tail_mass must be nonnegative")
    u = x - 1.0
    kept = a.truncated(tc.n_max)
    dropped = a.tail_norm(tc.n_max) + tail_mass
    series = ForwardSeries(kept, m, tc.cfg, tc.kernel_route)
    res = series.at_shift_result(u)
    tail = 0.0
    converged = res.converged
    if dropped > 0:
        base = conical_values(m.mu, [0.0], u, tc.cfg, tc.kernel_route)
        tail = abs(complex(base.value[0])) * dropped
        converged = converged and base.converged
    out = TransformResult(complex(res.value), res.error_estimate, converged, tail, res.evaluations)
    return _finish(out, full_output, "forward series")


# ---------------------------------------------------------------------------
# inverse transform


def invert(F: Evaluator, mu: MuParameter | complex, ns, tc: TransformConfig | None = None) -> TransformResult:
    """a_n = (n/pi) sinh(pi n) gamma_pair(n, mu) int_1^inf P^mu_{in-1/2}(x, pi) F(x) dx.

    All requested ``n`` are computed on shared nodes; the result holds
    arrays of values and per-coefficient error estimates.
    """
    tc = tc or TransformConfig()
    m = as_mu(mu).mu
    ns = _indices(ns)
    if _is_zero(F):
        return _zero_vector(ns)
    scale = inversion_factor(ns, m)
    cfg = tc.kernel_cfg

    def kernel(u):
        return incomplete_ibp_values(m, ns, u, cfg).scaled(scale)

    res = _project(kernel, _shift_result(F), ns.size, m, tc)
    return TransformResult(res.value, res.errors(), res.converged, 0.0, res.evaluations)


def inverse_coefficients(
    F: Evaluator,
    mu: MuParameter | complex,
    n: int,
    tc: TransformConfig | None = None,
    full_output: bool = False,
):
    """Recover the single coefficient a_n of F (see :func:`invert`)."""
    if not (int(n) == n and n >= 1):
        raise ValueError("n must be a positive integer")
    res = invert(F, mu, [n], tc)
    out = TransformResult(complex(res.value[0]), float(res.error_estimate[0]), res.converged, 0.0, res.evaluations)
    return _finish(out, full_output, "inverse coefficient")


def dual_invert(G: Evaluator, mu: MuParameter | complex, ns, tc: TransformConfig | None = None) -> TransformResult:
    """a_n = (n/pi) sinh(pi n) int_1^inf P^mu_{in-1/2}(x) G(x) dx, |Re mu| < 1/2."""
    tc = tc or TransformConfig()
    m = as_mu(mu, "strict").mu
    ns = _indices(ns)
    if _is_zero(G):
        return _zero_vector(ns)
    scale = ns / np.pi * np.sinh(np.pi * ns)
    cfg, route = tc.kernel_cfg, tc.kernel_route

    def kernel(u):
        return conical_values(m, ns, u, cfg, route).scaled(scale)

    res = _project(kernel, _shift_result(G), ns.size, m, tc)
    return TransformResult(res.value, res.errors(), res.converged, 0.0, res.evaluations)


def dual_inverse_coefficients(
    G: Evaluator,
    mu: MuParameter | complex,
    n: int,
    tc: TransformConfig | None = None,
    full_output: bool = False,
):
    """Single coefficient of the dual pair (see :func:`dual_invert`)."""
    if not (int(n) == n and n >= 1):
        raise ValueError("n must be a positive integer")
    res = dual_invert(G, mu, [n], tc)
    out = TransformResult(complex(res.value[0]), float(res.error_estimate[0]), res.converged, 0.0, res.evaluations)
    return _finish(out, full_output, "dual coefficient")


def complete_projection(F: Evaluator, mu: MuParameter | complex, ns, tc: TransformConfig | None = None) -> TransformResult:
    """int_1^inf P^mu_{in-1/2}(x) F(x) dx for each n (no prefactor)."""
    tc = tc or TransformConfig()
    m = as_mu(mu).mu
    ns = _indices(ns)
    cfg, route = tc.kernel_cfg, tc.kernel_route

    def kernel(u):
        return conical_values(m, ns, u, cfg, route)

    res = _project(kernel, _shift_result(F), ns.size, m, tc)
    return TransformResult(res.value, res.errors(), res.converged, 0.0, res.evaluations)


def incomplete_projection(F: Evaluator, mu: MuParameter | complex, ns, tc: TransformConfig | None = None) -> TransformResult:
    """int_1^inf P^mu_{in-1/2}(x, pi) F(x) dx for each n (no prefactor)."""
    tc = tc or TransformConfig()
    m = as_mu(mu).mu
    ns = _indices(ns)
    cfg = tc.kernel_cfg

    def kernel(u):
        return incomplete_ibp_values(m, ns, u, cfg)

    res = _project(kernel, _shift_result(F), ns.size, m, tc)
    return TransformResult(res.value, res.errors(), res.converged, 0.0, res.evaluations)


# ---------------------------------------------------------------------------
# function class and expansions


class SpecFunction:
    """Evaluator of f for a :class:`FunctionSpec`, usable as ``F`` above."""

    def __init__(self, spec: FunctionSpec, cfg: QuadratureConfig):
        self.spec = spec
        self.cfg = cfg

    def at_shift_result(self, u: float) -> IntegralResult:
        mu = self.spec.mu.mu
        z = 1.0 + u
        c = 1.5 - mu
        pref = _pow_real(u * (u + 2.0), -mu / 2.0)

        def g(s):
            # cosh is even, so (t + cosh s) is evaluated through |s|
            w = np.sinh(s) * np.exp(-c * _log_cosh_plus(np.abs(s), z))
            return self.spec.psi(s) * w * pref

        return integrate_adaptive(g, -math.pi, math.pi, self.cfg, breakpoints=(0.0,))

    def at_shift(self, u: float) -> complex:
        return complex(self.at_shift_result(u).value)

    def __call__(self, t: float) -> complex:
        if not t > 1:
            raise DomainError("t must be > 1")
        return self.at_shift(t - 1.0)


def evaluate_f_from_spec(
    spec: FunctionSpec, t: float, tc: TransformConfig | None = None, full_output: bool = False
):
    """f(t) = (t^2-1)^(-mu/2) int_{-pi}^{pi} psi(u) sinh(u) (t + cosh u)^(mu - 3/2) du."""
    tc = tc or TransformConfig()
    if not t > 1:
        raise DomainError(f"t must be > 1 (got {t})")
    res = SpecFunction(spec, tc.cfg).at_shift_result(t - 1.0)
    out = TransformResult(complex(res.value), res.error_estimate, res.converged, 0.0, res.evaluations)
    return _finish(out, full_output, "function from psi")


def coefficients_from_psi(spec: FunctionSpec, n: int) -> complex:
    """int_1^inf P^mu_{in-1/2}(t) f(t) dt in closed form.

    sqrt(2 pi) / (sinh(pi n) Gamma(3/2 - mu)) int_{-pi}^{pi} psi(u) sin(n u) du,
    which for psi = sum_k b_k sin(k u) is sqrt(2 pi) pi b_n / (sinh(pi n) Gamma(3/2 - mu)).
    """
    if not (int(n) == n and n >= 1):
        raise ValueError("n must be a positive integer")
    b = spec.sine(int(n))
    if b == 0:
        return 0j
    return complex(
        math.sqrt(2.0 * math.pi) * math.pi * b
        / (math.sinh(math.pi * n) * complex_gamma(1.5 - spec.mu.mu))
    )


def expand_function_incomplete(
    spec: FunctionSpec, x: float, tc: TransformConfig | None = None, full_output: bool = False
):
    """f(x) = (1/pi) sum_n n sinh(pi n) gamma_pair(n, mu) P^mu_{in-1/2}(x, pi) c_n.

    ``c_n`` comes from :func:`coefficients_from_psi`; for a trigonometric
    polynomial the sum stops at the highest sine harmonic, which must not
    exceed ``n_max``.
    """
    tc = tc or TransformConfig()
    if not x > 1:
        raise DomainError(f"x must be > 1 (got {x})")
    K = spec.degree
    if K > tc.n_max:
        raise ValueError(
            f"n_max={tc.n_max} truncates below the highest harmonic {K} of psi"
        )
    if K == 0:
        return _finish(TransformResult(0j, 0.0, True), full_output, "expansion")
    mu = spec.mu.mu
    ns = np.arange(1, K + 1, dtype=float)
    c = np.array([coefficients_from_psi(spec, int(n)) for n in ns])
    k = incomplete_ibp_values(mu, ns, x - 1.0, tc.cfg)
    weights = inversion_factor(ns, mu) * c
    value = complex(np.dot(weights, k.value))
    error = float(np.dot(np.abs(weights), k.errors()))
    out = TransformResult(value, error, k.converged, 0.0, k.evaluations)
    return _finish(out, full_output, "expansion")


def expand_function_complete(
    a: CoefficientSequence | Sequence[complex],
    mu: MuParameter | complex,
    x: float,
    tc: TransformConfig | None = None,
    n_terms: int | None = None,
    full_output: bool = False,
):
    """Reconstruct f = forward_series(a) from d_n = int_1^inf P^mu_{in-1/2}(t, pi) f(t) dt.

    f(x) = (1/pi) sum_{n <= n_terms} n sinh(pi n) gamma_pair(n, mu) P^mu_{in-1/2}(x) d_n.
    ``n_terms`` defaults to the support length of ``a``: higher d_n vanish
    exactly, and their quadrature noise, multiplied by about exp(pi n),
    would only add error.  The d_n themselves come from
    :func:`complete_coefficients`.
    """
    tc = tc or TransformConfig()
    m = as_mu(mu, "strict")
    if not isinstance(a, CoefficientSequence):
        a = CoefficientSequence.of(a)
    if not x > 1:
        raise DomainError(f"x must be > 1 (got {x})")
    n_terms = n_terms or max(len(a), 1)
    if n_terms > tc.n_max:
        raise ValueError(f"n_terms={n_terms} exceeds n_max={tc.n_max}")
    if a.is_zero:
        return _finish(TransformResult(0j, 0.0, True), full_output, "expansion")
    d = complete_coefficients(a, m, n_terms, tc)
    ns = np.arange(1, n_terms + 1, dtype=float)
    k = conical_values(m.mu, ns, x - 1.0, tc.cfg, tc.kernel_route)
    weights = inversion_factor(ns, m.mu) * np.asarray(k.value)
    value = complex(np.dot(weights, d.value))
    kernel_rel = k.errors() / np.maximum(np.abs(k.value), 1e-300)
    error = float(
        np.dot(np.abs(weights), d.error_estimate) + np.dot(np.abs(weights * d.value), kernel_rel)
    )
    out = TransformResult(value, error, d.converged and k.converged, 0.0, d.evaluations + k.evaluations)
    return _finish(out, full_output, "expansion")


def complete_coefficients(
    a: CoefficientSequence, mu: MuParameter | complex, n_terms: int, tc: TransformConfig | None = None
) -> TransformResult:
    """d_n = int_1^inf P^mu_{in-1/2}(t, pi) f(t) dt, n = 1..n_terms, for f = forward_series(a)."""
    tc = tc or TransformConfig()
    m = as_mu(mu, "strict")
    f = ForwardSeries(a.truncated(tc.n_max), m, tc.kernel_cfg, tc.kernel_route)
    res = incomplete_projection(f, m, np.arange(1, n_terms + 1), tc)
    return TransformResult(res.value, res.error_estimate, res.converged, 0.0, res.evaluations)
