"""Adaptive Gauss-Kronrod integration engine.

Every integral in the package goes through one of the entry points here:

* :func:`integrate_adaptive` -- finite interval, globally adaptive G10/K21.
* :func:`integrate_semi_infinite` -- ``(a, inf)`` with a decay hint used to
  place the truncation point and bound the discarded tail.
* :func:`integrate_endpoint_singular` -- ``(b - t)**(-e)`` type endpoint
  singularities removed by a power substitution.
* :func:`integrate_log_mapped` -- ``(a, inf)`` through ``x = a + exp(s)``,
  which turns algebraic behaviour at both ends into exponential decay.

Integrands are vectorised: they receive a 1-D float array of nodes and return
an array of the same length, or an array of shape ``(k, len(nodes))`` for a
vector of ``k`` integrals that share one set of subdivision decisions.  Real
and imaginary parts of complex integrands are refined together.
"""

from __future__ import annotations

import dataclasses
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

__all__ = [
    "QuadratureConfig",
    "IntegralResult",
    "ExponentialDecay",
    "AlgebraicDecay",
    "integrate_adaptive",
    "integrate_semi_infinite",
    "integrate_endpoint_singular",
    "integrate_log_mapped",
    "ConvergenceWarning",
    "finish",
]

Integrand = Callable[[np.ndarray], np.ndarray]


class ConvergenceWarning(RuntimeWarning):
    """An integral did not reach its requested tolerance."""

_EPS = np.finfo(float).eps
_TINY = np.finfo(float).tiny

# Standard G10/K21 pair (QUADPACK qk21).
_XGK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
])
_WGK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss nodes sit at the odd positions of NODES.
GAUSS_WEIGHTS = np.zeros(21)
GAUSS_WEIGHTS[1:10:2] = _WG
GAUSS_WEIGHTS[11:20:2] = _WG[::-1]


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and limits shared by every integration routine.

    ``tail_cutoff_factor`` scales the first truncation point of a
    semi-infinite integral in units of the decay length; ``singular_order_cap``
    is the largest endpoint-singularity exponent accepted.
    """

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_subdivisions: int = 2000
    tail_cutoff_factor: float = 2.0
    singular_order_cap: float = 0.999

    def __post_init__(self):
        if self.abs_tol < 0 or self.rel_tol < 0:
            raise ValueError("tolerances must be nonnegative")
        if self.abs_tol == 0 and self.rel_tol == 0:
            raise ValueError("abs_tol and rel_tol cannot both be zero")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if not self.tail_cutoff_factor > 1:
            raise ValueError("tail_cutoff_factor must be > 1")
        if not 0 <= self.singular_order_cap < 1:
            raise ValueError("singular_order_cap must lie in [0, 1)")

    def tightened(self, factor: float) -> "QuadratureConfig":
        """Copy with both tolerances divided by ``factor``."""
        return dataclasses.replace(
            self, abs_tol=self.abs_tol / factor, rel_tol=self.rel_tol / factor
        )

    def tolerance(self, magnitude: float) -> float:
        return max(self.abs_tol, self.rel_tol * magnitude)


Value = Union[float, complex, np.ndarray]


@dataclass(frozen=True)
class IntegralResult:
    value: Value
    error_estimate: float
    evaluations: int
    converged: bool
    # per-component error estimates of a vector-valued integral
    component_errors: np.ndarray | None = None

    def errors(self) -> np.ndarray:
        """Error estimate for every component (broadcast for scalar results)."""
        if self.component_errors is not None:
            return np.asarray(self.component_errors)
        return np.full(np.shape(self.value), self.error_estimate)

    def scaled(self, factor) -> "IntegralResult":
        """Result multiplied by a constant; the error estimate scales with |factor|."""
        errors = self.errors() * np.abs(factor)
        return IntegralResult(
            _as_value(np.asarray(self.value) * factor),
            float(np.max(errors)) if np.size(errors) else 0.0,
            self.evaluations,
            self.converged,
            errors if np.ndim(errors) else None,
        )

    def __add__(self, other: "IntegralResult") -> "IntegralResult":
        errors = self.errors() + other.errors()
        return IntegralResult(
            _as_value(np.asarray(self.value) + np.asarray(other.value)),
            float(np.max(errors)) if np.size(errors) else 0.0,
            self.evaluations + other.evaluations,
            self.converged and other.converged,
            errors if np.ndim(errors) else None,
        )

    def with_extra_error(self, extra: float, ok: bool = True) -> "IntegralResult":
        """Add a (tail or truncation) error term to every component."""
        errors = self.errors() + extra
        return IntegralResult(
            self.value,
            float(np.max(errors)) if np.size(errors) else extra,
            self.evaluations,
            self.converged and ok,
            errors if np.ndim(errors) else None,
        )


@dataclass(frozen=True)
class ExponentialDecay:
    """``|f(x)|`` decays at least like ``exp(-rate * x)``."""

    rate: float

    def __post_init__(self):
        if not self.rate > 0:
            raise ValueError("exponential decay rate must be positive")


@dataclass(frozen=True)
class AlgebraicDecay:
    """``|f(x)|`` decays like ``x**(-power)``; needs ``power > 1``."""

    power: float

    def __post_init__(self):
        if not self.power > 1:
            raise ValueError(
                f"algebraic decay with power {self.power} <= 1 is not integrable"
            )


def _as_value(v) -> Value:
    v = np.asarray(v)
    if v.ndim:
        return v
    if np.iscomplexobj(v):
        return complex(v)
    return float(v)


def _evaluate(f: Integrand, x: np.ndarray) -> np.ndarray:
    """Call ``f`` on flat nodes and return a ``(k, n)`` array."""
    y = np.asarray(f(x))
    if y.ndim == 0:
        # scalar-only callable
        y = np.array([f(xi) for xi in x])
    if y.shape[-1] != x.size:
        if y.ndim == 2 and y.shape[0] == x.size:
            y = y.T
        else:
            raise ValueError(
                f"integrand returned shape {y.shape} for {x.size} nodes"
            )
    if y.ndim == 1:
        y = y[np.newaxis, :]
    return y


def _gk21(f: Integrand, lo: np.ndarray, hi: np.ndarray):
    """Apply the 21-point rule to every interval ``[lo[i], hi[i]]``.

    Returns ``(values, errors, floors)``, each of shape ``(k, m)``; ``floors``
    is the rounding-error level below which an estimate is meaningless.
    """
    half = 0.5 * (hi - lo)
    center = 0.5 * (hi + lo)
    nodes = center[:, None] + half[:, None] * NODES[None, :]
    y = _evaluate(f, nodes.ravel())
    k = y.shape[0]
    y = y.reshape(k, lo.size, 21)
    if not np.all(np.isfinite(y)):
        raise FloatingPointError("integrand returned a non-finite value")
    kron = (y @ KRONROD_WEIGHTS) * half
    gauss = (y @ GAUSS_WEIGHTS) * half
    resabs = (np.abs(y) @ KRONROD_WEIGHTS) * np.abs(half)
    mean = (kron / np.where(half == 0, 1.0, half))[..., None] / 2.0
    resasc = (np.abs(y - mean) @ KRONROD_WEIGHTS) * np.abs(half)
    err = np.abs(kron - gauss)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = np.where((resasc != 0) & (err != 0), scaled, err)
    floor = np.where(resabs > _TINY / (50.0 * _EPS), 50.0 * _EPS * resabs, 0.0)
    return kron, np.maximum(err, floor), floor


def integrate_adaptive(
    f: Integrand,
    a: float,
    b: float,
    cfg: QuadratureConfig | None = None,
    breakpoints: Sequence[float] = (),
    passive: int = 0,
) -> IntegralResult:
    """Integrate ``f`` over ``[a, b]`` with globally adaptive bisection.

    Each round bisects the intervals carrying the largest error estimates
    (relative to each component's tolerance) until every component meets
    ``max(abs_tol, rel_tol * |value|)``.  Intervals whose estimate sits at the
    rounding floor are never split.  When ``max_subdivisions`` is exhausted,
    or only rounding-limited intervals remain, the result comes back with
    ``converged=False`` and its honest error estimate.

    The last ``passive`` components of a vector integrand are integrated on
    the same subdivision but never drive refinement (useful for carrying
    error densities alongside the values they describe).
    """
    cfg = cfg or QuadratureConfig()
    a = float(a)
    b = float(b)
    if not a < b:
        if a == b:
            return IntegralResult(0.0, 0.0, 0, True)
        raise ValueError(f"integration limits must satisfy a < b, got {a}, {b}")
    edges = np.unique(np.array([a, *[p for p in breakpoints if a < p < b], b], dtype=float))
    lo, hi = edges[:-1], edges[1:]
    vals, errs, floors = _gk21(f, lo, hi)
    evaluations = 21 * lo.size
    converged = False
    while True:
        total = vals.sum(axis=1)
        total_err = errs.sum(axis=1)
        tol = np.maximum(cfg.abs_tol, cfg.rel_tol * np.abs(total))
        unmet = total_err > tol
        if passive:
            unmet[unmet.size - passive:] = False
        if not np.any(unmet):
            converged = True
            break
        # a component whose rounding floor alone reaches its tolerance, and
        # whose remaining truncation error is below that floor, cannot improve
        floor_total = floors.sum(axis=1)
        excess = np.maximum(errs - floors, 0.0).sum(axis=1)
        unmet &= ~((floor_total >= 0.5 * tol) & (excess <= floor_total))
        if not np.any(unmet):
            break
        room = cfg.max_subdivisions - lo.size
        if room <= 0:
            break
        width = hi - lo
        splittable = width > 64.0 * _EPS * np.maximum(np.abs(lo), np.abs(hi))
        reducible = np.where(errs > floors * 1.0001, errs, 0.0)[unmet] / tol[unmet, None]
        score = np.where(splittable, reducible.max(axis=0), 0.0)
        if not np.any(score > 0):
            break
        order = np.argsort(-score, kind="stable")
        order = order[score[order] > 0]
        # bisect the largest contributors until the excess would be removed
        excess = float(np.max((total_err[unmet] - tol[unmet]) / tol[unmet]))
        count = int(np.searchsorted(np.cumsum(score[order]), excess)) + 1
        count = max(1, min(count, order.size, room))
        chosen = np.sort(order[:count])
        keep = np.ones(lo.size, dtype=bool)
        keep[chosen] = False
        mid = 0.5 * (lo[chosen] + hi[chosen])
        new_lo = np.concatenate([lo[chosen], mid])
        new_hi = np.concatenate([mid, hi[chosen]])
        new_vals, new_errs, new_floors = _gk21(f, new_lo, new_hi)
        evaluations += 21 * new_lo.size
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        vals = np.concatenate([vals[:, keep], new_vals], axis=1)
        errs = np.concatenate([errs[:, keep], new_errs], axis=1)
        floors = np.concatenate([floors[:, keep], new_floors], axis=1)
        # left-to-right order keeps the summation deterministic
        idx = np.argsort(lo, kind="stable")
        lo, hi = lo[idx], hi[idx]
        vals, errs, floors = vals[:, idx], errs[:, idx], floors[:, idx]
    if total.size > 1:
        return IntegralResult(
            total, float(total_err.max()), evaluations, converged, total_err
        )
    return IntegralResult(_as_value(total[0]), float(total_err[0]), evaluations, converged)


def _tail_target(cfg: QuadratureConfig, magnitude: float) -> float:
    if cfg.abs_tol > 0:
        return cfg.abs_tol / 10.0
    return cfg.rel_tol * magnitude / 10.0


def _envelope(f: Integrand, lo: float, hi: float) -> float:
    x = np.linspace(lo, hi, 17)
    y = _evaluate(f, x)
    return float(np.max(np.abs(y)))


def integrate_semi_infinite(
    f: Integrand,
    a: float,
    decay_hint: ExponentialDecay | AlgebraicDecay,
    cfg: QuadratureConfig | None = None,
    breakpoints: Sequence[float] = (),
    passive: int = 0,
) -> IntegralResult:
    """Integrate ``f`` over ``(a, inf)``.

    The range is cut at a point ``b`` where the estimated tail is below a
    tenth of the tolerance and the tail bound is added to the error estimate.

    * exponential(rate r): ``b`` starts at ``a + max(30/r, factor/r)`` and
      doubles its distance from ``a`` until ``max|f| / r`` sampled on
      ``[b, b + 4/r]`` is small enough.
    * algebraic(power p): ``b`` grows by decades until
      ``b**(1-p)/(p-1) * sup|f(x) x**p|`` is small enough; ``[a, b]`` is
      integrated in the variable ``log(1 + x - a)``.
    """
    cfg = cfg or QuadratureConfig()
    a = float(a)
    if isinstance(decay_hint, ExponentialDecay):
        r = decay_hint.rate
        b = a + max(30.0 / r, cfg.tail_cutoff_factor / r)
        head = integrate_adaptive(f, a, b, cfg, breakpoints, passive)
        tail = _envelope(f, b, b + 4.0 / r) / r
        for _ in range(60):
            if tail <= _tail_target(cfg, float(np.max(np.abs(head.value)))):
                break
            b_next = a + 2.0 * (b - a)
            head = head + integrate_adaptive(f, b, b_next, cfg, passive=passive)
            b = b_next
            tail = _envelope(f, b, b + 4.0 / r) / r
        ok = tail <= _tail_target(cfg, float(np.max(np.abs(head.value))))
        return head.with_extra_error(tail, ok)
    if isinstance(decay_hint, AlgebraicDecay):
        p = decay_hint.power
        b = max(a + 1.0, 2.0 * abs(a), 1.0)

        def tail_bound(b):
            x = np.geomspace(b, 4.0 * b, 17)
            sup = float(np.max(np.abs(_evaluate(f, x)) * x**p))
            return b ** (1.0 - p) / (p - 1.0) * sup

        def mapped(v):
            x = a + np.expm1(v)
            return _evaluate(f, x) * np.exp(v)

        vb = math.log1p(b - a)
        head = integrate_adaptive(mapped, 0.0, vb, cfg, passive=passive)
        tail = tail_bound(b)
        for _ in range(300):
            if tail <= _tail_target(cfg, float(np.max(np.abs(head.value)))):
                break
            b_next = 10.0 * b
            v_next = math.log1p(b_next - a)
            head = head + integrate_adaptive(mapped, vb, v_next, cfg, passive=passive)
            b, vb = b_next, v_next
            tail = tail_bound(b)
        ok = tail <= _tail_target(cfg, float(np.max(np.abs(head.value))))
        return head.with_extra_error(tail, ok)
    raise TypeError(f"unknown decay hint {decay_hint!r}")


def integrate_endpoint_singular(
    g: Callable,
    a: float,
    b: float,
    exponent: complex,
    at: str = "right",
    cfg: QuadratureConfig | None = None,
    with_distance: bool = False,
) -> IntegralResult:
    """Integrate ``g(t) * d**(-exponent)`` over ``[a, b]``, ``d`` the distance to one end.

    With ``at="right"``, ``d = b - t``; with ``at="left"``, ``d = t - a``.
    Substituting ``d = s**p`` with ``p = 1/(1 - Re exponent)`` cancels the
    power singularity against the Jacobian, leaving ``p * s**(-i p Im exponent)``,
    a bounded factor.  When that ``p`` is not an integer, ``d = s**p`` would
    not be smooth at ``s = 0``; an integer ``p`` is used instead and the
    Jacobian leaves a factor ``s**r`` with ``r >= 3``.  A complex exponent is therefore allowed as long as its
    real part lies in ``[0, singular_order_cap]``.

    If ``with_distance`` is true, ``g`` is called as ``g(t, d)`` so that it
    can use the distance without the cancellation in ``b - t``.
    """
    cfg = cfg or QuadratureConfig()
    e = complex(exponent)
    if e.real >= 1:
        raise ValueError(f"endpoint exponent {e.real} >= 1: integral diverges")
    if e.real < 0:
        raise ValueError("endpoint exponent must have nonnegative real part")
    if e.real > cfg.singular_order_cap:
        raise ValueError(
            f"endpoint exponent {e.real} exceeds singular_order_cap {cfg.singular_order_cap}"
        )
    if at not in ("left", "right"):
        raise ValueError("at must be 'left' or 'right'")
    a = float(a)
    b = float(b)
    if not a < b:
        raise ValueError(f"integration limits must satisfy a < b, got {a}, {b}")
    p0 = 1.0 / (1.0 - e.real)
    if abs(p0 - round(p0)) < 1e-9:
        p = float(round(p0))
        r = 0.0
    else:
        # integer power keeps d = s**p smooth; the Jacobian leaves s**r, r >= 3
        p = float(math.ceil(4.0 * p0))
        r = p * (1.0 - e.real) - 1.0
    beta = p * e.imag
    s_max = (b - a) ** (1.0 / p)

    def h(s):
        d = s**p
        t = b - d if at == "right" else a + d
        y = g(t, d) if with_distance else g(t)
        y = np.asarray(y)
        if y.ndim == 0:
            y = np.array([g(ti, di) if with_distance else g(ti) for ti, di in zip(t, d)])
        if r == 0 and beta == 0:
            return y * p
        with np.errstate(divide="ignore"):
            logs = np.log(s)
        factor = np.where(s > 0, p * np.exp((r - 1j * beta) * logs), p if r == 0 else 0.0)
        if beta == 0:
            factor = factor.real
        return y * factor

    return integrate_adaptive(h, 0.0, s_max, cfg)


def integrate_log_mapped(
    f: Integrand,
    cfg: QuadratureConfig | None = None,
    left_rate: float = 1.0,
    right_rate: float = 1.0,
    center: float = 0.0,
    upper: float | None = None,
    passive: int = 0,
) -> IntegralResult:
    """Integrate over ``u`` in ``(0, inf)`` via ``u = exp(s)``.

    ``f`` receives ``u`` (for example ``x - 1``) so that points extremely
    close to the lower end are represented exactly.  ``left_rate`` and
    ``right_rate`` are the exponential decay rates of ``u * f(u)`` in ``s``
    as ``s -> -inf`` and ``s -> +inf``; each half is handled by
    :func:`integrate_semi_infinite`.  ``upper`` optionally caps ``u``;
    ``passive`` is passed on to :func:`integrate_adaptive`.
    """
    cfg = cfg or QuadratureConfig()

    def g(s):
        u = np.exp(s)
        return _evaluate(f, u) * u

    if upper is not None:
        if not upper > 0:
            raise ValueError("upper limit must be positive")
        top = math.log(upper)
        center = min(center, top - 1.0)

    def halves(c: QuadratureConfig) -> IntegralResult:
        half = dataclasses.replace(c, abs_tol=c.abs_tol / 2)
        left = integrate_semi_infinite(
            lambda s: g(-s), -center, ExponentialDecay(left_rate), half, passive=passive
        )
        if upper is not None:
            right = integrate_adaptive(g, center, top, half, passive=passive)
        else:
            right = integrate_semi_infinite(
                g, center, ExponentialDecay(right_rate), half, passive=passive
            )
        return left + right

    total = halves(cfg)
    # The two halves may cancel, so a relative tolerance met by each half
    # need not hold for the sum: redo with absolute targets from the sum.
    def active(v):
        v = np.atleast_1d(np.asarray(v))
        return v[: v.size - passive]

    values = np.abs(active(total.value))
    tol = np.maximum(cfg.abs_tol, cfg.rel_tol * values)
    if np.any(active(total.errors()) > tol):
        target = float(np.min(tol))
        if target > 0:
            second = halves(dataclasses.replace(cfg, abs_tol=target, rel_tol=0.0))
            total = dataclasses.replace(
                second, evaluations=second.evaluations + total.evaluations
            )
            values = np.abs(active(total.value))
            tol = np.maximum(cfg.abs_tol, cfg.rel_tol * values)
        total = dataclasses.replace(total, converged=bool(np.all(active(total.errors()) <= tol)))
    value = total.value
    if np.ndim(value) and np.shape(value)[0] == 1:
        total = dataclasses.replace(total, value=_as_value(np.asarray(value)[0]))
    return total


def finish(result: IntegralResult, full_output: bool, what: str = "integral"):
    """Return the bare value, warning if it did not converge, or the full result."""
    if full_output:
        return result
    if not result.converged:
        warnings.warn(
            f"{what} did not converge (error estimate {result.error_estimate:.3g})",
            ConvergenceWarning,
            stacklevel=3,
        )
    return result.value
