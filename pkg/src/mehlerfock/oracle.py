"""Verification suite: closed-form identities checked by independent computation.

Each check produces an :class:`IdentityReport` whose two sides come from
separate code paths (a quadrature on one side, a closed form or a different
special-function route on the other).  ``run_suite`` evaluates a selection
of identities over parameter grids in a fixed order and ``report_json``
serialises the result.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Sequence

import numpy as np

from .quadrature import IntegralResult, QuadratureConfig, integrate_log_mapped
from .specfun.bessel import bessel_k_imag_values
from .specfun.decay import compute_decay_bound
from .specfun.gamma import complex_gamma, gamma_pair_array
from .specfun.legendre import (
    MellinBarnesConfig,
    _log_cosh_plus,
    _pow_real,
    conical_values,
    incomplete_ibp_values,
    legendre_values,
    mehler_values,
    mellin_barnes_legendre,
)
from .specfun.params import MuParameter, as_mu
from .transform import TransformConfig, complete_projection

SUITE_VERSION = "1.0"

IDENTITIES = (
    "kernel_consistency",
    "laplace_2_6",
    "projection_2_18",
    "kl_2_23",
    "orthogonality_2_13",
    "factor_2_12",
    "decay_2_5",
)

# single integrals 1e-8; singular/oscillatory products 1e-7; the doubly
# nested orthogonality matrix 1e-6; the gamma-function factor 1e-12.  The
# decay bound is an inequality: rel_err is the relative excess over the bound.
THRESHOLDS = {
    "kernel_consistency": 1e-8,
    "laplace_2_6": 1e-8,
    "projection_2_18": 1e-7,
    "kl_2_23": 1e-8,
    "orthogonality_2_13": 1e-6,
    "factor_2_12": 1e-12,
    "decay_2_5": 0.0,
}

# below this |sin| the closed form is treated as an exact zero and errors are
# measured against the amplitude multiplying the sine
_SINE_ZERO = 1e-12


@dataclass(frozen=True)
class IdentityReport:
    identity_id: str
    parameters: dict
    lhs: complex
    rhs: complex
    abs_err: float
    rel_err: float
    passed: bool
    threshold: float = 0.0
    diagnostics: str = ""
    # quadrature error estimate relative to the comparison scale
    resolution: float = 0.0

    def with_threshold(self, threshold: float) -> "IdentityReport":
        """Re-judge against another threshold under the same pass rule."""
        finite = math.isfinite(self.lhs.real) and math.isfinite(self.lhs.imag)
        passed = finite and self.rel_err <= threshold and self.resolution <= threshold
        return replace(self, passed=passed, threshold=threshold)

    def to_json(self) -> dict:
        return {
            "id": self.identity_id,
            "params": {k: _json_value(v) for k, v in self.parameters.items()},
            "lhs": _complex_json(self.lhs),
            "rhs": _complex_json(self.rhs),
            "abs_err": float(self.abs_err),
            "rel_err": float(self.rel_err),
            "passed": bool(self.passed),
        }


@dataclass(frozen=True)
class OrthogonalityMatrix:
    """I[n-1, m-1] = int_1^inf P^mu_{in-1/2}(x) P^mu_{im-1/2}(x, pi) dx."""

    mu: complex
    size: int
    entries: np.ndarray
    diagonal_targets: np.ndarray
    errors: np.ndarray = field(default=None)
    converged: bool = True


def _complex_json(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _json_value(v):
    if isinstance(v, complex):
        return _complex_json(v)
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def _report(
    identity_id: str,
    params: dict,
    lhs: complex,
    rhs: complex,
    scale: float | None = None,
    result: IntegralResult | None = None,
    diagnostics: str = "",
) -> IdentityReport:
    """rel_err = |lhs - rhs| / scale, scale defaulting to |rhs|.

    The report passes only if rel_err is within the threshold and the
    quadrature error estimate is small enough to resolve that comparison
    (error_estimate / scale within the threshold as well).  Whether the
    requested tolerance itself was reached is noted in the diagnostics.
    """
    lhs, rhs = complex(lhs), complex(rhs)
    abs_err = abs(lhs - rhs)
    scale = abs(rhs) if scale is None else scale
    if scale > 0:
        rel_err = abs_err / scale
    else:
        rel_err = 0.0 if abs_err == 0 else math.inf
    threshold = THRESHOLDS[identity_id]
    passed = rel_err <= threshold
    resolution = 0.0
    if result is not None:
        resolution = result.error_estimate / scale if scale > 0 else math.inf
        resolved = resolution <= threshold
        notes = []
        if not resolved:
            passed = False
            notes.append(
                f"error estimate {result.error_estimate:.3g} cannot resolve the threshold"
            )
        if not result.converged:
            notes.append("requested quadrature tolerance not reached")
        diagnostics = "; ".join([d for d in [diagnostics, *notes] if d])
    if not (math.isfinite(lhs.real) and math.isfinite(lhs.imag)):
        passed = False
    return IdentityReport(
        identity_id, params, lhs, rhs, abs_err, rel_err, passed, threshold, diagnostics, resolution
    )


def default_verification_config() -> TransformConfig:
    """Outer tolerances dominated by the relative part, two orders below the
    tightest single-integral threshold, so small identity values keep their
    relative accuracy."""
    return TransformConfig(cfg=QuadratureConfig(abs_tol=1e-13, rel_tol=1e-10))


def _default_tc(tc: TransformConfig | None) -> TransformConfig:
    return tc or default_verification_config()


def _mu_param(mu: complex) -> complex | float:
    mu = complex(mu)
    return mu.real if mu.imag == 0 else mu


# ---------------------------------------------------------------------------
# individual identities


class _WeightedEvaluator:
    """F(1 + u) = w(u), with the error of w taken as zero (closed form)."""

    def __init__(self, w: Callable[[float], complex]):
        self.w = w

    def at_shift_result(self, u: float) -> IntegralResult:
        return IntegralResult(complex(self.w(u)), 0.0, 1, True)


def verify_laplace_identity(
    mu: MuParameter | complex, m: int, y: float, tc: TransformConfig | None = None
) -> IdentityReport:
    """int_1^inf (x^2-1)^(-mu/2) e^(-y x) P^mu_{im-1/2}(x) dx = sqrt(2/pi) y^(mu-1/2) K_{im}(y).

    Both sides are divided by e^(-y) so that tolerances stay meaningful for
    large y; the reported sides are the unscaled values.
    """
    tc = _default_tc(tc)
    mm = as_mu(mu)
    if not y > 0:
        raise ValueError("y must be > 0")
    nu = mm.mu

    def w(u):
        return _pow_real(u * (u + 2.0), -nu / 2.0) * math.exp(-y * u)

    res = complete_projection(_WeightedEvaluator(w), mm, [m], tc)
    scale = math.exp(-y)
    lhs = complex(res.value[0]) * scale
    k = bessel_k_imag_values([float(m)], y, tc.cfg)
    rhs = math.sqrt(2.0 / math.pi) * _pow_real(y, nu - 0.5) * complex(np.asarray(k.value).ravel()[0])
    params = {"mu": _mu_param(nu), "m": int(m), "y": float(y)}
    conv = IntegralResult(lhs, float(np.max(res.error_estimate)) * scale, res.evaluations, res.converged and k.converged)
    return _report("laplace_2_6", params, lhs, rhs, result=conv)


def verify_projection_identity(
    mu: MuParameter | complex, n: int, t: float, tc: TransformConfig | None = None
) -> IdentityReport:
    """int_1^inf P^mu_{in-1/2}(x) (x^2-1)^(-mu/2) (x + cosh t)^(mu-3/2) dx
    = sqrt(2 pi) sin(n t) / (Gamma(3/2-mu) sinh t sinh(pi n))."""
    tc = _default_tc(tc)
    mm = as_mu(mu)
    if not t > 0:
        raise ValueError("t must be > 0")
    nu = mm.mu
    c = 1.5 - nu

    def w(u):
        # (1 + u + cosh t) = cosh t + x, evaluated as exp(-c log(...))
        return _pow_real(u * (u + 2.0), -nu / 2.0) * complex(
            np.exp(-c * _log_cosh_plus(np.array([t]), 1.0 + u))[0]
        )

    res = complete_projection(_WeightedEvaluator(w), mm, [n], tc)
    lhs = complex(res.value[0])
    amplitude = math.sqrt(2.0 * math.pi) / (
        complex_gamma(c) * math.sinh(t) * math.sinh(math.pi * n)
    )
    s = math.sin(n * t)
    rhs = amplitude * s
    scale = abs(amplitude) if abs(s) < _SINE_ZERO else None
    params = {"mu": _mu_param(nu), "n": int(n), "t": float(t)}
    conv = IntegralResult(lhs, float(np.max(res.error_estimate)), res.evaluations, res.converged)
    return _report("projection_2_18", params, lhs, rhs, scale, conv)


def verify_kl_identity(n: int, u: float, tc: TransformConfig | None = None) -> IdentityReport:
    """int_0^inf e^(-y cosh u) K_{in}(y) dy = pi sin(n u) / (sinh u sinh(pi n)).

    K_{in}(y) is computed inside the y-quadrature with tolerances 100 times
    tighter than the outer ones.
    """
    tc = _default_tc(tc)
    if not u > 0:
        raise ValueError("u must be > 0 (the closed form is 0/0 at u = 0)")
    inner = tc.cfg.tightened(100.0)
    ch = math.cosh(u)

    def f(ys):
        out = np.empty(ys.size)
        for j, y in enumerate(ys):
            k = bessel_k_imag_values([float(n)], float(y), inner)
            out[j] = math.exp(-y * ch) * float(np.asarray(k.value).ravel()[0])
        return out

    res = integrate_log_mapped(f, tc.cfg, left_rate=1.0, right_rate=1.0)
    lhs = complex(res.value)
    amplitude = math.pi / (math.sinh(u) * math.sinh(math.pi * n))
    s = math.sin(n * u)
    rhs = amplitude * s
    scale = amplitude if abs(s) < _SINE_ZERO else None
    return _report("kl_2_23", {"n": int(n), "u": float(u)}, lhs, rhs, scale, res)


def verify_fock_factor(n: int) -> IdentityReport:
    """(n/pi) sinh(pi n) Gamma(1/2 + i n) Gamma(1/2 - i n) = n tanh(pi n)."""
    g = complex_gamma(0.5 + 1j * n) * complex_gamma(0.5 - 1j * n)
    lhs = n / math.pi * math.sinh(math.pi * n) * g
    rhs = n * math.tanh(math.pi * n)
    return _report("factor_2_12", {"n": int(n)}, lhs, rhs)


def verify_kernel_consistency(
    mu: MuParameter | complex,
    n: int,
    x: float,
    tc: TransformConfig | None = None,
    mb: MellinBarnesConfig | None = None,
) -> IdentityReport:
    """Mehler, Legendre and Mellin-Barnes values of P^mu_{in-1/2}(x).

    ``lhs`` is the Mehler value, ``rhs`` the Mellin-Barnes value; rel_err is
    the largest pairwise relative difference among the three routes.
    """
    tc = _default_tc(tc)
    mm = as_mu(mu)
    cfg = tc.kernel_cfg
    mb = mb or MellinBarnesConfig(cfg=cfg)
    u = float(x) - 1.0
    if not u > 0:
        raise ValueError("x must be > 1")
    r_m = mehler_values(mm.mu, [float(n)], u, cfg)
    r_l = legendre_values(mm.mu, [float(n)], u, cfg)
    r_b = mellin_barnes_legendre(mm.mu, float(n), u / 2.0, mb, full_output=True)
    vals = {
        "mehler": complex(r_m.value[0]),
        "legendre": complex(r_l.value[0]),
        "mellin_barnes": complex(r_b.value),
    }
    names = list(vals)
    worst_rel, worst_abs = 0.0, 0.0
    for i in range(3):
        for j in range(i + 1, 3):
            a, b = vals[names[i]], vals[names[j]]
            d = abs(a - b)
            worst_abs = max(worst_abs, d)
            worst_rel = max(worst_rel, d / max(abs(a), abs(b)))
    threshold = THRESHOLDS["kernel_consistency"]
    # a route fails if its own error estimate is too large to resolve the threshold
    resolution = max(
        r.error_estimate / abs(vals[k]) if vals[k] != 0 else math.inf
        for k, r in zip(names, (r_m, r_l, r_b))
    )
    failed = [
        k
        for k, r in zip(names, (r_m, r_l, r_b))
        if not r.error_estimate <= threshold * abs(vals[k])
    ]
    diag = "; ".join(f"{k}={v.real:.17g}{v.imag:+.17g}j" for k, v in vals.items())
    if failed:
        diag += "; unresolved routes: " + ", ".join(failed)
    params = {"mu": _mu_param(mm.mu), "n": int(n), "x": float(x)}
    return IdentityReport(
        "kernel_consistency",
        params,
        vals["mehler"],
        vals["mellin_barnes"],
        worst_abs,
        worst_rel,
        worst_rel <= threshold and not failed,
        threshold,
        diag,
        resolution,
    )


def orthogonality_matrix(
    mu: MuParameter | complex, N: int, tc: TransformConfig | None = None
) -> OrthogonalityMatrix:
    """All N^2 entries from one vector-valued integral over (1, inf)."""
    tc = _default_tc(tc)
    mm = as_mu(mu, "strict")
    if N < 1:
        raise ValueError("N must be >= 1")
    m = mm.mu
    ns = np.arange(1, N + 1, dtype=float)
    cfg, route = tc.kernel_cfg, tc.kernel_route
    k = N * N

    def h(u_nodes):
        out = np.empty((2 * k, u_nodes.size), dtype=complex)
        for j, u in enumerate(u_nodes):
            c = conical_values(m, ns, float(u), cfg, route)
            d = incomplete_ibp_values(m, ns, float(u), cfg)
            cv, dv = np.asarray(c.value), np.asarray(d.value)
            out[:k, j] = np.outer(cv, dv).ravel()
            out[k:, j] = (np.outer(c.errors(), np.abs(dv)) + np.outer(np.abs(cv), d.errors())).ravel()
        return out

    upper = None if tc.x_max is None else tc.x_max - 1.0
    res = integrate_log_mapped(h, tc.cfg, 1.0 - m.real, 1.0, upper=upper, passive=k)
    full = np.asarray(res.value)
    entries = full[:k].reshape(N, N)
    errors = (np.asarray(res.errors())[:k] + np.abs(full[k:].real)).reshape(N, N)
    targets = np.pi / (ns * np.sinh(np.pi * ns) * gamma_pair_array(ns, m))
    return OrthogonalityMatrix(m, N, entries, targets, errors, res.converged)


def verify_orthogonality(
    mu: MuParameter | complex, N: int, tc: TransformConfig | None = None
) -> tuple[OrthogonalityMatrix, list[IdentityReport]]:
    """Diagonals against pi / (n sinh(pi n) gamma_pair(n, mu)); off-diagonals
    against zero on the scale of the largest diagonal entry."""
    mat = orthogonality_matrix(mu, N, tc)
    scale = float(np.max(np.abs(np.diag(mat.entries))))
    proxy = IntegralResult(0.0, float(np.max(mat.errors)), 0, mat.converged)
    reports = []
    for i in range(N):
        for j in range(N):
            params = {"mu": _mu_param(mat.mu), "n": i + 1, "m": j + 1}
            lhs = mat.entries[i, j]
            if i == j:
                reports.append(
                    _report("orthogonality_2_13", params, lhs, mat.diagonal_targets[i], result=proxy)
                )
            else:
                reports.append(_report("orthogonality_2_13", params, lhs, 0.0, scale, proxy))
    return mat, reports


def verify_decay_bound(
    mu: MuParameter | complex,
    gamma_exponent: float,
    ts: Sequence[float],
    tc: TransformConfig | None = None,
    mb: MellinBarnesConfig | None = None,
) -> list[IdentityReport]:
    """|P^mu_{-1/2}(2t+1)| <= C_mu t^(-gamma) (1+t)^(-Re mu/2) at each t.

    lhs is the kernel magnitude, rhs the bound; rel_err is the relative
    excess max(0, lhs - rhs) / rhs, so the report passes iff the bound holds.
    """
    tc = _default_tc(tc)
    mm = as_mu(mu)
    bound = compute_decay_bound(mm, gamma_exponent, mb)
    reports = []
    for t in ts:
        k = conical_values(mm.mu, [0.0], 2.0 * float(t), tc.cfg, tc.kernel_route)
        lhs = abs(complex(k.value[0]))
        rhs = float(bound.bound(float(t)))
        excess = max(0.0, lhs - rhs)
        params = {"mu": _mu_param(mm.mu), "gamma": float(gamma_exponent), "t": float(t), "C_mu": bound.C_mu}
        passed = excess == 0.0 and bound.converged and k.converged
        reports.append(
            IdentityReport("decay_2_5", params, lhs, rhs, excess, excess / rhs, passed, 0.0)
        )
    return reports


# ---------------------------------------------------------------------------
# suite


DEFAULT_GRIDS: dict[str, dict[str, list]] = {
    "kernel_consistency": {"mu": [0.0, 0.25, -0.3], "n": [1, 2, 3], "x": [1.2, 2.0, 5.0, 50.0]},
    "laplace_2_6": {"mu": [0.0, -0.3], "m": [1, 2, 3], "y": [0.5, 1.0, 2.0]},
    "projection_2_18": {
        "mu": [0.0, -0.4],
        "n": [1, 2, 3],
        "t": [0.5, 1.0, 2.0],
        "extra": [{"mu": 0.0, "n": 2, "t": math.pi / 2}],
    },
    "kl_2_23": {"n": [1, 2], "u": [0.5, 1.0, math.pi / 2]},
    "orthogonality_2_13": {"mu": [0.0, 0.3, -0.4, complex(0.2, 0.1)], "N": [5]},
    "factor_2_12": {"n": list(range(1, 11))},
    "decay_2_5": {"mu": [0.0], "gamma": [0.25], "t": [0.01, 0.1, 1.0, 10.0, 100.0]},
}


def _product(grid: dict, keys: Sequence[str]) -> list[dict]:
    points = [{}]
    for key in keys:
        points = [{**p, key: v} for p in points for v in grid[key]]
    return points + [dict(e) for e in grid.get("extra", [])]


def _jobs(identity_id: str, grid: dict, tc, mb) -> list[Callable[[], list[IdentityReport]]]:
    if identity_id == "kernel_consistency":
        return [
            (lambda p=p: [verify_kernel_consistency(p["mu"], p["n"], p["x"], tc, mb)])
            for p in _product(grid, ("mu", "n", "x"))
        ]
    if identity_id == "laplace_2_6":
        return [
            (lambda p=p: [verify_laplace_identity(p["mu"], p["m"], p["y"], tc)])
            for p in _product(grid, ("mu", "m", "y"))
        ]
    if identity_id == "projection_2_18":
        return [
            (lambda p=p: [verify_projection_identity(p["mu"], p["n"], p["t"], tc)])
            for p in _product(grid, ("mu", "n", "t"))
        ]
    if identity_id == "kl_2_23":
        return [(lambda p=p: [verify_kl_identity(p["n"], p["u"], tc)]) for p in _product(grid, ("n", "u"))]
    if identity_id == "orthogonality_2_13":
        return [
            (lambda p=p: verify_orthogonality(p["mu"], p["N"], tc)[1])
            for p in _product(grid, ("mu", "N"))
        ]
    if identity_id == "factor_2_12":
        return [(lambda p=p: [verify_fock_factor(p["n"])]) for p in _product(grid, ("n",))]
    if identity_id == "decay_2_5":
        return [
            (lambda p=p: verify_decay_bound(p["mu"], p["gamma"], grid["t"], tc, mb))
            for p in _product(grid, ("mu", "gamma"))
        ]
    raise ValueError(f"unknown identity id {identity_id!r}")


def _thread_count(threads: int | None) -> int:
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get("MFK_THREADS")
    if env is None:
        return 1
    try:
        value = int(env)
    except ValueError as exc:
        raise ValueError(f"MFK_THREADS must be a positive integer (got {env!r})") from exc
    if value < 1:
        raise ValueError(f"MFK_THREADS must be a positive integer (got {env!r})")
    return value


def run_suite(
    selection: Iterable[str] | None = None,
    grids: dict[str, dict] | None = None,
    tc: TransformConfig | None = None,
    mb: MellinBarnesConfig | None = None,
    threshold: float | None = None,
    threads: int | None = None,
) -> list[IdentityReport]:
    """Run the selected identities (all by default) over their grids.

    Reports come back in selection order, then grid order, whatever the
    thread count (``threads`` or ``MFK_THREADS``, default 1).  ``threshold``
    overrides every identity's pass threshold.
    """
    selection = list(IDENTITIES if selection is None else selection)
    for ident in selection:
        if ident not in IDENTITIES:
            raise ValueError(f"unknown identity id {ident!r}")
    merged = {k: dict(v) for k, v in DEFAULT_GRIDS.items()}
    for k, v in (grids or {}).items():
        if k not in IDENTITIES:
            raise ValueError(f"unknown identity id {k!r} in grids")
        merged[k] = dict(v)
    jobs = [job for ident in selection for job in _jobs(ident, merged[ident], tc, mb)]
    n_threads = _thread_count(threads)
    if n_threads == 1 or len(jobs) < 2:
        chunks = [job() for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            chunks = list(pool.map(lambda job: job(), jobs))
    reports = [r for chunk in chunks for r in chunk]
    if threshold is not None:
        reports = [r.with_threshold(threshold) for r in reports]
    return reports


def report_document(reports: Sequence[IdentityReport]) -> dict:
    return {
        "suite_version": SUITE_VERSION,
        "identities": [r.to_json() for r in reports],
        "summary": {"total": len(reports), "passed": sum(1 for r in reports if r.passed)},
    }


def report_json(reports: Sequence[IdentityReport]) -> str:
    """Serialise reports; floats use the shortest repr that round-trips."""
    return json.dumps(report_document(reports), indent=2, allow_nan=True) + "\n"
