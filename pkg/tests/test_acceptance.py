"""Acceptance gate: every primary criterion at its stated tolerance.

Each test records a one-line detail; the terminal summary (see conftest.py)
prints one PASS/FAIL line per criterion.  Run alone with
``pytest tests/test_acceptance.py``.
"""

import json
import math
import time

import mpmath
import numpy as np
import pytest

from mehlerfock.cli import main as mfk_main
from mehlerfock.oracle import DEFAULT_GRIDS, run_suite, verify_orthogonality
from mehlerfock.specfun import complex_gamma, gamma_pair
from mehlerfock.transform import (
    CoefficientSequence,
    ForwardSeries,
    FunctionSpec,
    SpecFunction,
    TransformConfig,
    coefficients_from_psi,
    complete_coefficients,
    complete_projection,
    evaluate_f_from_spec,
    expand_function_complete,
    expand_function_incomplete,
    forward_series,
    invert,
)

pytestmark = pytest.mark.slow


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def _worst(reports):
    return max(r.rel_err for r in reports)


def test_criterion_01_kernel_consistency(record_property):
    reports, dt = _timed(lambda: run_suite(["kernel_consistency"]))
    grid = DEFAULT_GRIDS["kernel_consistency"]
    assert len(reports) == len(grid["mu"]) * len(grid["n"]) * len(grid["x"])
    worst = _worst(reports)
    record_property("detail", f"{len(reports)} points, worst pairwise rel {worst:.2e} (tol 1e-8)")
    assert worst <= 1e-8
    assert all(r.passed for r in reports)
    assert dt < 60


def test_criterion_02_laplace(record_property):
    reports, dt = _timed(lambda: run_suite(["laplace_2_6"]))
    worst = _worst(reports)
    record_property("detail", f"{len(reports)} points, worst rel {worst:.2e} (tol 1e-8)")
    assert len(reports) == 18
    assert worst <= 1e-8 and all(r.passed for r in reports)
    assert dt < 60


def test_criterion_03_projection(record_property):
    reports, dt = _timed(lambda: run_suite(["projection_2_18"]))
    regular = [r for r in reports if r.parameters["t"] != math.pi / 2]
    zero = [r for r in reports if r.parameters["t"] == math.pi / 2]
    worst = _worst(regular)
    zero_lhs = max(abs(r.lhs) for r in zero)
    record_property("detail", f"worst rel {worst:.2e} (tol 1e-7); sin-zero |lhs| {zero_lhs:.1e} (tol 1e-9)")
    assert len(regular) == 18 and len(zero) == 1
    assert worst <= 1e-7 and all(r.passed for r in regular)
    assert zero_lhs <= 1e-9
    assert dt < 120


def test_criterion_04_kontorovich_lebedev(record_property):
    reports, dt = _timed(lambda: run_suite(["kl_2_23"]))
    worst = _worst(reports)
    record_property("detail", f"{len(reports)} points, worst rel {worst:.2e} (tol 1e-8)")
    assert len(reports) == 6
    assert worst <= 1e-8 and all(r.passed for r in reports)
    assert dt < 120


def test_criterion_05_orthogonality(record_property):
    t0 = time.perf_counter()
    worst_off, worst_diag = 0.0, 0.0
    coth_err = None
    for mu in (0.0, 0.3, -0.4, complex(0.2, 0.1)):
        mat, _ = verify_orthogonality(mu, 5)
        diag = np.diag(mat.entries)
        scale = np.max(np.abs(diag))
        off = mat.entries - np.diag(diag)
        worst_off = max(worst_off, float(np.max(np.abs(off))) / scale)
        ns = np.arange(1, 6)
        # targets computed here from gamma_pair, independently of the oracle
        targets = np.array([math.pi / (n * math.sinh(math.pi * n) * gamma_pair(n, mu)) for n in ns])
        worst_diag = max(worst_diag, float(np.max(np.abs(diag - targets) / np.abs(targets))))
        if mu == 0.0:
            coth = float(mpmath.coth(mpmath.pi))
            coth_err = abs(diag[0] - coth) / coth
    dt = time.perf_counter() - t0
    record_property(
        "detail",
        f"off-diag {worst_off:.1e}, diag rel {worst_diag:.1e}, coth(pi) rel {coth_err:.1e} (tol 1e-6)",
    )
    assert worst_off <= 1e-6 and worst_diag <= 1e-6 and coth_err <= 1e-6
    assert dt < 600


def test_criterion_06_round_trip(record_property):
    t0 = time.perf_counter()
    tc = TransformConfig()
    a = CoefficientSequence.of([2.0**-m for m in range(1, 9)])
    worst, worst_est = 0.0, 0.0
    for mu in (0.0, 0.25):
        F = ForwardSeries(a, mu, tc.kernel_cfg)
        res = invert(F, mu, np.arange(1, 9), tc)
        worst = max(worst, float(np.max(np.abs(res.value - a.array()))))
        worst_est = max(worst_est, float(np.max(res.error_estimate)))
    dt = time.perf_counter() - t0
    record_property(
        "detail", f"max |a_m - 2^-m| {worst:.1e} (tol 1e-5); largest error estimate {worst_est:.1e}"
    )
    assert worst <= 1e-5
    assert dt < 600


def test_criterion_07_fock_factor(record_property):
    worst = 0.0
    for n in range(1, 11):
        lhs = n / math.pi * math.sinh(math.pi * n) * complex_gamma(0.5 + 1j * n) * complex_gamma(0.5 - 1j * n)
        rhs = n * math.tanh(math.pi * n)
        assert math.isfinite(lhs.real) and math.isfinite(lhs.imag)
        worst = max(worst, abs(lhs - rhs) / rhs)
    reports = run_suite(["factor_2_12"])
    record_property("detail", f"worst rel {worst:.1e} (tol 1e-12), suite {sum(r.passed for r in reports)}/10")
    assert worst <= 1e-12
    assert all(r.passed for r in reports)


def test_criterion_08_function_expansion(record_property):
    t0 = time.perf_counter()
    tc = TransformConfig()
    worst_rec, worst_leak = 0.0, 0.0
    for sine in ((0.0, 1.0), (1.0, 0.0, 0.25)):
        harmonics = {k for k, b in enumerate(sine, start=1) if b != 0}
        for mu in (0.0, -0.2):
            spec = FunctionSpec(sine, mu)
            ns = list(range(1, 7))
            closed = [coefficients_from_psi(spec, n) for n in ns]
            assert {n for n, c in zip(ns, closed) if c != 0} == harmonics
            # the same coefficients from quadrature of f against the kernel
            quad = complete_projection(SpecFunction(spec, tc.kernel_cfg), mu, ns, tc).value
            worst_leak = max(worst_leak, max(abs(quad[n - 1]) for n in ns if n not in harmonics))
            for x in (1.5, 2.0, 5.0):
                direct = evaluate_f_from_spec(spec, x, tc)
                worst_rec = max(worst_rec, abs(expand_function_incomplete(spec, x, tc) - direct))
    dt = time.perf_counter() - t0
    record_property(
        "detail", f"reconstruction err {worst_rec:.1e} (tol 1e-6); off-harmonic quadrature {worst_leak:.1e}"
    )
    assert worst_rec <= 1e-6
    assert worst_leak <= 1e-6
    assert dt < 300


def test_criterion_09_complete_expansion(record_property):
    t0 = time.perf_counter()
    tc = TransformConfig()
    worst_d, worst_rec = 0.0, 0.0
    for values in ((1.0, 0.0, 0.0), (0.5, 0.25, 0.125)):
        a = CoefficientSequence.of(values)
        d = complete_coefficients(a, 0.0, len(a), tc)
        for n in range(1, len(a) + 1):
            target = math.pi * values[n - 1] / (n * math.sinh(math.pi * n) * gamma_pair(n, 0.0))
            worst_d = max(worst_d, abs(d.value[n - 1] - target))
        for x in (1.5, 2.0, 5.0):
            rec = expand_function_complete(a, 0.0, x, tc)
            worst_rec = max(worst_rec, abs(rec - forward_series(a, 0.0, x, tc)))
    dt = time.perf_counter() - t0
    record_property("detail", f"d_n err {worst_d:.1e} (tol 1e-6); reconstruction err {worst_rec:.1e} (tol 1e-5)")
    assert worst_d <= 1e-6 and worst_rec <= 1e-5
    assert dt < 600


def test_criterion_10_decay_bound(record_property):
    reports = run_suite(["decay_2_5"])
    c0 = reports[0].parameters["C_mu"]
    margin = min(r.rhs.real - r.lhs.real for r in reports)
    record_property("detail", f"C_0 = {c0:.12g}; smallest slack bound - |P| = {margin:.2e}")
    assert [r.parameters["t"] for r in reports] == [0.01, 0.1, 1.0, 10.0, 100.0]
    assert all(r.passed and r.lhs.real <= r.rhs.real for r in reports)


def test_criterion_11_determinism(tmp_path, record_property):
    codes = []
    for name in ("first.json", "second.json"):
        codes.append(mfk_main(["verify", "-o", str(tmp_path / name)]))
    first = (tmp_path / "first.json").read_bytes()
    second = (tmp_path / "second.json").read_bytes()
    summary = json.loads(first)["summary"]
    record_property(
        "detail", f"exit codes {codes}, identical={first == second}, {summary['passed']}/{summary['total']} passed"
    )
    assert first == second
    assert codes == [0, 0]
