"""Shared fixtures: mpmath reference values and a deterministic hypothesis profile."""

import mpmath
import pytest
from hypothesis import HealthCheck, settings

# derandomized so that two test runs explore the same examples
settings.register_profile(
    "repro",
    derandomize=True,
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repro")

mpmath.mp.dps = 30


def mp_conical(mu, tau, x):
    """P^mu_{i tau - 1/2}(x) for x > 1 from mpmath (type-3 Legendre function)."""
    return complex(mpmath.legenp(1j * tau - 0.5, mu, x, type=3))


def mp_incomplete_legendre(mu, n, x, omega=mpmath.pi):
    """Semi-infinite Legendre integral truncated at omega, evaluated in mpmath."""
    mu = mpmath.mpc(mu)
    x = mpmath.mpf(x)
    pref = (
        mpmath.sqrt(2 / mpmath.pi)
        * mpmath.gamma(mpmath.mpf(1) / 2 - mu)
        * (x * x - 1) ** (-mu / 2)
        / (mpmath.gamma(mpmath.mpf(1) / 2 + 1j * n - mu) * mpmath.gamma(mpmath.mpf(1) / 2 - 1j * n - mu))
    )
    f = lambda t: mpmath.cos(n * t) / (x + mpmath.cosh(t)) ** (mpmath.mpf(1) / 2 - mu)
    return complex(pref * mpmath.quad(f, [0, omega]))


@pytest.fixture
def mp():
    return mpmath


# --- acceptance summary: one line per criterion ------------------------------

_ACCEPTANCE: dict[str, tuple[str, str, float]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        detail = dict(report.user_properties).get("detail", "")
        _ACCEPTANCE[name] = (report.outcome, detail, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        outcome, detail, duration = _ACCEPTANCE[name]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        label = name.removeprefix("test_")
        terminalreporter.write_line(f"{verdict}  {label}  ({duration:.1f} s)  {detail}")
