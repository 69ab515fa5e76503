"""Command-line front end: ``mfk kernel|forward|invert|expand|verify``.

A job is described by a :class:`JobManifest`, built from a JSON file
(``--manifest job.json``), from flags, or from both with flags taking
precedence.  Every parameter is parsed and its regime checked before any
numerical work starts.

Exit codes: 0 success, 1 verification failure, 2 usage or regime error,
3 numeric non-convergence (the output is still written).
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import oracle
from .quadrature import IntegralResult, QuadratureConfig
from .specfun.bessel import bessel_k_imag, incomplete_bessel
from .specfun.gamma import GammaPoleError
from .specfun.legendre import ConfigurationError, DomainError, conical_legendre, incomplete_legendre
from .specfun.params import RegimeError, as_mu
from .transform import (
    CoefficientSequence,
    ForwardSeries,
    FunctionSpec,
    SpecFunction,
    TransformConfig,
    complete_projection,
    expand_function_complete,
    expand_function_incomplete,
    forward_series,
    invert,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_NONCONVERGED = 3

COMMANDS = ("kernel", "forward", "invert", "expand", "verify")
KERNEL_KINDS = ("conical", "incomplete_legendre", "incomplete_bessel", "bessel")
ROUTES = ("auto", "mehler", "legendre", "mellin_barnes")


class UsageError(ValueError):
    """Malformed manifest, flag or input file."""


# ---------------------------------------------------------------------------
# parsing helpers


def fmt(v: float) -> str:
    """17 significant digits: enough for every double to round-trip."""
    return format(float(v), ".17g")


def parse_complex(text) -> complex:
    """``"re,im"`` or ``"re"``; JSON manifests may also give a number or [re, im]."""
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        return complex(float(text), 0.0)
    if isinstance(text, (list, tuple)):
        if len(text) != 2:
            raise UsageError(f"complex value needs two fields [re, im], got {text!r}")
        return complex(float(text[0]), float(text[1]))
    parts = str(text).split(",")
    if len(parts) > 2:
        raise UsageError(f"complex value must be 're,im', got {text!r}")
    try:
        re_part = float(parts[0])
        im_part = float(parts[1]) if len(parts) == 2 else 0.0
    except ValueError as exc:
        raise UsageError(f"complex value must be 're,im', got {text!r}") from exc
    return complex(re_part, im_part)


def parse_indices(text) -> list[int]:
    """``"1..5"`` (inclusive), ``"1,2,4"``, a single integer, or a JSON list."""
    if isinstance(text, bool):
        raise UsageError(f"bad index list {text!r}")
    if isinstance(text, int):
        return [text]
    if isinstance(text, (list, tuple)):
        return [_as_int(v) for v in text]
    s = str(text).strip()
    m = re.fullmatch(r"(-?\d+)\s*\.\.\s*(-?\d+)", s)
    if m:
        lo, hi = int(m.group(1)), int(m.group(2))
        if hi < lo:
            raise UsageError(f"empty index range {s!r}")
        return list(range(lo, hi + 1))
    try:
        return [int(p) for p in s.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad index list {s!r} (use '1..5' or '1,2,4')") from exc


def _as_int(v) -> int:
    if isinstance(v, bool) or not float(v).is_integer():
        raise UsageError(f"index must be an integer, got {v!r}")
    return int(v)


_GRID = re.compile(r"([^:]+):([^:]+):(\d+)(log|lin)?")


def parse_grid(text, default_spacing: str = "log", shift: float = 0.0) -> np.ndarray:
    """``min:max:count[log|lin]`` or an explicit comma list.

    Log spacing is geometric in ``v - shift``; the x grids use ``shift=1`` so
    points crowd towards x = 1 where the kernels vary fastest.
    """
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        return np.array([float(text)])
    if isinstance(text, (list, tuple)):
        return np.array([float(v) for v in text])
    s = str(text).strip()
    m = _GRID.fullmatch(s)
    if m is None:
        try:
            return np.array([float(p) for p in s.split(",")])
        except ValueError as exc:
            raise UsageError(
                f"bad grid {s!r}: expected min:max:count[log|lin] or a comma list"
            ) from exc
    try:
        lo, hi = float(m.group(1)), float(m.group(2))
    except ValueError as exc:
        raise UsageError(f"bad grid bounds in {s!r}") from exc
    count = int(m.group(3))
    spacing = m.group(4) or default_spacing
    if count < 1:
        raise UsageError(f"grid {s!r} needs at least one point")
    if hi < lo:
        raise UsageError(f"grid {s!r} has max < min")
    if count == 1:
        return np.array([lo])
    if spacing == "lin":
        return np.linspace(lo, hi, count)
    if not lo - shift > 0:
        raise UsageError(f"log grid {s!r} needs min > {shift:g}")
    pts = shift + np.geomspace(lo - shift, hi - shift, count)
    # geomspace may perturb the end points by an ulp; pin them
    pts[0], pts[-1] = lo, hi
    return pts


def read_coefficients(path) -> list[complex]:
    """One coefficient per line: ``re`` or ``re,im``.  ``#`` starts a comment."""
    out = []
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read coefficient file {path}: {exc.strerror}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = [f.strip() for f in line.split(",")]
        try:
            if len(fields) > 2:
                raise ValueError
            vals = [float(f) for f in fields]
        except ValueError:
            raise UsageError(
                f"{path}:{lineno}: expected 're' or 're,im', got {raw.strip()!r}"
            ) from None
        z = complex(vals[0], vals[1] if len(vals) == 2 else 0.0)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise UsageError(f"{path}:{lineno}: coefficient must be finite")
        out.append(z)
    return out


def read_function_spec(path, mu_override: complex | None = None) -> FunctionSpec:
    """JSON ``{"mu": "re,im", "sine": [...], "cosine": [...], "constant": ...}``.

    ``sine[k-1]`` multiplies sin(k u); entries are numbers or [re, im] pairs.
    """
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read function spec {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from exc
    if not isinstance(doc, dict):
        raise UsageError(f"{path}: function spec must be a JSON object")
    unknown = set(doc) - {"mu", "sine", "cosine", "constant"}
    if unknown:
        raise UsageError(f"{path}: unknown function-spec keys {sorted(unknown)}")
    mu = mu_override if mu_override is not None else parse_complex(doc.get("mu", 0.0))
    return FunctionSpec(
        tuple(parse_complex(v) for v in doc.get("sine", [])),
        as_mu(mu),
        tuple(parse_complex(v) for v in doc.get("cosine", [])),
        parse_complex(doc.get("constant", 0.0)),
    )


def write_csv(path, label: str, points: Sequence[float], values: Sequence[complex]) -> None:
    lines = [f"{label},re,im"]
    for p, v in zip(points, values):
        v = complex(v)
        lines.append(f"{fmt(p)},{fmt(v.real)},{fmt(v.imag)}")
    _write_text(path, "\n".join(lines) + "\n")


def write_json(path, doc) -> None:
    _write_text(path, json.dumps(doc, indent=2) + "\n")


def _write_text(path, text: str) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    p = Path(path)
    if p.parent and not p.parent.exists():
        p.parent.mkdir(parents=True)
    with open(p, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def companion_path(output) -> Path | None:
    """``out.csv`` -> ``out.json``; None when writing to stdout."""
    if output is None or str(output) == "-":
        return None
    return Path(output).with_suffix(".json")


# ---------------------------------------------------------------------------
# manifest


@dataclass
class JobManifest:
    command: str
    parameters: dict = field(default_factory=dict)
    io: dict = field(default_factory=dict)

    @classmethod
    def load(cls, path) -> "JobManifest":
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise UsageError(f"cannot read manifest {path}: {exc.strerror}") from exc
        except json.JSONDecodeError as exc:
            raise UsageError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from exc
        if not isinstance(doc, dict):
            raise UsageError(f"{path}: manifest must be a JSON object")
        unknown = set(doc) - {"command", "parameters", "io"}
        if unknown:
            raise UsageError(f"{path}: unknown manifest keys {sorted(unknown)}")
        return cls(doc.get("command", ""), dict(doc.get("parameters", {})), dict(doc.get("io", {})))

    def overridden(self, command: str | None, parameters: dict, io: dict) -> "JobManifest":
        """Flags win over the file; ``None`` means the flag was not given."""
        params = {**self.parameters, **{k: v for k, v in parameters.items() if v is not None}}
        files = {**self.io, **{k: v for k, v in io.items() if v is not None}}
        return JobManifest(command or self.command, params, files)

    def get(self, key, default=None):
        return self.parameters.get(key, default)

    def validate_keys(self, allowed: Sequence[str]) -> None:
        unknown = set(self.parameters) - set(allowed)
        if unknown:
            raise UsageError(f"parameters not used by '{self.command}': {sorted(unknown)}")


def _mu(man: JobManifest, regime: str = "broad", default=0.0):
    return as_mu(parse_complex(man.get("mu", default)), regime)


def _positive_int(value, name: str) -> int:
    try:
        v = _as_int(value)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{name} must be a positive integer") from exc
    if v < 1:
        raise UsageError(f"{name} must be a positive integer")
    return v


def _float(value, name: str) -> float:
    try:
        return float(value)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{name} must be a number, got {value!r}") from exc


def _transform_config(
    man: JobManifest, route: str = "auto", cfg: QuadratureConfig | None = None
) -> TransformConfig:
    n_max = _positive_int(man.get("n_max", 20), "n_max")
    if cfg is None:
        return TransformConfig(n_max=n_max, kernel_route=route)
    return TransformConfig(n_max=n_max, cfg=cfg, kernel_route=route)


def _route(man: JobManifest) -> str:
    route = man.get("route", "auto")
    if route not in ROUTES:
        raise UsageError(f"route must be one of {', '.join(ROUTES)}")
    return route


def _x_grid(man: JobManifest) -> np.ndarray:
    if man.get("x") is None:
        raise UsageError("an x grid is required (--x min:max:count[log|lin])")
    xs = parse_grid(man.get("x"), "log", shift=1.0)
    if not np.all(xs > 1):
        raise DomainError("x must be > 1 at every grid point")
    return xs


def _output(man: JobManifest):
    return man.io.get("output")


def _parallel_map(fn: Callable, items: Sequence, threads: int | None = None) -> list:
    """Map in input order; the thread count comes from MFK_THREADS."""
    n = oracle._thread_count(threads)
    if n == 1 or len(items) < 2:
        return [fn(v) for v in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _report_nonconvergence(what: str, bad: Sequence) -> int:
    if not bad:
        return EXIT_OK
    shown = ", ".join(fmt(b) for b in list(bad)[:5])
    more = "" if len(bad) <= 5 else f" (and {len(bad) - 5} more)"
    print(f"mfk: {what} did not converge at {shown}{more}", file=sys.stderr)
    return EXIT_NONCONVERGED


# ---------------------------------------------------------------------------
# commands


def cmd_kernel(man: JobManifest) -> int:
    """Tabulate one kernel on a grid: x for the Legendre kinds, y for the Bessel kinds."""
    man.validate_keys(("kind", "mu", "n", "x", "y", "omega", "route"))
    kind = man.get("kind", "conical")
    if kind not in KERNEL_KINDS:
        raise UsageError(f"kind must be one of {', '.join(KERNEL_KINDS)}")
    ns = parse_indices(man.get("n", 1))
    if len(ns) != 1:
        raise UsageError("kernel tabulates a single index n")
    n = ns[0]
    if n < 0:
        raise DomainError("n must be >= 0")
    omega = _float(man.get("omega", math.pi), "omega")
    if omega < 0:
        raise DomainError("omega must be >= 0")
    route = _route(man)
    cfg = QuadratureConfig()

    if kind in ("conical", "incomplete_legendre"):
        mu = _mu(man)
        if man.get("y") is not None:
            raise UsageError(f"kind {kind} takes an x grid, not y")
        pts, label = _x_grid(man), "x"
        if kind == "conical":
            def one(x):
                return conical_legendre(mu, n, float(x), route, cfg, full_output=True)
        else:
            if route != "auto":
                raise UsageError("route applies to kind=conical only")

            def one(x):
                return incomplete_legendre(mu, n, float(x), omega, cfg, full_output=True)
    else:
        if man.get("mu") is not None or man.get("x") is not None:
            raise UsageError(f"kind {kind} takes n and a y grid only")
        if man.get("y") is None:
            raise UsageError("a y grid is required (--y min:max:count[log|lin])")
        pts, label = parse_grid(man.get("y"), "lin"), "y"
        if np.any(pts < 0) or (kind == "bessel" and np.any(pts <= 0)):
            raise DomainError("y must be > 0" if kind == "bessel" else "y must be >= 0")
        if kind == "bessel":
            def one(y):
                return bessel_k_imag(float(n), float(y), cfg, full_output=True)
        else:
            def one(y):
                return incomplete_bessel(n, float(y), omega, cfg, full_output=True)

    results: list[IntegralResult] = _parallel_map(one, list(pts))
    write_csv(_output(man), label, pts, [complex(r.value) for r in results])
    bad = [p for p, r in zip(pts, results) if not r.converged]
    return _report_nonconvergence(f"{kind} kernel", bad)


def cmd_forward(man: JobManifest) -> int:
    """F(x) = sum_m a_m P^mu_{im-1/2}(x) on a grid, with the truncation bound alongside."""
    man.validate_keys(("mu", "x", "n_max", "route", "tail_mass"))
    mu = _mu(man)
    xs = _x_grid(man)
    tail_mass = _float(man.get("tail_mass", 0.0), "tail_mass")
    if not tail_mass >= 0:
        raise UsageError("tail_mass must be >= 0")
    # kernel tolerances, so a single unit coefficient reproduces `mfk kernel`
    tc = _transform_config(man, _route(man), QuadratureConfig())
    path = man.io.get("input")
    if path is None:
        raise UsageError("forward needs a coefficient file (--input)")
    a = CoefficientSequence.of(read_coefficients(path))

    results = _parallel_map(
        lambda x: forward_series(a, mu, float(x), tc, tail_mass, full_output=True), list(xs)
    )
    out = _output(man)
    write_csv(out, "x", xs, [r.value for r in results])
    side = companion_path(out)
    if side is not None:
        write_json(
            side,
            {
                "mu": {"re": mu.mu.real, "im": mu.mu.imag},
                "terms": min(len(a), tc.n_max),
                "l1_norm": a.l1_norm,
                "tail_mass": tail_mass,
                "points": [
                    {
                        "x": float(x),
                        "tail_bound": float(r.tail_bound),
                        "error_estimate": float(r.error_estimate),
                    }
                    for x, r in zip(xs, results)
                ],
            },
        )
    bad = [x for x, r in zip(xs, results) if not r.converged]
    return _report_nonconvergence("forward series", bad)


def _input_kind(man: JobManifest) -> str:
    kind = man.get("input_kind", "auto")
    path = man.io.get("input")
    if path is None:
        raise UsageError(f"{man.command} needs an input file (--input)")
    if kind == "auto":
        kind = "function" if str(path).endswith(".json") else "coefficients"
    if kind not in ("coefficients", "function"):
        raise UsageError("input_kind must be coefficients, function or auto")
    return kind


def cmd_invert(man: JobManifest) -> int:
    """Coefficient recovery.

    A coefficient file runs the round trip: F is synthesised from the
    coefficients and a_n is recovered through the incomplete kernel.  A
    function-spec file gives int_1^inf P^mu_{in-1/2}(t) f(t) dt by quadrature.
    """
    man.validate_keys(("mu", "n", "n_max", "route", "input_kind"))
    kind = _input_kind(man)
    route = _route(man)
    tc = _transform_config(man, route)
    mu_flag = parse_complex(man.get("mu")) if man.get("mu") is not None else None
    if kind == "coefficients":
        mu = as_mu(mu_flag if mu_flag is not None else 0.0)
        a = CoefficientSequence.of(read_coefficients(man.io["input"]))
        ns = parse_indices(man.get("n", f"1..{max(len(a), 1)}"))
        F = ForwardSeries(a.truncated(tc.n_max), mu, tc.kernel_cfg, route)
    else:
        spec = read_function_spec(man.io["input"], mu_flag)
        mu = spec.mu
        ns = parse_indices(man.get("n", f"1..{max(spec.degree, 1)}"))
        F = SpecFunction(spec, tc.kernel_cfg)
    if any(n < 1 for n in ns):
        raise DomainError("coefficient indices must be positive integers")

    if kind == "coefficients":
        res = invert(F, mu, ns, tc)
    else:
        res = complete_projection(F, mu, ns, tc)
    values = np.atleast_1d(res.value)
    errors = np.broadcast_to(res.error_estimate, values.shape)
    write_json(
        _output(man),
        [
            {"n": int(n), "re": complex(v).real, "im": complex(v).imag, "error_estimate": float(e)}
            for n, v, e in zip(ns, values, errors)
        ],
    )
    if not res.converged:
        print(
            "mfk: coefficient quadrature did not reach its tolerance; "
            "see error_estimate per coefficient",
            file=sys.stderr,
        )
        return EXIT_NONCONVERGED
    return EXIT_OK


def cmd_expand(man: JobManifest) -> int:
    """Evaluate a function expansion on an x grid.

    A function-spec file uses the incomplete-kernel expansion of f built from
    psi; a coefficient file uses the complete-kernel expansion of
    F = sum a_m P^mu_{im-1/2} (which needs |Re mu| < 1/2).
    """
    man.validate_keys(("mu", "x", "n_max", "route", "input_kind", "n_terms"))
    kind = _input_kind(man)
    xs = _x_grid(man)
    tc = _transform_config(man, _route(man))
    mu_flag = parse_complex(man.get("mu")) if man.get("mu") is not None else None
    if kind == "function":
        if man.get("n_terms") is not None:
            raise UsageError("n_terms applies to coefficient input only")
        spec = read_function_spec(man.io["input"], mu_flag)
        if spec.degree > tc.n_max:
            raise UsageError(f"n_max={tc.n_max} is below the highest harmonic {spec.degree}")

        def one(x):
            return expand_function_incomplete(spec, float(x), tc, full_output=True)
    else:
        mu = as_mu(mu_flag if mu_flag is not None else 0.0, "strict")
        a = CoefficientSequence.of(read_coefficients(man.io["input"]))
        n_terms = man.get("n_terms")
        n_terms = None if n_terms is None else _positive_int(n_terms, "n_terms")
        if n_terms is not None and n_terms > tc.n_max:
            raise UsageError(f"n_terms={n_terms} exceeds n_max={tc.n_max}")

        def one(x):
            return expand_function_complete(a, mu, float(x), tc, n_terms, full_output=True)

    results = _parallel_map(one, list(xs))
    out = _output(man)
    write_csv(out, "x", xs, [r.value for r in results])
    side = companion_path(out)
    if side is not None:
        write_json(
            side,
            {"points": [{"x": float(x), "error_estimate": float(r.error_estimate)} for x, r in zip(xs, results)]},
        )
    bad = [x for x, r in zip(xs, results) if not r.converged]
    return _report_nonconvergence("expansion", bad)


def cmd_verify(man: JobManifest) -> int:
    """Run the identity suite and write the JSON report; exit 0 iff every check passed."""
    man.validate_keys(("selection", "threshold", "grids"))
    selection = man.get("selection")
    if isinstance(selection, str):
        selection = [s.strip() for s in selection.split(",") if s.strip()]
    if selection is not None:
        bad = [s for s in selection if s not in oracle.IDENTITIES]
        if bad:
            raise UsageError(
                f"unknown identity {bad[0]!r}; choose from {', '.join(oracle.IDENTITIES)}"
            )
    threshold = man.get("threshold")
    if threshold is not None:
        threshold = _float(threshold, "threshold")
        if not threshold >= 0:
            raise UsageError("threshold must be >= 0")
    grids = man.get("grids")
    if grids is not None and not isinstance(grids, dict):
        raise UsageError("grids must be a JSON object keyed by identity id")
    try:
        reports = oracle.run_suite(selection, grids, threshold=threshold)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed grids: {exc}") from exc
    _write_text(_output(man), oracle.report_json(reports))
    failed = [r for r in reports if not r.passed]
    print(f"mfk verify: {len(reports) - len(failed)}/{len(reports)} passed", file=sys.stderr)
    for r in failed:
        print(f"  FAIL {r.identity_id} {json.dumps(r.to_json()['params'])} rel_err={r.rel_err:.3g}", file=sys.stderr)
    return EXIT_OK if not failed else EXIT_VERIFY_FAILED


HANDLERS = {
    "kernel": cmd_kernel,
    "forward": cmd_forward,
    "invert": cmd_invert,
    "expand": cmd_expand,
    "verify": cmd_verify,
}


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--manifest", help="JSON job file; flags override its entries")
    common.add_argument("-o", "--output", help="output path ('-' or omitted: stdout)")

    parser = argparse.ArgumentParser(
        prog="mfk",
        description="Discrete Mehler-Fock transforms, kernels and identity checks.",
        parents=[common],
        epilog="Negative values need '=': --mu=-0.3,0",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("kernel", parents=[common], help="tabulate a kernel on a grid")
    p.add_argument("--kind", choices=KERNEL_KINDS)
    p.add_argument("--mu", help="order as 're,im'")
    p.add_argument("--n", help="index n (tau for the complete kernels)")
    p.add_argument("--x", help="x grid min:max:count[log|lin] (log in x-1 by default)")
    p.add_argument("--y", help="y grid min:max:count[log|lin] or comma list (lin by default)")
    p.add_argument("--omega", help="upper limit of the incomplete kernels (default pi)")
    p.add_argument("--route", choices=ROUTES)

    p = sub.add_parser("forward", parents=[common], help="synthesise F from coefficients")
    p.add_argument("--input", help="coefficient file, one 're' or 're,im' per line")
    p.add_argument("--mu")
    p.add_argument("--x")
    p.add_argument("--n-max", dest="n_max")
    p.add_argument("--route", choices=ROUTES)
    p.add_argument(
        "--tail-mass",
        dest="tail_mass",
        help="l1 mass of coefficients left out of the file, added to the tail bound",
    )

    p = sub.add_parser("invert", parents=[common], help="recover coefficients")
    p.add_argument("--input", help="coefficient file (round trip) or function-spec JSON")
    p.add_argument("--input-kind", dest="input_kind", choices=("auto", "coefficients", "function"))
    p.add_argument("--mu")
    p.add_argument("--n", help="indices, e.g. 1..5")
    p.add_argument("--n-max", dest="n_max")
    p.add_argument("--route", choices=ROUTES)

    p = sub.add_parser("expand", parents=[common], help="evaluate a function expansion")
    p.add_argument("--input", help="function-spec JSON or coefficient file")
    p.add_argument("--input-kind", dest="input_kind", choices=("auto", "coefficients", "function"))
    p.add_argument("--mu")
    p.add_argument("--x")
    p.add_argument("--n-max", dest="n_max")
    p.add_argument("--n-terms", dest="n_terms")
    p.add_argument("--route", choices=ROUTES)

    p = sub.add_parser("verify", parents=[common], help="run the identity suite")
    p.add_argument("--selection", help="comma-separated identity ids (default: all)")
    p.add_argument("--threshold", help="override every pass threshold")
    return parser


def build_manifest(argv: Sequence[str] | None) -> JobManifest:
    args = _build_parser().parse_args(argv)
    base = JobManifest.load(args.manifest) if args.manifest else JobManifest("")
    flags = vars(args).copy()
    command = flags.pop("command")
    flags.pop("manifest")
    io = {"output": flags.pop("output"), "input": flags.pop("input", None)}
    man = base.overridden(command, flags, io)
    if man.command not in COMMANDS:
        raise UsageError(
            f"no command given; choose one of {', '.join(COMMANDS)} (or set 'command' in the manifest)"
        )
    return man


def main(argv: Sequence[str] | None = None) -> int:
    try:
        man = build_manifest(argv)
        return HANDLERS[man.command](man)
    except SystemExit as exc:  # argparse
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    except (UsageError, RegimeError, DomainError, ConfigurationError, GammaPoleError) as exc:
        print(f"mfk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"mfk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
