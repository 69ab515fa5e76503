import json
import math

import numpy as np
import pytest

from mehlerfock import conical_legendre
from mehlerfock.cli import (
    EXIT_NONCONVERGED,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VERIFY_FAILED,
    UsageError,
    main,
    parse_complex,
    parse_grid,
    parse_indices,
    read_coefficients,
)


def read_csv(path):
    lines = path.read_text().split("\n")
    assert lines[-1] == ""  # trailing newline, no \r
    return lines[0], [tuple(float(v) for v in ln.split(",")) for ln in lines[1:-1]]


# --- parsers --------------------------------------------------------------------

def test_parse_complex():
    assert parse_complex("0.25,0") == 0.25
    assert parse_complex("0.2,-0.1") == complex(0.2, -0.1)
    assert parse_complex(-0.3) == -0.3
    assert parse_complex([0.1, 0.2]) == complex(0.1, 0.2)
    with pytest.raises(UsageError):
        parse_complex("1,2,3")
    with pytest.raises(UsageError):
        parse_complex("abc")


def test_parse_indices():
    assert parse_indices("1..5") == [1, 2, 3, 4, 5]
    assert parse_indices("2,4") == [2, 4]
    assert parse_indices(3) == [3]
    with pytest.raises(UsageError):
        parse_indices("5..1")
    with pytest.raises(UsageError):
        parse_indices("x")


def test_parse_grid():
    g = parse_grid("1.5:50:5", shift=1.0)  # x grids: geometric in x - 1
    assert g[0] == 1.5 and g[-1] == 50.0
    np.testing.assert_allclose(np.diff(np.log(g - 1.0)), np.log(49.0 / 0.5) / 4)
    np.testing.assert_allclose(parse_grid("1:100:3"), [1.0, 10.0, 100.0])
    assert list(parse_grid("0:1:3lin")) == [0.0, 0.5, 1.0]
    assert list(parse_grid("0.5,1,2")) == [0.5, 1.0, 2.0]
    with pytest.raises(UsageError):
        parse_grid("0:1:3log", shift=1.0)
    with pytest.raises(UsageError):
        parse_grid("2:1:3")


def test_coefficient_file_errors(tmp_path):
    p = tmp_path / "a.txt"
    p.write_text("# header\n1.0\n0.5,0.25\n\nbad\n")
    with pytest.raises(UsageError, match=r"a.txt:5"):
        read_coefficients(p)
    p.write_text("1.0  # trailing comment\n0,1\n")
    assert read_coefficients(p) == [1.0, 1j]


# --- kernel ----------------------------------------------------------------------

def test_kernel_incomplete_bessel_at_zero(tmp_path):
    out = tmp_path / "k.csv"
    assert main(["kernel", "--kind", "incomplete_bessel", "--n", "1", "--y", "0", "-o", str(out)]) == EXIT_OK
    header, rows = read_csv(out)
    assert header == "y,re,im"
    assert rows == [(0.0, 0.0, 0.0)]


def test_kernel_conical_matches_library_as_printed(tmp_path):
    out = tmp_path / "k.csv"
    assert main(["kernel", "--kind", "conical", "--mu", "0,0", "--n", "1", "--x", "2", "-o", str(out)]) == EXIT_OK
    text = out.read_text()
    assert text == f"x,re,im\n2,{format(conical_legendre(0.0, 1, 2.0).real, '.17g')},0\n"


def test_kernel_routes_agree(tmp_path):
    files = {}
    for route in ("mehler", "legendre"):
        files[route] = tmp_path / f"{route}.csv"
        code = main(["kernel", "--mu", "0.25,0", "--n", "1", "--x", "1.5:50:12", "--route", route,
                     "-o", str(files[route])])
        assert code == EXIT_OK
    _, a = read_csv(files["mehler"])
    _, b = read_csv(files["legendre"])
    for ra, rb in zip(a, b):
        assert ra[0] == rb[0]
        assert abs(complex(ra[1], ra[2]) - complex(rb[1], rb[2])) <= 1e-8 * abs(complex(ra[1], ra[2]))


def test_kernel_regime_error(capsys):
    assert main(["kernel", "--mu=0.6,0", "--n", "1", "--x", "2"]) == EXIT_USAGE
    assert "Re mu must be < 1/2" in capsys.readouterr().err


def test_kernel_usage_errors(capsys):
    assert main(["kernel", "--n", "1..3", "--x", "2"]) == EXIT_USAGE
    assert main(["kernel", "--kind", "bessel", "--n", "1", "--y", "0"]) == EXIT_USAGE
    assert main(["kernel", "--kind", "conical", "--n", "1"]) == EXIT_USAGE
    assert main([]) == EXIT_USAGE
    assert main(["kernel", "--bogus"]) == EXIT_USAGE


def test_forced_route_nonconvergence_exit_code(tmp_path):
    # the Legendre route cannot reach rel 1e-10 for n = 3 (cancellation ~ eps e^{3 pi});
    # the file is still written
    out = tmp_path / "k.csv"
    code = main(["kernel", "--mu", "0.25", "--n", "3", "--x", "1.5", "--route", "legendre", "-o", str(out)])
    assert code == EXIT_NONCONVERGED
    assert out.exists()


def test_floats_round_trip(tmp_path):
    out = tmp_path / "k.csv"
    main(["kernel", "--kind", "bessel", "--n", "2", "--y", "0.1:3:7lin", "-o", str(out)])
    from mehlerfock import bessel_k_imag

    _, rows = read_csv(out)
    for y, re_part, _ in rows:
        assert re_part == bessel_k_imag(2.0, y)  # bit-exact after parsing


# --- forward -----------------------------------------------------------------------

def test_forward_unit_coefficient_equals_kernel(tmp_path):
    (tmp_path / "a.txt").write_text("1\n")
    main(["forward", "--input", str(tmp_path / "a.txt"), "--mu", "0.25", "--x", "1.5:50:9",
          "-o", str(tmp_path / "f.csv")])
    main(["kernel", "--mu", "0.25", "--n", "1", "--x", "1.5:50:9", "-o", str(tmp_path / "k.csv")])
    assert (tmp_path / "f.csv").read_text() == (tmp_path / "k.csv").read_text()


def test_forward_empty_is_zero(tmp_path):
    (tmp_path / "a.txt").write_text("")
    assert main(["forward", "--input", str(tmp_path / "a.txt"), "--x", "2,3", "-o", str(tmp_path / "f.csv")]) == 0
    _, rows = read_csv(tmp_path / "f.csv")
    assert all(r[1] == 0 and r[2] == 0 for r in rows)


def test_forward_tail_bound(tmp_path):
    (tmp_path / "a.txt").write_text("\n".join(repr(2.0**-m) for m in range(1, 9)) + "\n")
    code = main(["forward", "--input", str(tmp_path / "a.txt"), "--x", "2,5", "--tail-mass", repr(2.0**-8),
                 "-o", str(tmp_path / "f.csv")])
    assert code == EXIT_OK
    side = json.loads((tmp_path / "f.json").read_text())
    for p in side["points"]:
        expected = abs(conical_legendre(0.0, 0, p["x"])) * 2.0**-8
        assert p["tail_bound"] == pytest.approx(expected, rel=1e-12)


def test_forward_parse_error_line_number(tmp_path, capsys):
    (tmp_path / "a.txt").write_text("1\n0.5\nnot-a-number\n")
    assert main(["forward", "--input", str(tmp_path / "a.txt"), "--x", "2"]) == EXIT_USAGE
    assert "a.txt:3" in capsys.readouterr().err


# --- invert ------------------------------------------------------------------------

def test_invert_self_test(tmp_path):
    (tmp_path / "a.txt").write_text("1\n0\n0\n")
    out = tmp_path / "c.json"
    assert main(["invert", "--input", str(tmp_path / "a.txt"), "--mu", "0", "-o", str(out)]) == EXIT_OK
    coeffs = json.loads(out.read_text())
    assert [c["n"] for c in coeffs] == [1, 2, 3]
    assert set(coeffs[0]) == {"n", "re", "im", "error_estimate"}
    assert abs(coeffs[0]["re"] - 1.0) <= 1e-5
    assert all(abs(c["re"]) <= 1e-5 for c in coeffs[1:])


def test_invert_zero(tmp_path):
    (tmp_path / "a.txt").write_text("0\n0\n")
    out = tmp_path / "c.json"
    assert main(["invert", "--input", str(tmp_path / "a.txt"), "-o", str(out)]) == EXIT_OK
    assert all(c["re"] == 0 and c["im"] == 0 for c in json.loads(out.read_text()))


def test_invert_function_spec(tmp_path):
    (tmp_path / "psi.json").write_text('{"mu": "0,0", "sine": [0, 1]}')
    out = tmp_path / "c.json"
    assert main(["invert", "--input", str(tmp_path / "psi.json"), "--n", "1..4", "-o", str(out)]) == EXIT_OK
    coeffs = {c["n"]: complex(c["re"], c["im"]) for c in json.loads(out.read_text())}
    assert abs(coeffs[2]) > 1e-2
    assert all(abs(coeffs[n]) < 1e-6 for n in (1, 3, 4))


def test_invert_regime(tmp_path, capsys):
    (tmp_path / "a.txt").write_text("1\n")
    assert main(["invert", "--input", str(tmp_path / "a.txt"), "--mu=0.7"]) == EXIT_USAGE
    assert "Re mu must be < 1/2" in capsys.readouterr().err


# --- expand ------------------------------------------------------------------------

def test_expand_function_spec(tmp_path):
    from mehlerfock import FunctionSpec, evaluate_f_from_spec

    (tmp_path / "psi.json").write_text('{"sine": [1, 0, 0.25]}')
    out = tmp_path / "e.csv"
    assert main(["expand", "--input", str(tmp_path / "psi.json"), "--mu=-0.2", "--x", "1.5,2,5", "-o", str(out)]) == 0
    _, rows = read_csv(out)
    spec = FunctionSpec((1.0, 0.0, 0.25), -0.2)
    for x, re_part, im_part in rows:
        assert abs(complex(re_part, im_part) - evaluate_f_from_spec(spec, x)) <= 1e-6


def test_expand_coefficients_strict_regime(tmp_path, capsys):
    (tmp_path / "a.txt").write_text("1\n")
    assert main(["expand", "--input", str(tmp_path / "a.txt"), "--mu=-0.6", "--x", "2"]) == EXIT_USAGE
    assert "|Re mu| must be < 1/2" in capsys.readouterr().err


# --- verify and manifests --------------------------------------------------------------

def test_verify_factor(tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify", "--selection", "factor_2_12", "-o", str(out)]) == EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["summary"]["passed"] == doc["summary"]["total"] == 10


def test_verify_broken_tolerance(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = main(["verify", "--selection", "factor_2_12,kernel_consistency", "--threshold", "1e-30", "-o", str(out)])
    assert code == EXIT_VERIFY_FAILED
    assert "FAIL" in capsys.readouterr().err
    assert json.loads(out.read_text())["summary"]["passed"] < 46


def test_verify_unknown_identity():
    assert main(["verify", "--selection", "nope"]) == EXIT_USAGE


def test_manifest_and_flag_override(tmp_path):
    man = tmp_path / "job.json"
    man.write_text(json.dumps({
        "command": "kernel",
        "parameters": {"kind": "conical", "mu": "0.25,0", "n": 2, "x": "1.5:5:3"},
        "io": {"output": str(tmp_path / "from_file.csv")},
    }))
    assert main(["--manifest", str(man)]) == EXIT_OK
    _, rows = read_csv(tmp_path / "from_file.csv")
    assert len(rows) == 3
    out = tmp_path / "override.csv"
    assert main(["kernel", "--manifest", str(man), "--n", "1", "-o", str(out)]) == EXIT_OK
    _, rows = read_csv(out)
    assert rows[0][1] == conical_legendre(0.25, 1, 1.5).real


def test_manifest_validation(tmp_path):
    man = tmp_path / "job.json"
    man.write_text('{"command": "kernel", "parameters": {"colour": 1}}')
    assert main(["--manifest", str(man)]) == EXIT_USAGE
    man.write_text("{not json")
    assert main(["--manifest", str(man)]) == EXIT_USAGE


def test_same_manifest_same_bytes(tmp_path):
    args = ["kernel", "--mu", "0.1,0.05", "--n", "2", "--x", "1.01:100:15"]
    main(args + ["-o", str(tmp_path / "a.csv")])
    main(args + ["-o", str(tmp_path / "b.csv")])
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_threads_do_not_change_output(tmp_path, monkeypatch):
    args = ["kernel", "--mu", "0", "--n", "1", "--x", "1.1:20:8"]
    main(args + ["-o", str(tmp_path / "one.csv")])
    monkeypatch.setenv("MFK_THREADS", "3")
    main(args + ["-o", str(tmp_path / "three.csv")])
    assert (tmp_path / "one.csv").read_bytes() == (tmp_path / "three.csv").read_bytes()
