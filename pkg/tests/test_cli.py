import csv
import io
import json
import math
import subprocess
import sys

import pytest

from orlicz_lab.cli import main, parse_profile, InputError
from orlicz_lab.counterexample import CSV_FIELDS

HEADER = ",".join(CSV_FIELDS) + ",tol"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def values(text):
    return dict(part.split("=", 1) for line in text.splitlines() for part in line.split()
                if "=" in part)


class TestNorm:
    def test_exp_constant(self, capsys):
        code, out, _ = run(capsys, "norm", "--space", "E", "--s", "2", "--n", "2",
                           "--radius", "1", "--profile", "const:1")
        assert code == 0
        v = values(out)
        assert float(v["value"]) == pytest.approx(1.90226, abs=5e-6)
        assert v["tol"] == "1e-08"
        assert "bracket(value)" in v and "J(value)" in v

    def test_lebesgue(self, capsys):
        code, out, _ = run(capsys, "norm", "--space", "Lp", "--p", "2", "--profile", "const:1")
        assert code == 0 and float(values(out)["value"]) == pytest.approx(1.77245, abs=5e-6)

    def test_certified_infinite(self, capsys):
        code, out, _ = run(capsys, "norm", "--space", "E", "--s", "2", "--profile", "log:1")
        assert code == 2 and out.splitlines()[0] == "INF"

    @pytest.mark.parametrize("space", ["N", "M", "ALT"])
    def test_other_spaces(self, capsys, space):
        code, out, _ = run(capsys, "norm", "--space", space, "--s", "1", "--profile", "tlog:2")
        assert code == 0 and float(values(out)["value"]) > 0

    def test_env_tolerance(self, capsys, monkeypatch):
        monkeypatch.setenv("ORLICZ_TOL", "1e-6")
        code, out, _ = run(capsys, "norm", "--space", "N", "--s", "1", "--profile", "const:1")
        assert code == 0 and values(out)["tol"] == "1e-06"

    @pytest.mark.parametrize("argv", [
        ["--profile", "{bad json"],
        ["--profile", '{"pieces": []}'],
        ["--profile", '{"pieces": [{"kind": "wave", "from": 0, "to": 1}]}'],
        ["--profile", '{"pieces": [{"kind": "constant", "value": 1, "from": 0.1, "to": 1}]}'],
        ["--profile", "const:x"],
        ["--profile", "/no/such/file.json"],
        ["--profile", "const:1", "--radius", "-1"],
    ])
    def test_input_errors(self, capsys, argv):
        code, _, err = run(capsys, "norm", "--space", "N", "--s", "1", *argv)
        assert code == 1 and err.startswith("error")

    def test_missing_exponent(self, capsys):
        code, _, _ = run(capsys, "norm", "--space", "E", "--profile", "const:1")
        assert code == 1

    def test_bad_env(self, capsys, monkeypatch):
        monkeypatch.setenv("ORLICZ_TOL", "abc")
        assert run(capsys, "verify")[0] == 1


class TestProfiles:
    def test_json_schema(self, tmp_path):
        spec = {"pieces": [
            {"kind": "power", "a": 0.5 + math.log(10), "b": 50.0, "p": 2, "from": 0, "to": 0.1},
            {"kind": "log", "alpha": 1.0, "from": 0.1, "to": 1.0}]}
        path = tmp_path / "p.json"
        path.write_text(json.dumps(spec))
        prof = parse_profile(str(path), 1.0)
        assert prof(0.05) == pytest.approx(0.5 + math.log(10) - 50 * 0.0025)
        assert prof(0.5) == pytest.approx(-math.log(0.5))

    def test_discontinuous_needs_declaration(self):
        pieces = [{"kind": "constant", "value": 2, "from": 0, "to": 0.5},
                  {"kind": "bump", "from": 0.5, "to": 1.0}]
        with pytest.raises(InputError):
            parse_profile(json.dumps({"pieces": pieces}), 1.0)
        prof = parse_profile(json.dumps({"pieces": pieces, "continuity": "none"}), 1.0)
        assert prof(0.25) == 2.0 and prof(0.75) == pytest.approx(1.0)

    def test_log_at_origin_sets_coefficient(self):
        prof = parse_profile('{"pieces": [{"kind": "log", "alpha": 2, "from": 0, "to": 1}]}', 1.0)
        assert prof.log_coefficient == 2.0

    def test_radius_too_small(self):
        with pytest.raises(InputError):
            parse_profile('{"pieces": [{"kind": "constant", "value": 1, "from": 0, "to": 0.5}]}',
                          1.0)


class TestSweep:
    def test_single_row(self, capsys):
        code, out, _ = run(capsys, "sweep", "--eps-list", "0.1", "--r-list", "1")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and out.splitlines()[0] == HEADER
        assert len(rows) == 1
        assert float(rows[0]["ratio_B"]) == pytest.approx(1.34777, abs=1e-4)
        assert rows[0]["tol"] == "1e-08"

    def test_two_eps(self, capsys):
        code, out, _ = run(capsys, "sweep", "--eps-list", "0.1,0.01", "--r-list", "1,0.75")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert [(r["eps"], r["r"]) for r in rows] == [
            ("0.1", "1"), ("0.1", "0.75"), ("0.01", "1"), ("0.01", "0.75")]
        for r in ("1", "0.75"):
            rb = [float(row["ratio_B"]) for row in rows if row["r"] == r]
            assert rb[1] > rb[0]

    def test_empty(self, capsys):
        code, out, _ = run(capsys, "sweep", "--eps-list", "")
        assert code == 0 and out == HEADER + "\n"

    def test_deterministic_file(self, capsys, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["sweep", "--eps-list", "0.1,0.001", "--r-list", "1,0.75"]
        assert run(capsys, *args, "--out", str(a))[0] == 0
        assert run(capsys, *args, "--out", str(b), "--workers", "3")[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_unwritable(self, capsys, tmp_path):
        code, _, err = run(capsys, "sweep", "--eps-list", "0.1", "--out",
                           str(tmp_path / "missing" / "x.csv"))
        assert code == 1 and "cannot write" in err

    @pytest.mark.parametrize("eps", ["0.2", "abc", "-0.1"])
    def test_bad_eps(self, capsys, eps):
        assert run(capsys, "sweep", "--eps-list", eps)[0] == 1


class TestVerify:
    @pytest.mark.parametrize("suite", ["counterexample", "mt", "harnack", "oscillation"])
    def test_suites_pass(self, capsys, suite):
        code, out, _ = run(capsys, "verify", "--suite", suite, "--n", "2")
        last = out.splitlines()[-1].split()
        assert code == 0
        assert last[:3] == ["SUITE", suite, "PASS"]
        k, m = last[3].split("/")
        assert k == m and int(k) > 0

    def test_oscillation_geometric_row(self, capsys):
        _, out, _ = run(capsys, "verify", "--suite", "oscillation")
        assert any(line.startswith("PASS") and "2^-m" in line for line in out.splitlines())

    def test_unknown(self, capsys):
        assert run(capsys, "verify", "--suite", "nope")[0] == 1


class TestFrontEnds:
    def test_trace(self, capsys):
        code, out, _ = run(capsys, "trace", "--eps", "0.01")
        v = values(out)
        assert code == 0 and float(v["terminal_gap"]) <= 0.02

    def test_trace_infinite(self, capsys):
        code, out, _ = run(capsys, "trace", "--profile", "log:1")
        assert code == 2 and "INF" in out.splitlines()

    def test_chain(self, capsys):
        code, out, _ = run(capsys, "chain", "--eps", "0.1")
        assert code == 0 and float(values(out)["harnack_quotient"]) == pytest.approx(1.07491,
                                                                                     abs=1e-5)

    def test_chain_constant_profile(self, capsys):
        code, out, _ = run(capsys, "chain", "--profile", "const:2")
        assert code == 0 and float(values(out)["harnack_quotient"]) == pytest.approx(1.0)

    def test_osc(self, capsys):
        code, out, _ = run(capsys, "osc", "--tau", "0", "--kbar-C", "0", "--m-max", "30")
        lines = out.splitlines()
        assert code == 0 and lines[31] == "30,9.31323e-10"

    def test_usage_error(self, capsys):
        assert run(capsys, "norm")[0] == 1
        assert run(capsys, "bogus")[0] == 1

    def test_module_entry(self):
        res = subprocess.run([sys.executable, "-m", "orlicz_lab.cli", "norm", "--space", "Lp",
                              "--p", "1", "--profile", "const:1"],
                             capture_output=True, text=True, check=False)
        assert res.returncode == 0 and res.stdout.startswith("value=3.14159")
