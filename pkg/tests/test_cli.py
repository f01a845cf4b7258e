import contextlib
import csv
import io
import json
import math
import subprocess
import sys

import pytest

from bosestat import cli
from cli_cases import ARGVS


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        rc = cli.main(argv)
    return rc, out.getvalue(), err.getvalue()


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_inventory_is_complete():
    parser = cli.build_parser()
    names = set(parser._subparsers._group_actions[0].choices)
    assert names == set(ARGVS)
    assert len(names) == 19


@pytest.mark.parametrize("name", sorted(ARGVS))
def test_every_subcommand_runs_and_documents_its_formula(name):
    rc, out, err = run(ARGVS[name])
    assert rc == 0, err
    assert out.endswith("\n") and "\r" not in out
    assert len(rows(out)) >= 1
    rc, helptext, _ = run([name, "--help"])
    assert rc == 0
    desc = cli.build_parser()._subparsers._group_actions[0].choices[name].description
    assert desc and any(ch in desc for ch in "=^(")


def test_partitions_table_example():
    rc, out, _ = run(["partitions", "--M", "5", "--table"])
    assert rc == 0
    assert out == "N,count\n1,1\n2,2\n3,2\n4,1\n5,1\n"


def test_petersburg_example():
    rc, out, _ = run(["petersburg", "--m", "20", "--stake", "1"])
    r = rows(out)[0]
    assert float(r["ratio"]) == pytest.approx((math.e - 2) / (math.e - 1), abs=1e-8)
    assert round(float(r["ratio"]), 3) == 0.418


def test_bose_solve_matches_library():
    rc, out, _ = run(ARGVS["bose-solve"])
    r = rows(out)[0]
    assert float(r["a"]) == pytest.approx(0.466228, abs=1e-6)
    assert float(r["b"]) == pytest.approx(0.381070, abs=1e-6)


@pytest.mark.parametrize("argv", [
    ["partitions", "--M", "5", "--bogus"],
    ["partitions"],
    ["nosuchcommand"],
    ["partitions", "--M", "0"],
    ["liquid", "--T", "1.5"],
    ["isotherm", "--T", "nan"],
    ["compositions", "--M", "3", "--N", "5"],
    ["courant", "--lam", "10", "--V", "-1"],
])
def test_argument_errors_exit_2(argv):
    rc, out, err = run(argv)
    assert rc == 2
    assert out == ""
    assert err


@pytest.mark.parametrize("argv", [
    ["phase-match", "--T", "0.01"],
    ["bose-solve", "--N", "1", "--E", "1.0000000000001", "--energies", "1", "3"],
    ["bose-solve", "--N", "50", "--E", "55", "--energies", "1", "3"],
    ["petersburg", "--m", "800"],
])
def test_numerical_failures_exit_3(argv):
    rc, out, err = run(argv)
    assert rc == 3
    assert out == ""
    assert "numerical failure" in err


def test_emit_header_only_and_non_finite():
    assert cli.emit(["mu", "T", "M", "N", "Z"], [], "csv") == "mu,T,M,N,Z\n"
    one = cli.emit(["mu", "T", "M", "N", "Z"], [{"mu": 0.0, "T": 1.0, "M": 2.0, "N": 3.0, "Z": 0.5}], "csv")
    assert one.splitlines()[1].count(",") == 4
    with pytest.raises(ArithmeticError):
        cli.emit(["x"], [{"x": math.inf}], "csv")
    rc, out, _ = run(["spinodal", "--T-min", "0.001", "--T-max", "0.002", "--points", "2"])
    assert rc == 0 and out.count("\n") == 1


def test_json_round_trip_is_bit_exact():
    _, text_csv, _ = run(ARGVS["isotherm"])
    _, text_json, _ = run(ARGVS["isotherm"] + ["--format", "json"])
    doc = json.loads(text_json)
    assert doc["meta"]["subcommand"] == "isotherm"
    assert doc["meta"]["version"]
    assert doc["meta"]["parameters"]["T"] == 0.9
    for r_csv, r_json in zip(rows(text_csv), doc["data"]):
        for k, v in r_json.items():
            assert float(r_csv[k]) == v
    assert len(doc["data"]) == 12


def test_csv_uses_17_digits():
    _, out, _ = run(["dimension", "--M", "1000", "--n", "10"])
    assert rows(out)[0]["D"] == "%.17g" % (math.log(1000) / math.log(10))


def test_determinism_across_jobs():
    for name in ("isotherm", "nazaikinsky", "burgers-eval", "erdos"):
        outs = {run(ARGVS[name] + ["--jobs", j])[1] for j in ("1", "8", "1")}
        assert len(outs) == 1


def test_config_file(tmp_path):
    cfg = tmp_path / "iso.cfg"
    cfg.write_text("# isotherm settings\npoints = 5\nmu-min = -2\nT = 0.7\n")
    rc, out, _ = run(["isotherm", "--config", str(cfg)])
    r = rows(out)
    assert rc == 0 and len(r) == 5 and float(r[0]["T"]) == 0.7
    rc, out, _ = run(["isotherm", "--config", str(cfg), "--T", "0.8"])
    assert float(rows(out)[0]["T"]) == 0.8
    bad = tmp_path / "bad.cfg"
    bad.write_text("nonsense = 3\n")
    assert run(["isotherm", "--config", str(bad)])[0] == 2
    assert run(["isotherm", "--config", str(tmp_path / "missing.cfg")])[0] == 2
    req = tmp_path / "req.cfg"
    req.write_text("M = 5\nN = 2\n")
    rc, out, _ = run(["compositions", "--config", str(req)])
    assert rc == 0 and rows(out)[0]["compositions"] == "4"


def test_out_file(tmp_path):
    target = tmp_path / "p.csv"
    rc, out, _ = run(["partitions", "--M", "5", "--table", "--out", str(target)])
    assert rc == 0 and out == ""
    assert target.read_bytes() == b"N,count\n1,1\n2,2\n3,2\n4,1\n5,1\n"
    rc, _, err = run(["partitions", "--M", "5", "--out", str(tmp_path)])
    assert rc == 3 and "cannot write" in err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "bosestat.cli", "compositions", "--M", "5", "--N", "2"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert rows(res.stdout)[0]["compositions"] == "4"
