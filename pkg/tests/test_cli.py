import json
import os
import subprocess
import sys

import pytest

from linnikps import cli

from suite import GOLDEN_SOLVE, golden_name

GOLDEN = os.path.join(os.path.dirname(__file__), "golden")


def _run(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _json(capsys, *argv):
    code, out, err = _run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_constants(capsys):
    obj = _json(capsys, "constants", "--P", "1000")
    assert f"{obj['theta0']:.4f}" == "0.0290"
    assert str(obj["theta0"]).startswith("0.0289")
    assert obj["singular_series"] > 0 and obj["tail_bound"] == 1e-3


@pytest.mark.parametrize("case", GOLDEN_SOLVE, ids=lambda t: "N{}_c{}_eps{}".format(*t))
def test_solve_matches_golden(capsys, case):
    N, c, eps = case
    obj = _json(capsys, "solve", "--N", str(N), "--c", str(c), "--eps", str(eps), "--linnik")
    with open(os.path.join(GOLDEN, golden_name(N, c, eps))) as fh:
        gold = json.load(fh)
    assert obj["solutions"] == gold["solutions"]
    assert obj["count"] == gold["count"] and obj["linnik_only"] is True
    assert obj["params"]["eps_overridden"] is True


def test_solve_csv(capsys):
    code, out, _ = _run(capsys, "solve", "--N", "1000", "--c", "1.01", "--eps", "2", "--linnik", "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "p1,p2,p3,x,y,residual"
    assert len(lines) == 1 + 91
    assert out.endswith("\n")


def test_unknown_flag(capsys):
    code, out, err = _run(capsys, "solve", "--N", "1000", "--c", "1.01", "--bogus", "1")
    assert code == 2 and out == ""
    assert "bogus" in err


def test_unknown_command(capsys):
    code, out, _ = _run(capsys, "nonsense")
    assert code == 2 and out == ""


def test_parameter_error_names_precondition(capsys):
    code, out, err = _run(capsys, "solve", "--N", "1000", "--c", "2.0")
    assert code == 2 and out == ""
    assert "c" in err and "parameter error" in err


def test_missing_required(capsys):
    code, _, err = _run(capsys, "binary", "--c", "1.05", "--eps", "1")
    assert code == 2 and "--N0" in err


def test_capacity_exit(capsys):
    code, out, err = _run(capsys, "solve", "--N", "1e8", "--c", "1.01", "--eps", "1")
    assert code == 3 and out == "" and "capacity" in err


def test_bad_format(capsys):
    code, _, _ = _run(capsys, "constants", "--format", "xml")
    assert code == 2


def test_config_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# binary counter\nN0 = 1000\nc = 1.05\neps = 1   # window\n")
    a = _json(capsys, "binary", "--config", str(cfg))
    assert (a["N0"], a["c"], a["eps"]) == (1000.0, 1.05, 1.0)
    b = _json(capsys, "binary", "--config", str(cfg), "--eps", "4")
    assert b["eps"] == 4.0 and b["count"] >= a["count"]


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("N0 = 1000\nc = 1.05\neps = 1\nbanana = 3\n")
    code, _, err = _run(capsys, "binary", "--config", str(cfg))
    assert code == 2 and "banana" in err


def test_config_missing_file(tmp_path, capsys):
    code, _, _ = _run(capsys, "binary", "--config", str(tmp_path / "nope.cfg"))
    assert code == 2


def test_out_file(tmp_path, capsys):
    path = tmp_path / "lp.csv"
    code, out, _ = _run(capsys, "linnik", "--lo", "1", "--hi", "20", "--format", "csv", "--out", str(path))
    assert code == 0 and out == ""
    assert path.read_text(encoding="utf-8").splitlines() == [
        "p,x,y,r_weight", "2,0,1,4", "3,1,1,4", "5,0,2,4", "11,1,3,8", "17,0,4,4", "19,3,3,4"]


@pytest.mark.parametrize("argv", [
    ["sieve", "--limit", "30"],
    ["kernel", "--a", "0.9", "--delta", "0.1", "--k", "3"],
    ["kernel", "--eps", "0.5", "--X", "1e4"],
    ["expsum", "--X", "1000", "--c", "1.05", "--t", "0.3", "--l", "1", "--d", "4"],
    ["moments", "--X", "1000", "--c", "1.05"],
    ["vaughan", "--y", "1000", "--u", "5", "--t", "0.2", "--c", "1.05", "--q", "4", "--chi", "1"],
    ["bilinear", "--M", "32", "--L", "512", "--c", "1.05", "--t", "0.1"],
    ["bilinear", "--M", "256", "--L", "64", "--c", "1.05", "--t", "0.1", "--type", "2"],
    ["bv", "--Xs", "1000,10000", "--c", "1.05", "--log-offset", "0"],
    ["hooley", "--X", "10000"],
    ["gamma", "--N", "600", "--c", "1.05", "--eps", "3"],
    ["binary", "--N0", "50", "--c", "1.01", "--eps", "2"],
])
@pytest.mark.parametrize("fmt", ["json", "csv"])
def test_every_command_runs(capsys, argv, fmt):
    code, out, err = _run(capsys, *argv, "--format", fmt)
    assert code == 0, err
    assert out.endswith("\n")
    if fmt == "json":
        json.loads(out)
    else:
        widths = {len(line.split(",")) for line in out.splitlines()}
        assert len(widths) == 1


def test_gamma_identity_via_cli(capsys):
    obj = _json(capsys, "gamma", "--N", "600", "--c", "1.05", "--eps", "3")
    assert obj["residual"] < 1e-8 * max(1.0, obj["gamma0"])
    assert obj["gamma"] >= obj["gamma0"]


def test_vaughan_bad_character(capsys):
    code, _, _ = _run(capsys, "vaughan", "--y", "100", "--u", "3", "--c", "1.05", "--q", "4", "--chi", "5")
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "linnikps", "constants", "--P", "100"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["P"] == 100.0


def test_threads_identical_output(capsys):
    argv = ["solve", "--N", "10000", "--c", "1.05", "--eps", "1", "--linnik"]
    _, one, _ = _run(capsys, *argv, "--threads", "1")
    _, eight, _ = _run(capsys, *argv, "--threads", "8")
    cli.parallel.set_threads(1)
    assert one == eight
