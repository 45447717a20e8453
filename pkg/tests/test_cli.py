"""Command-line interface: exit codes, flags, file outputs, determinism."""

import json
import subprocess
import sys
from fractions import Fraction

import pytest

from harmgeo.cli import main, parse_eps


def run(argv):
    return main([str(a) for a in argv])


# -- argument handling ----------------------------------------------------------


def test_eps_parsing_is_exact():
    assert parse_eps("1/3") == Fraction(1, 3)
    assert parse_eps("0.1") == Fraction(1, 10)  # decimal string, not a float
    with pytest.raises(Exception):
        parse_eps("nope")


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as e:
        run(["psection", "--n", "3"])  # missing --eps
    assert e.value.code == 1
    with pytest.raises(SystemExit) as e:
        run(["frobnicate"])
    assert e.value.code == 1
    with pytest.raises(SystemExit) as e:
        run([])
    assert e.value.code == 1


def test_computation_failure_exits_2(tmp_path, capsys):
    # eps = 0 is rejected by the exact derivation
    code = run(["--out-dir", tmp_path, "nve", "--n", "3", "--eps", "0"])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_global_flags_accepted_before_and_after_subcommand(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    assert run(["--out-dir", a, "nve", "--n", "2", "--eps", "1/10"]) == 0
    assert run(["nve", "--n", "2", "--eps", "1/10", "--out-dir", b]) == 0
    fa = (a / "nve_n2_eps1over10.json").read_text()
    fb = (b / "nve_n2_eps1over10.json").read_text()
    assert fa == fb


# -- subcommands ----------------------------------------------------------------


def test_nve_output(tmp_path, capsys):
    assert run(["--out-dir", tmp_path, "nve", "--n", "3", "--eps", "1/4"]) == 0
    blob = json.loads((tmp_path / "nve_n3_eps1over4.json").read_text())
    assert blob["n"] == 3 and len(blob["poles"]) == 5
    assert "beta_inf" in capsys.readouterr().out


def test_kovacic_solvable_order_one(tmp_path, capsys):
    assert run(["--out-dir", tmp_path, "kovacic", "--n", "1", "--eps", "1/3"]) == 0
    out = capsys.readouterr().out
    assert "Solvable" in out
    blob = json.loads((tmp_path / "kovacic_n1_eps1over3.json").read_text())
    assert blob["verdict"] == "Solvable"


def test_trace_writes_csv(tmp_path, capsys):
    code = run(
        ["--out-dir", tmp_path, "trace", "--n", "2", "--eps", "0.1",
         "--length", "5", "--samples", "20"]
    )
    assert code == 0
    # "0.1" normalizes to the exact fraction 1/10 in the file name
    lines = (tmp_path / "trace_sectoral_n2_eps1over10.csv").read_text().splitlines()
    assert lines[0] == "s,theta,phi,theta_dot,phi_dot,h2"
    assert len(lines) == 21


def test_lemma1_reports_critical_eps(tmp_path, capsys):
    assert run(["--out-dir", tmp_path, "lemma1", "--n", "2", "--tol", "1e-3"]) == 0
    out = capsys.readouterr().out
    assert "critical eps" in out


def test_psection_deterministic_output(tmp_path):
    args = ["psection", "--n", "2", "--eps", "1/4", "--traj", "2",
            "--crossings", "8", "--seed", "5", "--rtol", "1e-8",
            "--format", "csv"]
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(["--out-dir", a] + args) == 0
    assert run(["--out-dir", b] + args) == 0
    fa = (a / "psection_n2_eps1over4_seed5.csv").read_bytes()
    fb = (b / "psection_n2_eps1over4_seed5.csv").read_bytes()
    assert fa == fb
    header = fa.decode().splitlines()[0]
    assert header == "traj_id,crossing_index,s,phi,phi_dot"


def test_closed_reports_classification(tmp_path, capsys):
    code = run(
        ["--out-dir", tmp_path, "closed", "--n", "2", "--eps", "0.1",
         "--max-period", "1"]
    )
    assert code == 0
    report = json.loads((tmp_path / "closed_n2_eps1over10.json").read_text())
    assert report and all("classification" in g for g in report)


def test_table1_subset(tmp_path, capsys):
    code = run(
        ["--out-dir", tmp_path, "table1", "--n-min", "2", "--n-max", "3",
         "--format", "json"]
    )
    assert code == 0
    blob = json.loads((tmp_path / "table1.json").read_text())
    assert blob["2"]["1"] == {"0": 4}
    assert blob["3"]["6"] == {"0": 9, "1": 3, "2": 1}


def test_console_script_entry_point(tmp_path):
    """The installed entry point behaves like the module-level main."""
    proc = subprocess.run(
        [sys.executable, "-m", "harmgeo.cli", "--out-dir", str(tmp_path),
         "nve", "--n", "2", "--eps", "1/10"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert (tmp_path / "nve_n2_eps1over10.json").exists()
