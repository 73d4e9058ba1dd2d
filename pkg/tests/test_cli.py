import subprocess
import sys

import pytest

from nrblockade import cli
from nrblockade import sweep as sweep_mod
from nrblockade.sweep import SweepResult

TINY = ["--override", "sweep.points = 3", "--override", "base.cutoff_photon = 3",
        "--override", "base.cutoff_phonon = 6", "-q"]


def test_sweep_preset_writes_csv(tmp_path, capsys):
    out = tmp_path / "a.csv"
    assert cli.main(["sweep", "--preset", "fig2a", "--out", str(out), *TINY]) == 0
    rows = SweepResult.read_csv(out)
    assert len(rows) == 3 and all(r["status"] == "ok" for r in rows)
    assert capsys.readouterr().out == ""


def test_progress_log_goes_to_stdout(tmp_path, capsys):
    out = tmp_path / "a.csv"
    assert cli.main(["sweep", "--preset", "fig2a", "--out", str(out), *TINY[:-1]]) == 0
    text = capsys.readouterr().out
    assert "3/3 points" in text and "T21" not in text


def test_config_file_and_errors(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("base.G = 3\nsweep.variable = Delta\nsweep.min = 1\nsweep.max = 1\nsweep.points = 3\n")
    assert cli.main(["sweep", "--config", str(cfg), "-q"]) == 2
    assert cli.main(["sweep", "--config", str(tmp_path / "missing.cfg"), "-q"]) == 2
    assert cli.main(["sweep", "--preset", "nonexistent", "-q"]) == 2
    assert cli.main(["g2tau", "--preset", "fig2a", "-q"]) == 2
    assert cli.main(["sweep", "--preset", "fig2d", "-q"]) == 2
    assert cli.main(["predict", "--preset", "fig2a", "--override", "predict.max_pair = 1", "-q"]) == 2


def test_all_points_failing_exit_code():
    assert cli.main(["sweep", "--preset", "fig2a", "--override", "base.epsilon = 0", *TINY]) == 3


def test_partial_failure_exit_code(monkeypatch):
    real = sweep_mod.transport

    def flaky(p, layout="factorized"):
        if p.Delta == 0:
            raise ArithmeticError("boom")
        return real(p, layout=layout)

    monkeypatch.setattr(sweep_mod, "transport", flaky)
    assert cli.main(["sweep", "--preset", "fig2a", *TINY]) == 4


def test_g2tau_subcommand(tmp_path):
    out = tmp_path / "d.csv"
    args = ["g2tau", "--preset", "fig2d", "--out", str(out), "--override", "sweep.points = 4",
            "--override", "sweep.max = 0.03", *TINY[2:]]
    assert cli.main(args) == 0
    rows = SweepResult.read_csv(out)
    assert [float(r["sweep_value"]) for r in rows] == pytest.approx([0, 0.01, 0.02, 0.03])


def test_predict_subcommand(tmp_path, capsys):
    out = tmp_path / "p.csv"
    args = ["predict", "--preset", "fig2a", "--out", str(out), "--override", "sweep.min = 1.3",
            "--override", "sweep.max = 1.5", "--override", "sweep.points = 5",
            "--override", "base.cutoff_photon = 4", "--override", "base.cutoff_phonon = 10", "-q"]
    assert cli.main(args) == 0
    table = capsys.readouterr().out
    assert "1.414214" in table and "2.449490" in table
    text = out.read_text()
    assert text.splitlines()[0] == "kind,pair,photon_order,Delta_over_G,series_value,T21,nearest,deviation"


def test_converge_subcommand(tmp_path, capsys):
    out = tmp_path / "c.csv"
    args = ["converge", "--preset", "fig2a", "--out", str(out), "--override", "converge.Delta = 1",
            "--override", "base.cutoff_photon = 4", "--override", "base.cutoff_phonon = 8", "-q"]
    assert cli.main(args) == 0
    assert "certified cutoffs" in capsys.readouterr().out
    assert out.read_text().startswith("Delta_over_G,n_th,cutoff_photon,cutoff_phonon")
    fail = ["converge", "--preset", "fig2a", "--override", "converge.Delta = sqrt(2)",
            "--override", "solver.max_photon = 3", "--override", "base.cutoff_photon = 2",
            "--override", "base.cutoff_phonon = 3", "-q"]
    assert cli.main(fail) == 3


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "nrblockade", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "sweep" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "nrblockade", "sweep"], capture_output=True, text=True)
    assert proc.returncode == 2
