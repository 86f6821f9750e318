import json
import subprocess
import sys

import numpy as np
import pytest

from ucmvdr.array_model import generate_snapshots
from ucmvdr.beamformers import mvdr_weights
from ucmvdr.cli import EXIT_ABORT, EXIT_INVALID, EXIT_OK, main
from ucmvdr.covariance import sample_covariance
from ucmvdr.output import read_csv, read_weights, write_weights
from ucmvdr.rectify import uc_mvdr_weights

from conftest import one_interferer

SMALL = """\
[array]
num_sensors = 11

[[scenario.interferers]]
direction_cosine = "3/11"
inr_db = 40.0

[experiment]
num_snapshots = 12
num_trials = 40
beamformers = ["SMI", "UC", "DL-matched"]
base_seed = 1
"""


@pytest.fixture
def small_config(tmp_path):
    path = tmp_path / "small.toml"
    path.write_text(SMALL)
    return path


def test_ensemble(tmp_path, small_config):
    out = tmp_path / "ens"
    assert main(["ensemble", "--config", str(small_config), "--out", str(out)]) == EXIT_OK
    for name in ("weights.txt", "zeros.csv", "beampattern.csv", "zeros.svg", "beampattern.svg", "manifest.json"):
        assert (out / name).exists(), name
    zeros = read_csv(out / "zeros.csv")
    assert len(zeros) == 10
    assert max(float(r["abs_radius_minus_1"]) for r in zeros) < 1e-6
    w = read_weights(out / "weights.txt")
    assert 1 / np.sum(np.abs(w) ** 2) == pytest.approx(10.4732, abs=5e-4)
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == "ensemble"
    assert "weights.txt" in manifest["files"]


def test_montecarlo_is_deterministic(tmp_path, small_config):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["montecarlo", "--config", str(small_config), "--out", str(a)]) == EXIT_OK
    assert main(["montecarlo", "--config", str(small_config), "--out", str(b), "--workers", "2"]) == EXIT_OK
    csvs = sorted(p.name for p in a.glob("*.csv"))
    assert {"trials.csv", "summary.csv", "ecdf_UC.csv"} <= set(csvs)
    for name in csvs:
        assert (a / name).read_bytes() == (b / name).read_bytes(), name
    trials = read_csv(a / "trials.csv")
    assert len(trials) == 3 * 40
    assert {r["beamformer"] for r in trials} == {"SMI", "UC", "DL-matched"}


def test_seed_flag_and_zeros(tmp_path, small_config):
    out = tmp_path / "s"
    assert main(["montecarlo", "--config", str(small_config), "--out", str(out), "--seed", "9",
                 "--emit-zeros", "--linear-power"]) == EXIT_OK
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["base_seed"] == 9
    assert (out / "zeros.csv").exists()
    header = (out / "summary.csv").read_text().splitlines()[1]
    assert "P_I_mean_lin" in header


def test_sweep_outputs(tmp_path):
    cfg = tmp_path / "sweep.toml"
    cfg.write_text(SMALL.replace("num_trials = 40", "num_trials = 10") + "\n[sweep]\ninr_db = [0, 20]\n")
    out = tmp_path / "sw"
    assert main(["montecarlo", "--config", str(cfg), "--out", str(out)]) == EXIT_OK
    rows = read_csv(out / "sweep_summary.csv")
    assert [r["inr_db"] for r in rows] == ["0.0"] * 3 + ["20.0"] * 3
    assert (out / "sweep.svg").exists()


def test_malformed_config_writes_nothing(tmp_path, capsys):
    cfg = tmp_path / "bad.toml"
    cfg.write_text(SMALL.replace("num_sensors = 11", 'num_sensors = "eleven"'))
    out = tmp_path / "never"
    assert main(["montecarlo", "--config", str(cfg), "--out", str(out)]) == EXIT_INVALID
    assert not out.exists()
    assert "array.num_sensors" in capsys.readouterr().err


def test_abort_exit_code(tmp_path):
    cfg = tmp_path / "abort.toml"
    cfg.write_text(
        SMALL.replace("num_snapshots = 12", "num_snapshots = 5")
        .replace('["SMI", "UC", "DL-matched"]', '["DL-fixed"]')
        + "fixed_loading = 1e-30\n"
    )
    out = tmp_path / "ab"
    assert main(["montecarlo", "--config", str(cfg), "--out", str(out)]) == EXIT_ABORT
    assert not out.exists()


def test_rectify_matches_library(tmp_path):
    # SMI weights from a fixed-seed trial, rectified through the file interface
    sc = one_interferer()
    smi = mvdr_weights(sample_covariance(generate_snapshots(sc, 12, (0, 17))), sc.geometry, 0.0)
    path = tmp_path / "smi.txt"
    write_weights(path, smi.weights)
    out = tmp_path / "rect"
    assert main(["rectify", "--weights", str(path), "--out", str(out), "--num-sensors", "11"]) == EXIT_OK
    expected, report = uc_mvdr_weights(smi)
    np.testing.assert_allclose(read_weights(out / "uc_weights.txt"), expected.weights, rtol=0, atol=1e-12)
    rows = read_csv(out / "projection.csv")
    assert sum(int(r["mainlobe_moved"]) for r in rows) == len(report.mainlobe_moved)


@pytest.mark.parametrize(
    "content,extra",
    [
        ("1 0\nnan 0\n", []),
        ("1 0 0\n", []),
        ("", []),
        ("0.5 0\n0.5 0\n", ["--num-sensors", "3"]),
        ("0.5 0\n0.4 0\n", []),
    ],
)
def test_rectify_bad_input(tmp_path, content, extra):
    path = tmp_path / "w.txt"
    path.write_text(content)
    out = tmp_path / "r"
    assert main(["rectify", "--weights", str(path), "--out", str(out), *extra]) == EXIT_INVALID
    assert not out.exists()


def test_module_entry_point(tmp_path, small_config):
    proc = subprocess.run(
        [sys.executable, "-m", "ucmvdr", "ensemble", "--config", str(small_config), "--out", str(tmp_path / "m")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert "WNG" in proc.stdout
