import json

import pytest

from snapshot_probe.cli import main


def test_sweep_preset_noiseless(tmp_path, capsys):
    assert main(["sweep", "--preset", "fig3c", "--noiseless", "--out", str(tmp_path), "--format", "both"]) == 0
    assert (tmp_path / "fig3c.csv").exists() and (tmp_path / "fig3c.svg").exists()


def test_sweep_config_seed_override(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"lambda1_nm": 810, "lambda2_nm": 830, "A_true": 0.5, "thicknesses_mm": [3], "mc_trials": 3, "name": "c"}))
    assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path), "--seed", "11"]) == 0
    meta = json.loads((tmp_path / "c_meta.json").read_text())
    assert meta["seed"] == 11


def test_strict_rejects_unknown_keys(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"lambda1_nm": 810, "lambda2_nm": 830, "A_true": 0.5, "bogus": 1}))
    assert main(["sweep", "--config", str(cfg), "--strict", "--out", str(tmp_path)]) != 0
    assert "bogus" in capsys.readouterr().err


def test_missing_config_is_an_error(tmp_path, capsys):
    assert main(["sweep", "--config", str(tmp_path / "none.json")]) != 0
    assert "error" in capsys.readouterr().err


def test_unwritable_output(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["acrit", "--out", str(blocker / "sub"), "--max", "2"]) != 0


def test_intervals_with_bounds(tmp_path):
    assert main(["intervals", "--preset", "fig4a", "--bounds", "0.6", "0.8", "--out", str(tmp_path), "--format", "svg"]) == 0
    assert (tmp_path / "fig4a_intervals.svg").exists()


def test_acrit_table(tmp_path):
    assert main(["acrit", "--out", str(tmp_path), "--min", "0", "--max", "4", "--step", "2"]) == 0
    lines = (tmp_path / "acrit.csv").read_text().splitlines()
    assert lines[0] == "delta_eta,acrit_numeric,acrit_fit,difference" and len(lines) == 4


def test_report_renders_svg(tmp_path):
    main(["sweep", "--preset", "fig3a", "--noiseless", "--out", str(tmp_path)])
    assert main(["report", str(tmp_path / "fig3a.csv")]) == 0
    assert (tmp_path / "fig3a.svg").exists()


@pytest.mark.slow
def test_check_command(capsys):
    assert main(["check", "--instances", "50"]) == 0
    out = capsys.readouterr().out
    assert out.count("[PASS]") == 5
