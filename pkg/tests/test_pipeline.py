import json
import math

import pytest

from snapshot_probe.dephasing import Verdict
from snapshot_probe.pipeline import ConfigError, ExperimentConfig, run_intervals, run_sweep, tightest_bounds
from snapshot_probe.presets import PRESETS, preset
from snapshot_probe.probing import decide


def test_config_validation():
    with pytest.raises(ConfigError):
        ExperimentConfig(-810.0, 830.0, 0.5)
    with pytest.raises(ConfigError):
        ExperimentConfig(810.0, 830.0, 1.5)
    with pytest.raises(ConfigError):
        ExperimentConfig(810.0, 830.0, 0.5, thicknesses_mm=[0.0, 1.0])
    with pytest.raises(ConfigError):
        ExperimentConfig(810.0, 830.0, 0.5, plate_angles="diagonal")
    with pytest.raises(ConfigError):
        ExperimentConfig(810.0, 830.0, 0.5, alpha2=1.0)


def test_unknown_keys_strict_and_lenient():
    data = {"lambda1_nm": 810, "lambda2_nm": 830, "A_true": 0.5, "colour": "blue"}
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict(data, strict=True)
    assert ExperimentConfig.from_dict(data).A_true == 0.5


def test_config_json_round_trip(tmp_path):
    cfg = preset("fig4d", seed=9)
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cfg.to_dict()))
    assert ExperimentConfig.from_json(path, strict=True) == cfg


def test_thicknesses_sorted():
    cfg = ExperimentConfig(810.0, 830.0, 0.5, thicknesses_mm=[5, 2, 9])
    assert cfg.thicknesses_mm == [2.0, 5.0, 9.0]


@pytest.mark.parametrize("name,expected", [("fig3a", 15.321), ("fig3c", 7.754), ("fig4a", 6.218)])
def test_delta_eta_of_presets(name, expected):
    assert preset(name).delta_eta == pytest.approx(expected, abs=2e-3)


def test_noiseless_std_zero():
    rep = run_sweep(preset("fig3b", noiseless=True, thicknesses_mm=[2.0, 7.0]))
    for r in rep.rows:
        b = r.bounds
        assert (b.lower_fid_std, b.upper_fid_std, b.lower_td_std, b.upper_td_std) == (0, 0, 0, 0)


def test_rows_recomputable_from_row_data():
    rep = run_sweep(preset("fig4c", mc_trials=5))
    for r in rep.rows:
        assert decide(r.bounds.best_lower, r.bounds.best_upper, r.acrit)[0] is r.verdict


def test_metadata_complete():
    rep = run_sweep(preset("fig3a", noiseless=True, thicknesses_mm=[3.0]))
    for key in ("package_version", "numpy_version", "seed", "sigma_hz", "delta_eta", "config"):
        assert key in rep.metadata


def test_fig4b_known_noiseless_verifies():
    rep = run_sweep(preset("fig4b", noiseless=True))
    assert any(r.verdict is Verdict.NON_MARKOVIAN for r in rep.rows)


def test_fig4a_probed_inconclusive_noiseless():
    rep = run_sweep(preset("fig4a", noiseless=True))
    assert all(r.verdict is not Verdict.NON_MARKOVIAN for r in rep.rows)


def test_failed_rows_recorded(monkeypatch):
    import snapshot_probe.pipeline as pl

    original = pl.run_row

    def flaky(config, index, strict=False):
        if index == 1:
            raise ArithmeticError("boom")
        return original(config, index, strict)

    monkeypatch.setattr(pl, "run_row", flaky)
    cfg = preset("fig3a", noiseless=True, thicknesses_mm=[2.0, 3.0, 4.0])
    rep = pl.run_sweep(cfg)
    assert len(rep.rows) == 3
    assert math.isnan(rep.rows[1].bounds.lower_fid) and rep.rows[1].flags == ["error=ArithmeticError"]
    with pytest.raises(ArithmeticError):
        pl.run_sweep(cfg, strict=True)


def test_intervals_vacuous_and_single_peak():
    cfg = preset("fig4a", noiseless=True)
    labels = set(run_intervals(cfg, bounds=(0.0, 1.0)).labels)
    assert Verdict.NON_MARKOVIAN not in labels
    single = run_intervals(cfg, bounds=(0.2, 0.8), delta_eta=0.0)
    assert set(single.labels) == {Verdict.MARKOVIAN}


def test_intervals_from_sweep():
    cfg = preset("fig4a", noiseless=True)
    rep = run_sweep(cfg)
    iv = run_intervals(cfg, report=rep)
    assert iv.bounds == tightest_bounds(rep)
    assert len(iv.windows(Verdict.NON_MARKOVIAN, (0, 3))) >= 2
    with pytest.raises(ConfigError):
        run_intervals(cfg)


def test_presets_match_captions():
    assert {k: (v["lambda2_nm"], v["A_true"]) for k, v in PRESETS.items() if k.startswith("fig3")} == {
        "fig3a": (830.0, 0.5122),
        "fig3b": (830.0, 0.6377),
        "fig3c": (820.0, 0.6377),
    }
    with pytest.raises(KeyError):
        preset("fig9")
