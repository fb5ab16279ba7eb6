"""Parameter sets of the single-photon measurements, as ready-made configs."""

from __future__ import annotations

from .pipeline import ExperimentConfig

PRESETS = {
    "fig3a": dict(lambda1_nm=810.0, lambda2_nm=830.0, A_true=0.5122),
    "fig3b": dict(lambda1_nm=810.0, lambda2_nm=830.0, A_true=0.6377),
    "fig3c": dict(lambda1_nm=810.0, lambda2_nm=820.0, A_true=0.6377),
    "fig4a": dict(lambda1_nm=810.0, lambda2_nm=818.0, A_true=0.7, plate_angles="aligned", a_crit_mode="probed"),
    "fig4b": dict(lambda1_nm=810.0, lambda2_nm=818.0, A_true=0.7, plate_angles="aligned", a_crit_mode="known"),
    "fig4c": dict(lambda1_nm=810.0, lambda2_nm=818.0, A_true=0.7, plate_angles="random", a_crit_mode="probed"),
    "fig4d": dict(lambda1_nm=810.0, lambda2_nm=818.0, A_true=0.7, plate_angles="random", a_crit_mode="known"),
}


def preset(name: str, **overrides) -> ExperimentConfig:
    try:
        base = PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    return ExperimentConfig(**{**base, "name": name, **overrides})
