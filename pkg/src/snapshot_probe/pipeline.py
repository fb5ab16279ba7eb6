"""Experiment configuration and the simulate -> tomograph -> probe pipeline."""

from __future__ import annotations

import dataclasses
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import __version__
from .coupling import PlateStack, apply, build_channel, decompose_thickness
from .dephasing import Verdict, a_crit_numeric, classify_intervals, merge_runs
from .probing import (
    DEFAULT_ALPHA_GRID,
    ACritSource,
    ProbeBounds,
    optimize_alpha,
    probe_bounds,
    probed_a_crit,
    verdict,
)
from .qubit import QubitState
from .spectra import frequency_from_wavelength_nm, sigma_from_fwhm_nm, two_peak_family
from .tomography import monte_carlo_bounds, tomograph

log = logging.getLogger(__name__)


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    lambda1_nm: float
    lambda2_nm: float
    A_true: float
    fwhm_nm: float = 3.0
    delta_n: float = 0.0089
    thicknesses_mm: list[float] = field(default_factory=lambda: [float(t) for t in range(2, 15)])
    plate_angles: str = "aligned"  # "aligned" | "random"
    plate_set_mm: list[float] = field(default_factory=lambda: [1.0, 2.0, 4.0, 8.0])
    shots: int = 10_000
    mc_trials: int = 1000
    noiseless: bool = False
    alpha2: float = 0.5
    alpha3: float = 0.5
    optimize_bound_alpha: bool = False
    alpha_grid: list[float] = field(default_factory=lambda: list(DEFAULT_ALPHA_GRID))
    delta_eta_alpha_grid: list[float] = field(default_factory=lambda: list(DEFAULT_ALPHA_GRID))
    a_crit_mode: str = "probed"  # "probed" | "known"
    quadrature_nodes: int = 64
    seed: int = 0
    tau_max: float = 5.0
    tau_points: int = 2000
    interval_bounds: Optional[list[float]] = None
    name: str = "sweep"
    out_dir: str = "out"

    def __post_init__(self):
        if self.lambda1_nm <= 0 or self.lambda2_nm <= 0:
            raise ConfigError("wavelengths must be positive")
        if self.fwhm_nm <= 0:
            raise ConfigError("fwhm_nm must be positive")
        if not 0.0 <= self.A_true <= 1.0:
            raise ConfigError("A_true must lie in [0, 1]")
        if not self.thicknesses_mm or any(t <= 0 for t in self.thicknesses_mm):
            raise ConfigError("thicknesses must be positive")
        if self.plate_angles not in ("aligned", "random"):
            raise ConfigError(f"plate_angles must be 'aligned' or 'random', got {self.plate_angles!r}")
        if self.a_crit_mode not in ("probed", "known"):
            raise ConfigError(f"a_crit_mode must be 'probed' or 'known', got {self.a_crit_mode!r}")
        if self.shots < 1:
            raise ConfigError("shots must be at least 1")
        if not self.noiseless and self.mc_trials < 2:
            raise ConfigError("mc_trials must be at least 2")
        for a in (self.alpha2, self.alpha3, *self.alpha_grid, *self.delta_eta_alpha_grid):
            if not 0.5 <= a < 1.0:
                raise ConfigError(f"alpha values must lie in [1/2, 1), got {a!r}")
        if self.interval_bounds is not None:
            lo, hi = self.interval_bounds
            if not 0.0 <= lo <= hi <= 1.0:
                raise ConfigError("interval_bounds must satisfy 0 <= lo <= hi <= 1")
        self.thicknesses_mm = sorted(float(t) for t in self.thicknesses_mm)

    @classmethod
    def from_dict(cls, data: dict, strict: bool = False) -> "ExperimentConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            if strict:
                raise ConfigError(f"unknown config keys: {sorted(unknown)}")
            log.warning("ignoring unknown config keys: %s", sorted(unknown))
        try:
            return cls(**{k: v for k, v in data.items() if k in known})
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_json(cls, path, strict: bool = False) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh), strict=strict)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @property
    def sigma(self) -> float:
        """Common spectral width (Hz), from the filter FWHM at the first wavelength."""
        return sigma_from_fwhm_nm(self.lambda1_nm, self.fwhm_nm)

    @property
    def mu(self) -> tuple[float, float]:
        return frequency_from_wavelength_nm(self.lambda1_nm), frequency_from_wavelength_nm(self.lambda2_nm)

    @property
    def delta_eta(self) -> float:
        return abs(self.mu[1] - self.mu[0]) / self.sigma

    def spectra(self):
        return two_peak_family(self.A_true, *self.mu, self.sigma)

    def tau_for(self, thickness_mm: float) -> float:
        return self.sigma * PlateStack.aligned([thickness_mm], self.delta_n).tau_phase()


@dataclass
class SweepRow:
    thickness_mm: float
    tau: float
    bounds: ProbeBounds
    acrit: float
    acrit_source: str
    verdict: Verdict
    flags: list[str] = field(default_factory=list)
    delta_eta_bound: Optional[float] = None


@dataclass
class SweepReport:
    rows: list[SweepRow]
    metadata: dict


def _row_seeds(seed: int, index: int):
    return np.random.SeedSequence(seed, spawn_key=(index,)).spawn(4)


def _stack_for(config: ExperimentConfig, thickness: float, rng_seed) -> PlateStack:
    if config.plate_angles == "aligned":
        return PlateStack.aligned([thickness], config.delta_n, config.quadrature_nodes)
    pieces = decompose_thickness(thickness, config.plate_set_mm)
    return PlateStack.random(pieces, np.random.default_rng(rng_seed), config.delta_n, config.quadrature_nodes)


def known_a_crit(config: ExperimentConfig) -> float:
    value = a_crit_numeric(config.delta_eta)
    return 0.5 if value is None else value


def run_row(config: ExperimentConfig, index: int, strict: bool = False) -> SweepRow:
    """Simulate, measure and probe at one thickness."""
    thickness = config.thicknesses_mm[index]
    angle_seed, *tomo_seeds = _row_seeds(config.seed, index)
    stack = _stack_for(config, thickness, angle_seed)
    rho = QubitState.plus()
    rhos = (rho, rho, rho)
    exact = [apply(build_channel(stack, xi, strict=strict), rho) for xi in config.spectra()]

    shots = None if config.noiseless else config.shots
    resamples = 0 if config.noiseless else config.mc_trials
    records = [tomograph(phi, shots, resamples, s) for phi, s in zip(exact, tomo_seeds)]
    phis = tuple(r.state for r in records)

    alpha2, alpha3 = config.alpha2, config.alpha3
    if config.optimize_bound_alpha:
        alpha2, _ = optimize_alpha("upper", (phis[0], phis[1], rho, rho), config.alpha_grid)
        alpha3, _ = optimize_alpha("lower", (phis[0], phis[2], rho, rho), config.alpha_grid)
    bounds = probe_bounds(phis, rhos, alpha2, alpha3)
    flags = list(bounds.flags)

    if resamples:
        summary = monte_carlo_bounds(records, lambda *p: probe_bounds(p, rhos, alpha2, alpha3).values())
        bounds = bounds.with_std(summary.std)
        if summary.failed:
            flags.append(f"mc_failed={summary.failed}")

    eta_bound = None
    notes = []
    if config.a_crit_mode == "known":
        acrit = known_a_crit(config)
    else:
        probed = probed_a_crit(phis[1], phis[2], rho, rho, config.delta_eta_alpha_grid)
        acrit, eta_bound = probed.value, probed.delta_eta_bound
        notes = probed.notes
    v = verdict(bounds, acrit, ACritSource(config.a_crit_mode), notes)
    flags.extend(n for n in v.notes if n not in flags)
    return SweepRow(thickness, config.tau_for(thickness), bounds, acrit, config.a_crit_mode, v.decision, flags, eta_bound)


def _failed_row(config: ExperimentConfig, index: int, exc: Exception) -> SweepRow:
    nan = math.nan
    t = config.thicknesses_mm[index]
    reason = f"error={type(exc).__name__}"
    return SweepRow(t, config.tau_for(t), ProbeBounds(nan, nan, nan, nan), nan, config.a_crit_mode, Verdict.INCONCLUSIVE, [reason])


def run_sweep(config: ExperimentConfig, strict: bool = False) -> SweepReport:
    rows = []
    for i in range(len(config.thicknesses_mm)):
        try:
            rows.append(run_row(config, i, strict=strict))
        except (ArithmeticError, ValueError, RuntimeError) as exc:
            if strict:
                raise
            log.warning("row %d (%.3g mm) failed: %s", i, config.thicknesses_mm[i], exc)
            rows.append(_failed_row(config, i, exc))
    return SweepReport(rows, sweep_metadata(config))


def sweep_metadata(config: ExperimentConfig) -> dict:
    return {
        "package_version": __version__,
        "numpy_version": np.__version__,
        "seed": config.seed,
        "sigma_hz": config.sigma,
        "delta_eta": config.delta_eta,
        "a_crit_true": known_a_crit(config),
        "config": config.to_dict(),
    }


def tightest_bounds(report: SweepReport) -> tuple[float, float]:
    """Largest lower and smallest upper bound over all rows and both routes."""
    lows = [r.bounds.best_lower for r in report.rows if math.isfinite(r.bounds.best_lower)]
    highs = [r.bounds.best_upper for r in report.rows if math.isfinite(r.bounds.best_upper)]
    if not lows:
        return 0.0, 1.0
    return max(lows), min(highs)


@dataclass
class IntervalReport:
    delta_eta: float
    bounds: tuple[float, float]
    tau: np.ndarray
    labels: list[Verdict]
    runs: list[tuple[Verdict, float, float]]

    def windows(self, label: Verdict, tau_range=(0.0, math.inf)) -> list[tuple[float, float]]:
        lo, hi = tau_range
        return [(a, b) for lab, a, b in self.runs if lab is label and b >= lo and a <= hi]


def run_intervals(config: ExperimentConfig, bounds=None, report: Optional[SweepReport] = None, delta_eta=None) -> IntervalReport:
    """Classify times on (0, tau_max] with amplitude bounds from a sweep or given directly."""
    if bounds is None:
        if config.interval_bounds is not None:
            bounds = tuple(config.interval_bounds)
        elif report is not None:
            bounds = tightest_bounds(report)
        else:
            raise ConfigError("no amplitude bounds supplied")
    lo, hi = bounds
    if lo > hi:
        raise ValueError(f"tightest bounds are inconsistent: {lo} > {hi}")
    eta = config.delta_eta if delta_eta is None else delta_eta
    tau = np.linspace(config.tau_max / config.tau_points, config.tau_max, config.tau_points)
    labels = classify_intervals(eta, (lo, hi), tau)
    return IntervalReport(eta, (lo, hi), tau, labels, merge_runs(tau, labels))
