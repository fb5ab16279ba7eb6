"""Snapshot verification of non-Markovian polarization dephasing by unknown-coupling probing."""

__version__ = "0.1.0"

from .dephasing import (
    DephasingChannel,
    Verdict,
    a_crit_fit,
    a_crit_numeric,
    apply_channel,
    blp_condition,
    classify_intervals,
)
from .probing import (
    ProbeBounds,
    ProbeVerdict,
    coefficient_bounds_fidelity,
    coefficient_bounds_trace,
    delta_eta_lower_bound,
    optimize_alpha,
    verdict,
)
from .qubit import QubitState, alpha_fidelity, purity, trace_distance, von_neumann_entropy
from .spectra import GaussianComponent, GaussianMixtureSpectrum

__all__ = [
    "DephasingChannel",
    "GaussianComponent",
    "GaussianMixtureSpectrum",
    "ProbeBounds",
    "ProbeVerdict",
    "QubitState",
    "Verdict",
    "a_crit_fit",
    "a_crit_numeric",
    "alpha_fidelity",
    "apply_channel",
    "blp_condition",
    "classify_intervals",
    "coefficient_bounds_fidelity",
    "coefficient_bounds_trace",
    "delta_eta_lower_bound",
    "optimize_alpha",
    "purity",
    "trace_distance",
    "verdict",
    "von_neumann_entropy",
]
