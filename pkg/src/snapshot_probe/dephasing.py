"""Aligned-plate dephasing, the BLP revival condition and the critical amplitude.

All time dependence is expressed through the rescaled time
``tau = 2*pi*sigma*delta_n*t``. For the two-peak spectrum the modulus of
the decoherence function is

    |kappa| = exp(-tau^2/2) * sqrt(1 - 2 h (1 - cos(delta_eta*tau))),   h = A(1-A),

and it increases at ``tau`` exactly when ``h > g(tau)`` with

    g(tau) = tau / theta(tau),   theta(tau) = 2 tau (1 - cos(delta_eta*tau)) - delta_eta sin(delta_eta*tau) > 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar

from .qubit import QubitState
from .spectra import GaussianMixtureSpectrum, decoherence_function

FIT_COEFFS = (0.0885553, 0.0870419, 0.411445, 0.0845395)
DEFAULT_TAU_MAX = 50.0


class Verdict(str, Enum):
    NON_MARKOVIAN = "NonMarkovianVerified"
    MARKOVIAN = "MarkovianVerified"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self):
        return self.value


class NumericError(RuntimeError):
    pass


@dataclass(frozen=True)
class DephasingChannel:
    """Pure dephasing with coherence factor ``kappa`` at one instant."""

    kappa: complex
    tau: Optional[float] = None
    spectrum: Optional[GaussianMixtureSpectrum] = None

    def __post_init__(self):
        if abs(self.kappa) > 1.0 + 1e-12:
            raise ValueError(f"|kappa| = {abs(self.kappa)!r} exceeds 1")

    @classmethod
    def from_spectrum(cls, spectrum: GaussianMixtureSpectrum, tau_phase: float) -> "DephasingChannel":
        tau = None
        try:
            tau = spectrum.sigma * tau_phase
        except ValueError:
            pass
        return cls(decoherence_function(spectrum, tau_phase), tau, spectrum)


def apply_channel(ch: DephasingChannel, rho: QubitState) -> QubitState:
    m = np.array(rho.matrix)
    m[0, 1] *= ch.kappa
    m[1, 0] *= np.conj(ch.kappa)
    return QubitState(m)


def kappa_abs(amplitude, delta_eta, tau):
    """Closed-form |kappa| for the two-peak family (vectorised)."""
    h = np.asarray(amplitude) * (1.0 - np.asarray(amplitude))
    tau = np.asarray(tau, dtype=float)
    inner = np.clip(1.0 - 2.0 * h * (1.0 - np.cos(delta_eta * tau)), 0.0, None)
    return np.exp(-0.5 * tau**2) * np.sqrt(inner)


def theta(delta_eta, tau):
    tau = np.asarray(tau, dtype=float)
    return 2.0 * tau * (1.0 - np.cos(delta_eta * tau)) - delta_eta * np.sin(delta_eta * tau)


def threshold(delta_eta, tau):
    """g(tau); +inf wherever theta(tau) <= 0 (no amplitude revives there)."""
    tau = np.asarray(tau, dtype=float)
    th = theta(delta_eta, tau)
    safe = np.where(th > 0, th, 1.0)
    return np.where(th > 0, tau / safe, np.inf)


def _check_inputs(amplitude, delta_eta, tau):
    if not 0.0 <= amplitude <= 1.0:
        raise ValueError(f"amplitude must lie in [0, 1], got {amplitude!r}")
    if delta_eta < 0:
        raise ValueError(f"delta_eta must be non-negative, got {delta_eta!r}")
    if np.any(np.asarray(tau) <= 0):
        raise ValueError("tau must be positive")


def blp_condition(amplitude: float, delta_eta: float, tau: float) -> bool:
    """True when |kappa| is increasing at ``tau`` (trace-distance revival)."""
    _check_inputs(amplitude, delta_eta, tau)
    h = amplitude * (1.0 - amplitude)
    return bool(theta(delta_eta, tau) > 0 and h > threshold(delta_eta, tau))


def blp_mask(amplitude, delta_eta: float, tau):
    """Vectorised :func:`blp_condition` over broadcastable amplitude/tau arrays."""
    a = np.asarray(amplitude, dtype=float)
    h = a * (1.0 - a)
    return (theta(delta_eta, tau) > 0) & (h > threshold(delta_eta, tau))


def amplitude_band(g):
    """Amplitudes (A-, A+) solving A(1-A) = g; NaN where g > 1/4."""
    g = np.asarray(g, dtype=float)
    disc = 1.0 - 4.0 * g
    root = np.sqrt(np.where(disc >= 0, disc, 0.0))
    lo = np.where(disc >= 0, 0.5 * (1.0 - root), np.nan)
    return lo, 1.0 - lo


def scan_step(delta_eta: float) -> float:
    return min(0.01, math.pi / (50.0 * max(delta_eta, 1.0)))


def minimum_threshold(delta_eta: float, tau_max: float = DEFAULT_TAU_MAX) -> float:
    """Infimum of g over (0, tau_max]; +inf if theta never becomes positive.

    A coarse scan resolves the oscillation of g, then every bracketed local
    minimum is refined by golden-section search.
    """
    if delta_eta <= 0:
        return math.inf
    step = scan_step(delta_eta)
    taus = np.arange(step, tau_max + 0.5 * step, step)
    gs = threshold(delta_eta, taus)
    finite = np.isfinite(gs)
    if not finite.any():
        return math.inf
    best = float(gs[finite].min())
    interior = np.nonzero(finite[1:-1] & (gs[1:-1] <= gs[:-2]) & (gs[1:-1] <= gs[2:]))[0] + 1
    # only minima that could beat the scan's best after refinement
    candidates = interior[gs[interior] <= best * 1.05]
    f = lambda t: float(threshold(delta_eta, t))
    for i in candidates:
        a, b, c = taus[i - 1], taus[i], taus[i + 1]
        if not (gs[i] < gs[i - 1] and gs[i] < gs[i + 1]):
            continue  # flat stretch, nothing to refine
        res = minimize_scalar(f, bracket=(a, b, c), method="golden", tol=1e-12)
        if not res.success or not np.isfinite(res.fun):
            raise NumericError(f"golden-section refinement failed near tau={b:.6g}: {res.message}")
        if a - step <= res.x <= c + step:
            best = min(best, float(res.fun))
    if finite[-1]:
        best = min(best, float(gs[-1]))
    return best


def a_crit_numeric(delta_eta: float, tau_max: float = DEFAULT_TAU_MAX) -> Optional[float]:
    """Critical amplitude from the revival condition; None when no amplitude revives."""
    if delta_eta < 0:
        raise ValueError("delta_eta must be non-negative")
    if tau_max <= 0:
        raise ValueError("tau_max must be positive")
    g_min = minimum_threshold(delta_eta, tau_max)
    if not g_min <= 0.25:
        return None
    return 0.5 * (1.0 - math.sqrt(1.0 - 4.0 * g_min))


def a_crit_fit(delta_eta: float) -> float:
    """Fitted closed-form approximation of the critical amplitude."""
    if delta_eta < 0:
        raise ValueError("delta_eta must be non-negative")
    c1, c2, c3, c4 = FIT_COEFFS
    d2 = delta_eta * delta_eta
    return c1 * math.exp(-c2 * d2) + c3 / (c4 * d2 + 1.0)


@dataclass(frozen=True)
class NonMarkovianityRegion:
    """Global critical amplitude and the per-time band [A-(tau), A+(tau)]."""

    delta_eta: float
    a_crit: Optional[float]
    tau: np.ndarray
    a_minus: np.ndarray  # NaN where no amplitude revives
    a_plus: np.ndarray


def nonmarkovian_region(delta_eta: float, tau_grid, tau_max: float = DEFAULT_TAU_MAX) -> NonMarkovianityRegion:
    tau = np.asarray(tau_grid, dtype=float)
    g = np.full(tau.shape, np.inf)
    positive = tau > 0
    if delta_eta > 0:
        g[positive] = threshold(delta_eta, tau[positive])
    lo, hi = amplitude_band(g)
    return NonMarkovianityRegion(delta_eta, a_crit_numeric(delta_eta, tau_max), tau, lo, hi)


def classify_intervals(delta_eta: float, a_bounds, tau_grid) -> list[Verdict]:
    """Label every time on ``tau_grid`` given bounds [A_lo, A_hi] on the amplitude."""
    a_lo, a_hi = a_bounds
    if not 0.0 <= a_lo <= a_hi <= 1.0:
        raise ValueError(f"need 0 <= A_lo <= A_hi <= 1, got {a_bounds!r}")
    region = nonmarkovian_region(delta_eta, tau_grid)
    labels = []
    for am, ap in zip(region.a_minus, region.a_plus):
        if np.isnan(am) or a_hi < am or a_lo > ap:
            labels.append(Verdict.MARKOVIAN)
        elif am <= a_lo and a_hi <= ap:
            labels.append(Verdict.NON_MARKOVIAN)
        else:
            labels.append(Verdict.INCONCLUSIVE)
    return labels


def merge_runs(tau_grid, labels) -> list[tuple[Verdict, float, float]]:
    """Collapse consecutive equal labels into (label, tau_start, tau_end) runs."""
    runs: list[list] = []
    for t, lab in zip(tau_grid, labels):
        if runs and runs[-1][0] == lab:
            runs[-1][2] = float(t)
        else:
            runs.append([lab, float(t), float(t)])
    return [tuple(r) for r in runs]
