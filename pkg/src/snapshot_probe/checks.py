"""Randomised inequality suites behind ``snapprobe check``.

Each check returns a :class:`CheckResult` with the worst observed margin, so
the same functions serve the CLI and the test-suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coupling import PlateStack, apply, build_channel
from .dephasing import a_crit_fit, a_crit_numeric
from .probing import coefficient_bounds_fidelity, coefficient_bounds_trace
from .qubit import QubitState, alpha_fidelity, random_state, trace_distance
from .spectra import (
    GaussianMixtureSpectrum,
    frequency_from_wavelength_nm,
    sigma_from_fwhm_nm,
    spectral_alpha_fidelity,
    spectral_trace_distance,
)

GDPI_TOL = 1e-9


@dataclass
class CheckResult:
    name: str
    passed: bool
    instances: int
    worst: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.instances} instances, worst margin {self.worst:.3e} {self.detail}".rstrip()


def random_spectrum(rng: np.random.Generator, sigma: float, center: float) -> GaussianMixtureSpectrum:
    """One or two equal-width peaks near ``center`` with a random amplitude."""
    if rng.uniform() < 0.3:
        return GaussianMixtureSpectrum.single(center + rng.normal() * 5 * sigma, sigma)
    mu1 = center + rng.normal() * 5 * sigma
    mu2 = mu1 + rng.uniform(0.0, 20.0) * sigma
    return GaussianMixtureSpectrum.two_peak(float(rng.uniform()), mu1, mu2, sigma)


def random_stack(rng: np.random.Generator) -> PlateStack:
    n = int(rng.integers(1, 5))
    thicknesses = rng.uniform(0.2, 8.0, size=n)
    if rng.uniform() < 0.3:
        return PlateStack.aligned(thicknesses)
    return PlateStack.random(thicknesses, rng)


def gdpi_instance(rng: np.random.Generator):
    """One random (states, spectra, coupling, alpha) instance.

    Returns the two margins (rhs - lhs) of the alpha-fidelity and the
    trace-distance inequalities.
    """
    sigma = sigma_from_fwhm_nm(810.0, rng.uniform(1.0, 5.0))
    center = frequency_from_wavelength_nm(rng.uniform(790.0, 830.0))
    xi1, xi2 = random_spectrum(rng, sigma, center), random_spectrum(rng, sigma, center)
    stack = random_stack(rng)
    rho1, rho2 = random_state(rng, pure=rng.uniform() < 0.5), random_state(rng, pure=rng.uniform() < 0.5)
    alpha = float(rng.uniform(0.5, 0.999))
    phi1 = apply(build_channel(stack, xi1), rho1)
    phi2 = apply(build_channel(stack, xi2), rho2)
    fid_margin = alpha_fidelity(phi1, phi2, alpha) - alpha_fidelity(rho1, rho2, alpha) * spectral_alpha_fidelity(xi1, xi2, alpha)
    td_margin = trace_distance(rho1, rho2) + spectral_trace_distance(xi1, xi2) - trace_distance(phi1, phi2)
    return fid_margin, td_margin


def gdpi_fuzz(instances: int = 1000, seed: int = 2024) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    margins = np.array([gdpi_instance(rng) for _ in range(instances)])
    out = []
    for col, name in enumerate(("alpha-fidelity GDPI", "trace-distance GDPI")):
        worst = float(margins[:, col].min())
        out.append(CheckResult(name, worst >= -GDPI_TOL, instances, worst))
    return out


def sandwich_check(configs, tol: float = 1e-9) -> CheckResult:
    """Noiseless lower <= A_true <= upper for every row of every config."""
    from .pipeline import run_sweep

    worst, n = math.inf, 0
    for cfg in configs:
        report = run_sweep(cfg)
        for r in report.rows:
            b = r.bounds
            for lo, hi in ((b.lower_fid, b.upper_fid), (b.lower_td, b.upper_td)):
                worst = min(worst, cfg.A_true - lo, hi - cfg.A_true)
                n += 1
    return CheckResult("soundness sandwich", worst >= -tol, n, worst)


def aligned_probe_states(amplitude: float, delta_eta: float, tau: float):
    """Evolved |+> for xi1, xi2, xi3 under aligned plates, in closed form."""
    e = math.exp(-0.5 * tau * tau)
    k2 = e
    k3 = e * complex(math.cos(delta_eta * tau), math.sin(delta_eta * tau))
    k1 = amplitude * k2 + (1 - amplitude) * k3
    return tuple(QubitState(0.5 * np.array([[1, k], [np.conj(k), 1]])) for k in (k1, k2, k3))


def impossibility_check(
    delta_etas=tuple(np.linspace(0.5, 20.0, 20)),
    amplitudes=tuple(np.linspace(0.0, 1.0, 25)),
    taus=tuple(np.linspace(0.05, 6.0, 20)),
    alphas=(0.5, 0.75, 0.95),
) -> CheckResult:
    """Aligned plates never certify global Markovianity (dense grid, both routes).

    Also covers 1 - D(phi1, phi2) >= A_crit, which is the trace-route upper bound.
    """
    plus = QubitState.plus()
    worst, n = math.inf, 0
    for delta_eta in delta_etas:
        acrit = a_crit_numeric(float(delta_eta))
        for amp in amplitudes:
            for tau in taus:
                phis = aligned_probe_states(float(amp), float(delta_eta), float(tau))
                lt, ut = coefficient_bounds_trace(*phis, plus, plus, plus)
                worst = min(worst, ut - acrit, (1 - acrit) - lt)
                for a in alphas:
                    lf, uf = coefficient_bounds_fidelity(*phis, plus, plus, plus, a, a)
                    worst = min(worst, uf - acrit, (1 - acrit) - lf)
                n += 1
    return CheckResult("aligned-plate impossibility", worst >= -1e-9, n, worst)


def acrit_fit_check(grid=tuple(range(2, 21, 2)), tol: float = 0.01) -> CheckResult:
    diffs = [abs(a_crit_numeric(d) - a_crit_fit(d)) for d in grid]
    worst = max(diffs)
    return CheckResult("A_crit numeric vs fit", worst <= tol, len(diffs), tol - worst, f"(max |diff| {worst:.4f})")


def run_all(instances: int = 1000, seed: int = 2024) -> list[CheckResult]:
    from .presets import preset

    results = gdpi_fuzz(instances, seed)
    results.append(sandwich_check([preset(n, noiseless=True) for n in ("fig3a", "fig3b", "fig3c", "fig4a", "fig4c")]))
    results.append(impossibility_check())
    results.append(acrit_fit_check())
    return results
