"""Gaussian-mixture frequency spectra of a single photon.

Frequencies are ordinary frequencies in Hz. A spectrum is a diagonal state
in the frequency basis, so its alpha-fidelities and trace distances reduce
to one-dimensional integrals over the densities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

SPEED_OF_LIGHT = 299_792_458.0  # m/s
FWHM_TO_SIGMA = 1.0 / (2.0 * math.sqrt(2.0 * math.log(2.0)))

QUAD_RTOL = 1e-10
QUAD_ATOL = 1e-14
QUAD_ORDER = 20
QUAD_MAX_PANELS = 2**14
SUPPORT_WIDTH = 10.0  # in units of sigma


class QuadratureError(RuntimeError):
    """Raised when the panel quadrature fails to converge."""


@dataclass(frozen=True)
class GaussianComponent:
    mu: float  # Hz
    sigma: float  # Hz

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma!r}")
        if not self.mu > 0:
            raise ValueError(f"mu must be positive, got {self.mu!r}")

    def pdf(self, omega):
        z = (np.asarray(omega, dtype=float) - self.mu) / self.sigma
        return np.exp(-0.5 * z * z) / (math.sqrt(2.0 * math.pi) * self.sigma)


@dataclass(frozen=True)
class GaussianMixtureSpectrum:
    components: tuple[GaussianComponent, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        w = tuple(float(x) for x in self.weights)
        if not comps or len(comps) != len(w):
            raise ValueError("need one weight per component and at least one component")
        if any(x < 0 for x in w):
            raise ValueError(f"weights must be non-negative, got {w}")
        if abs(sum(w) - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1, got {sum(w)!r}")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "weights", w)

    @classmethod
    def single(cls, mu: float, sigma: float) -> "GaussianMixtureSpectrum":
        return cls((GaussianComponent(mu, sigma),), (1.0,))

    @classmethod
    def two_peak(cls, amplitude: float, mu1: float, mu2: float, sigma: float) -> "GaussianMixtureSpectrum":
        """``amplitude * G1 + (1 - amplitude) * G2`` with a shared width."""
        if not 0.0 <= amplitude <= 1.0:
            raise ValueError(f"amplitude must lie in [0, 1], got {amplitude!r}")
        return cls(
            (GaussianComponent(mu1, sigma), GaussianComponent(mu2, sigma)),
            (amplitude, 1.0 - amplitude),
        )

    @property
    def support(self) -> tuple[float, float]:
        lo = min(c.mu - SUPPORT_WIDTH * c.sigma for c in self.components)
        hi = max(c.mu + SUPPORT_WIDTH * c.sigma for c in self.components)
        return lo, hi

    @property
    def delta_mu(self) -> float:
        """|mu2 - mu1| for a two-component spectrum (0 for a single peak)."""
        if len(self.components) == 1:
            return 0.0
        if len(self.components) != 2:
            raise ValueError("delta_mu is defined for one or two components")
        return abs(self.components[1].mu - self.components[0].mu)

    @property
    def sigma(self) -> float:
        sigmas = {c.sigma for c in self.components}
        if len(sigmas) != 1:
            raise ValueError("components do not share a common sigma")
        return sigmas.pop()

    @property
    def delta_eta(self) -> float:
        """Peak separation in units of the common width."""
        return self.delta_mu / self.sigma

    def pdf(self, omega):
        return sum(w * c.pdf(omega) for w, c in zip(self.weights, self.components))


def sigma_from_fwhm_nm(center_nm: float, fwhm_nm: float) -> float:
    """Frequency standard deviation (Hz) of a filter given its FWHM in wavelength."""
    lam = center_nm * 1e-9
    return SPEED_OF_LIGHT / lam**2 * (fwhm_nm * 1e-9) * FWHM_TO_SIGMA


def frequency_from_wavelength_nm(center_nm: float) -> float:
    return SPEED_OF_LIGHT / (center_nm * 1e-9)


def pdf(s: GaussianMixtureSpectrum, omega):
    return s.pdf(omega)


@lru_cache(maxsize=None)
def _legendre(order: int):
    return np.polynomial.legendre.leggauss(order)


def _panel_sum(f: Callable, lo: float, hi: float, panels: int):
    x, w = _legendre(QUAD_ORDER)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return np.sum(weights * f(nodes))


def integrate(f: Callable, lo: float, hi: float, rtol: float = QUAD_RTOL, start_panels: int = 4):
    """Composite Gauss-Legendre on [lo, hi], doubling panels until converged.

    ``f`` must accept a numpy array and may return complex values.
    """
    if hi <= lo:
        return 0.0
    panels = start_panels
    prev = _panel_sum(f, lo, hi, panels)
    while panels < QUAD_MAX_PANELS:
        panels *= 2
        cur = _panel_sum(f, lo, hi, panels)
        if abs(cur - prev) <= max(rtol * abs(cur), QUAD_ATOL):
            return cur
        prev = cur
    raise QuadratureError(
        f"no convergence on [{lo:.6g}, {hi:.6g}] after {panels} panels "
        f"(last change {abs(cur - prev):.3e}, value {cur!r})"
    )


def _joint_support(x: GaussianMixtureSpectrum, y: GaussianMixtureSpectrum):
    lx, hx = x.support
    ly, hy = y.support
    return min(lx, ly), max(hx, hy)


def spectral_alpha_fidelity(x: GaussianMixtureSpectrum, y: GaussianMixtureSpectrum, alpha: float) -> float:
    """Integral of x(w)^alpha y(w)^(1-alpha); commuting-state alpha-fidelity."""
    if not 0.5 <= alpha < 1.0:
        raise ValueError(f"alpha must lie in [1/2, 1), got {alpha!r}")
    lo, hi = _joint_support(x, y)

    def integrand(w):
        return x.pdf(w) ** alpha * y.pdf(w) ** (1.0 - alpha)

    return float(min(1.0, integrate(integrand, lo, hi)))


def gaussian_alpha_fidelity(delta_eta: float, alpha: float) -> float:
    """Closed form for two equal-width Gaussians a distance ``delta_eta`` apart."""
    return math.exp(-alpha * (1.0 - alpha) * delta_eta**2 / 2.0)


def _crossings(x, y, lo, hi, n=4001):
    grid = np.linspace(lo, hi, n)
    d = x.pdf(grid) - y.pdf(grid)
    roots = []
    for i in np.nonzero(np.sign(d[:-1]) * np.sign(d[1:]) < 0)[0]:
        roots.append(brentq(lambda w: float(x.pdf(w) - y.pdf(w)), grid[i], grid[i + 1], xtol=1e-14 * abs(grid[i])))
    return roots


def spectral_trace_distance(x: GaussianMixtureSpectrum, y: GaussianMixtureSpectrum) -> float:
    """Half the L1 distance between the densities.

    The integrand has kinks where the densities cross, so the support is
    split at the crossings and each smooth piece is integrated separately.
    """
    lo, hi = _joint_support(x, y)
    edges = [lo, *_crossings(x, y, lo, hi), hi]

    def integrand(w):
        return np.abs(x.pdf(w) - y.pdf(w))

    total = sum(integrate(integrand, a, b) for a, b in zip(edges[:-1], edges[1:]))
    return float(min(1.0, 0.5 * total))


def overlap_integral(x: GaussianMixtureSpectrum, y: GaussianMixtureSpectrum) -> float:
    """Integral of min(x, y); zero exactly when the spectra are orthogonal."""
    return 1.0 - spectral_trace_distance(x, y)


def decoherence_function(s: GaussianMixtureSpectrum, tau_phase: float) -> complex:
    """Closed-form kappa = integral of s(w) exp(i w tau_phase).

    ``tau_phase`` is 2*pi*delta_n*t in seconds; the dimensionless rescaled
    time of a component is sigma * tau_phase.
    """
    if tau_phase < 0:
        raise ValueError("tau_phase must be non-negative")
    return complex(
        sum(
            w * np.exp(1j * c.mu * tau_phase) * math.exp(-0.5 * (c.sigma * tau_phase) ** 2)
            for w, c in zip(s.weights, s.components)
        )
    )


def decoherence_function_quadrature(s: GaussianMixtureSpectrum, tau_phase: float) -> complex:
    """Same quantity as :func:`decoherence_function`, by direct quadrature."""
    lo, hi = s.support
    return complex(integrate(lambda w: s.pdf(w) * np.exp(1j * w * tau_phase), lo, hi, start_panels=16))


def two_peak_family(amplitude: float, mu1: float, mu2: float, sigma: float) -> tuple[GaussianMixtureSpectrum, ...]:
    """The state of interest and its two single-peak references (xi1, xi2, xi3)."""
    return (
        GaussianMixtureSpectrum.two_peak(amplitude, mu1, mu2, sigma),
        GaussianMixtureSpectrum.single(mu1, sigma),
        GaussianMixtureSpectrum.single(mu2, sigma),
    )


def mixture_of(spectra: Sequence[GaussianMixtureSpectrum], weights: Sequence[float]) -> GaussianMixtureSpectrum:
    comps, ws = [], []
    for s, p in zip(spectra, weights):
        comps.extend(s.components)
        ws.extend(p * w for w in s.weights)
    return GaussianMixtureSpectrum(tuple(comps), tuple(ws))
