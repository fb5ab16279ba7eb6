"""Frequency-resolved polarization unitaries for stacks of birefringent plates.

The coupling never changes the photon's frequency, so tracing out frequency
is exact: the probe channel is the spectrum-weighted average of the
per-frequency Jones unitaries,

    Phi(rho) = sum_j w_j U(w_j) rho U(w_j)^dagger,

with nodes and weights from per-component Gauss-Hermite quadrature.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .qubit import QubitState
from .spectra import SPEED_OF_LIGHT, GaussianMixtureSpectrum

DEFAULT_NODES = 64
MIN_NODES = 16
CONVERGENCE_TOL = 1e-8


class QuadratureWarning(UserWarning):
    pass


class QuadratureAccuracyError(RuntimeError):
    pass


@dataclass(frozen=True)
class Plate:
    """One quartz plate. Thickness in mm, fast-axis angle in radians.

    A zero thickness is allowed and acts as the identity.
    """

    thickness: float
    angle: float = 0.0
    delta_n: float = 0.0089

    def __post_init__(self):
        if self.thickness < 0:
            raise ValueError(f"thickness must be non-negative, got {self.thickness!r}")
        if self.delta_n == 0:
            raise ValueError("delta_n must be non-zero")

    @property
    def time_delay(self) -> float:
        """Interaction time t = L / c in seconds."""
        return self.thickness * 1e-3 / SPEED_OF_LIGHT


@dataclass(frozen=True)
class PlateStack:
    plates: tuple[Plate, ...]
    nodes: int = DEFAULT_NODES

    def __post_init__(self):
        object.__setattr__(self, "plates", tuple(self.plates))
        if not self.plates:
            raise ValueError("a plate stack needs at least one plate")
        if self.nodes < MIN_NODES:
            raise ValueError(f"need at least {MIN_NODES} quadrature nodes, got {self.nodes}")

    @classmethod
    def aligned(cls, thicknesses: Sequence[float], delta_n: float = 0.0089, nodes: int = DEFAULT_NODES) -> "PlateStack":
        return cls(tuple(Plate(t, 0.0, delta_n) for t in thicknesses), nodes)

    @classmethod
    def random(
        cls,
        thicknesses: Sequence[float],
        rng: np.random.Generator,
        delta_n: float = 0.0089,
        nodes: int = DEFAULT_NODES,
    ) -> "PlateStack":
        """Plates with fast axes drawn uniformly from [0, pi)."""
        angles = rng.uniform(0.0, math.pi, size=len(thicknesses))
        return cls(tuple(Plate(t, float(a), delta_n) for t, a in zip(thicknesses, angles)), nodes)

    @property
    def total_thickness(self) -> float:
        return sum(p.thickness for p in self.plates)

    @property
    def is_aligned(self) -> bool:
        return len({p.angle for p in self.plates}) == 1

    def tau_phase(self) -> float:
        """2*pi*delta_n*t summed over plates (aligned-equivalent phase, seconds)."""
        return sum(2.0 * math.pi * p.delta_n * p.time_delay for p in self.plates)


def _rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def jones_unitaries(stack: PlateStack, omegas) -> np.ndarray:
    """Per-frequency unitaries, shape (n, 2, 2); the first plate acts first."""
    omegas = np.asarray(omegas, dtype=float)
    u = np.broadcast_to(np.eye(2, dtype=complex), (omegas.size, 2, 2)).copy()
    for plate in stack.plates:
        half = math.pi * plate.delta_n * plate.time_delay * omegas
        diag = np.zeros((omegas.size, 2, 2), dtype=complex)
        diag[:, 0, 0] = np.exp(1j * half)
        diag[:, 1, 1] = np.exp(-1j * half)
        r = _rotation(plate.angle)
        w = r @ diag @ r.T
        u = w @ u
    return u


@dataclass(frozen=True, eq=False)
class FrequencyResolvedChannel:
    omegas: np.ndarray
    weights: np.ndarray
    unitaries: np.ndarray = field(repr=False)

    def apply(self, rho: QubitState) -> QubitState:
        return apply(self, rho)


def quadrature_nodes(spectrum: GaussianMixtureSpectrum, nodes: int = DEFAULT_NODES):
    """Gauss-Hermite nodes per component, weighted by the mixture weights."""
    x, w = np.polynomial.hermite.hermgauss(nodes)
    omegas, weights = [], []
    for p, comp in zip(spectrum.weights, spectrum.components):
        if p == 0.0:
            continue
        omegas.append(comp.mu + math.sqrt(2.0) * comp.sigma * x)
        weights.append(p * w / math.sqrt(math.pi))
    omegas = np.concatenate(omegas)
    weights = np.concatenate(weights)
    return omegas, weights / weights.sum()


def _raw_channel(stack: PlateStack, spectrum: GaussianMixtureSpectrum, nodes: int) -> FrequencyResolvedChannel:
    omegas, weights = quadrature_nodes(spectrum, nodes)
    return FrequencyResolvedChannel(omegas, weights, jones_unitaries(stack, omegas))


def build_channel(stack: PlateStack, spectrum: GaussianMixtureSpectrum, strict: bool = False) -> FrequencyResolvedChannel:
    """Discretise the frequency average for one stack and one spectrum.

    The node count is checked against a half-size rule; if the two disagree
    by more than 1e-8 on the probe states |+> and |R>, a QuadratureWarning is
    issued (an error when ``strict``).
    """
    ch = _raw_channel(stack, spectrum, stack.nodes)
    coarse = _raw_channel(stack, spectrum, max(stack.nodes // 2, 8))
    probes = (QubitState.plus(), QubitState.from_ket([1, 1j]))
    err = max(np.max(np.abs(apply(ch, r).matrix - apply(coarse, r).matrix)) for r in probes)
    if err > CONVERGENCE_TOL:
        msg = f"frequency quadrature with {stack.nodes} nodes not converged (estimated error {err:.2e})"
        if strict:
            raise QuadratureAccuracyError(msg)
        warnings.warn(msg, QuadratureWarning, stacklevel=2)
    return ch


def apply(ch: FrequencyResolvedChannel, rho: QubitState) -> QubitState:
    u = ch.unitaries
    out = np.einsum("j,jab,bc,jdc->ad", ch.weights, u, rho.matrix, u.conj())
    return QubitState(out)


def partial_trace_channel(unitary: np.ndarray, xi: np.ndarray, rho: QubitState) -> QubitState:
    """tr_S[U (rho x xi) U^dagger] for a probe qubit and a finite system."""
    d = xi.shape[0]
    joint = np.kron(rho.matrix, xi)
    evolved = unitary @ joint @ unitary.conj().T
    reduced = np.trace(evolved.reshape(2, d, 2, d), axis1=1, axis2=3)
    return QubitState(reduced)


def decompose_thickness(total_mm: float, plate_set_mm: Sequence[float]) -> list[float]:
    """Greedy split of a total thickness into available plates, largest first."""
    remaining = total_mm
    out = []
    for t in sorted(plate_set_mm, reverse=True):
        while remaining >= t - 1e-9:
            out.append(t)
            remaining -= t
    if remaining > 1e-9:
        out.append(remaining)
    return out
