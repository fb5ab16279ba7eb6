"""Simulated photon-counting polarization tomography.

Each basis {H,V}, {D,A}, {R,L} receives ``shots`` photons split binomially
by the Born rule. Reconstruction is linear inversion followed by clamping
negative eigenvalues, and error bars come from a parametric bootstrap
around the reconstructed state.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from .qubit import QubitState

BASES = ("HV", "DA", "RL")
CSV_HEADER = ("basis", "plus", "minus", "shots")


@dataclass(frozen=True)
class CountData:
    """Photon counts (plus, minus) per measurement basis."""

    counts: Mapping[str, tuple[int, int]]
    shots: int

    def __post_init__(self):
        if self.shots < 1:
            raise ValueError("shots must be at least 1")
        for basis in BASES:
            plus, minus = self.counts[basis]
            if plus < 0 or minus < 0:
                raise ValueError(f"negative count in basis {basis}")
            if plus + minus != self.shots:
                raise ValueError(f"basis {basis}: {plus} + {minus} != {self.shots}")

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for basis in BASES:
            writer.writerow((basis, *self.counts[basis], self.shots))
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "CountData":
        rows = list(csv.DictReader(io.StringIO(text)))
        shots = {int(r["shots"]) for r in rows}
        if len(shots) != 1:
            raise ValueError("all bases must share the same shot count")
        counts = {r["basis"]: (int(r["plus"]), int(r["minus"])) for r in rows}
        return cls(counts, shots.pop())


def born_probabilities(rho: QubitState) -> dict[str, float]:
    """Probability of the 'plus' outcome (H, D, R) in each basis."""
    x, y, z = rho.bloch
    probs = {"HV": 0.5 * (1 + z), "DA": 0.5 * (1 + x), "RL": 0.5 * (1 + y)}
    return {k: float(np.clip(v, 0.0, 1.0)) for k, v in probs.items()}


def state_from_probabilities(probs: Mapping[str, float]) -> QubitState:
    """Linear inversion, then projection onto the Bloch ball if needed."""
    r = np.array([2 * probs["DA"] - 1, 2 * probs["RL"] - 1, 2 * probs["HV"] - 1], dtype=float)
    norm = np.linalg.norm(r)
    # for a qubit, clamping the negative eigenvalue and renormalising is radial
    # projection of the Bloch vector onto the unit sphere
    if norm > 1.0:
        r = r / norm
    return QubitState.from_bloch(*r)


def sample_counts(rho: QubitState, shots: int, seed=None) -> CountData:
    if shots < 1:
        raise ValueError("shots must be at least 1")
    rng = np.random.default_rng(seed)
    probs = born_probabilities(rho)
    counts = {}
    for basis in BASES:
        plus = int(rng.binomial(shots, probs[basis]))
        counts[basis] = (plus, shots - plus)
    return CountData(counts, shots)


def reconstruct(counts: CountData) -> QubitState:
    probs = {b: counts.counts[b][0] / counts.shots for b in BASES}
    return state_from_probabilities(probs)


@dataclass(frozen=True)
class TomographyRecord:
    counts: Optional[CountData]  # None for noiseless (exact-probability) records
    state: QubitState
    ensemble: tuple[QubitState, ...] = field(default=(), repr=False)


def _seed_sequence(seed) -> np.random.SeedSequence:
    return seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)


def _resample_seeds(seed, n: int) -> list[np.random.SeedSequence]:
    return _seed_sequence(seed).spawn(n) if n else []


def tomograph(rho: QubitState, shots: Optional[int], resamples: int = 0, seed=None) -> TomographyRecord:
    """Measure ``rho`` and build the bootstrap ensemble.

    ``shots=None`` is the infinite-shot limit: the state is recovered from
    exact probabilities and every ensemble member equals it.
    """
    if shots is None:
        state = state_from_probabilities(born_probabilities(rho))
        return TomographyRecord(None, state, (state,) * resamples)
    ss = _seed_sequence(seed)
    measure_seed, boot_seed = ss.spawn(2)
    counts = sample_counts(rho, shots, measure_seed)
    state = reconstruct(counts)
    ensemble = tuple(reconstruct(sample_counts(state, shots, s)) for s in _resample_seeds(boot_seed, resamples))
    return TomographyRecord(counts, state, ensemble)


@dataclass(frozen=True)
class MonteCarloSummary:
    mean: dict[str, float]
    std: dict[str, float]
    used: int
    failed: int


def monte_carlo_bounds(
    records: Sequence[TomographyRecord],
    bound_fn: Callable[..., Mapping[str, float]],
    order: Optional[Sequence[int]] = None,
) -> MonteCarloSummary:
    """Recompute ``bound_fn`` on every bootstrap replicate and summarise.

    ``bound_fn`` receives one state per record and returns named bounds.
    Replicates on which it raises are dropped and counted in ``failed``.
    ``order`` permutes the evaluation order; the result does not depend on it.
    """
    sizes = {len(r.ensemble) for r in records}
    if len(sizes) != 1:
        raise ValueError("records must carry ensembles of equal size")
    n = sizes.pop()
    if n < 2:
        raise ValueError("need at least two bootstrap replicates")
    idx = list(range(n)) if order is None else list(order)
    results: dict[int, Mapping[str, float]] = {}
    failed = 0
    for b in idx:
        try:
            results[b] = bound_fn(*(r.ensemble[b] for r in records))
        except (ValueError, ArithmeticError):
            failed += 1
    if not results:
        raise RuntimeError("bound function failed on every replicate")
    keys = next(iter(results.values())).keys()
    ordered = [results[b] for b in sorted(results)]
    mean = {k: float(np.mean([r[k] for r in ordered])) for k in keys}
    std = {k: float(np.std([r[k] for r in ordered], ddof=1)) for k in keys}
    return MonteCarloSummary(mean, std, len(ordered), failed)
