"""Bounds on a convex coefficient from evolved probe states, and the verdict.

The state of interest is ``xi1 = p xi2 + (1 - p) xi3`` with commuting
references. Probes rho1, rho2, rho3 interact with xi1, xi2, xi3 through the
same (unknown) coupling; only the evolved probe states phi_i are measured.
Two independent routes bound p:

* alpha-fidelity:  1 - [F(phi1, phi3) / F(rho1, rho3)]^(1/a3) <= p <= [F(phi1, phi2) / F(rho1, rho2)]^(1/a2)
* trace distance:  D(phi1, phi3) - D(rho1, rho3) <= p <= 1 - [D(phi1, phi2) - D(rho1, rho2)]
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Optional, Sequence

import numpy as np

from .dephasing import Verdict, a_crit_fit, a_crit_numeric
from .qubit import QubitState, alpha_fidelity, trace_distance

DEFAULT_ALPHA_GRID = tuple(round(0.5 + 0.05 * k, 2) for k in range(10)) + (0.99,)
FIT_NUMERIC_TOLERANCE = 0.01


class ProtocolError(ValueError):
    """Raised when the probe design cannot produce a bound (e.g. orthogonal references)."""


class ACritSource(str, Enum):
    KNOWN = "known"
    PROBED = "probed"

    def __str__(self):
        return self.value


def _clamp(value: float, name: str, flags: list[str]) -> float:
    if value < 0.0:
        flags.append(f"{name}_clamped_low")
        return 0.0
    if value > 1.0:
        flags.append(f"{name}_clamped_high")
        return 1.0
    return value


def _fidelity_ratio(phi_a, phi_b, rho_a, rho_b, alpha) -> float:
    denom = alpha_fidelity(rho_a, rho_b, alpha)
    if denom <= 0.0:
        raise ProtocolError("reference probes have orthogonal supports; fidelity ratio undefined")
    return alpha_fidelity(phi_a, phi_b, alpha) / denom


def coefficient_bounds_fidelity(phi1, phi2, phi3, rho1, rho2, rho3, alpha2=0.5, alpha3=0.5, flags=None):
    """(lower, upper) on p from the alpha-fidelity route, clamped to [0, 1].

    Clamping is recorded in ``flags`` when a list is supplied.
    """
    flags = [] if flags is None else flags
    upper = _fidelity_ratio(phi1, phi2, rho1, rho2, alpha2) ** (1.0 / alpha2)
    lower = 1.0 - _fidelity_ratio(phi1, phi3, rho1, rho3, alpha3) ** (1.0 / alpha3)
    return _clamp(lower, "lower_fid", flags), _clamp(upper, "upper_fid", flags)


def coefficient_bounds_trace(phi1, phi2, phi3, rho1, rho2, rho3, flags=None):
    """(lower, upper) on p from the trace-distance route, clamped to [0, 1]."""
    flags = [] if flags is None else flags
    lower = trace_distance(phi1, phi3) - trace_distance(rho1, rho3)
    upper = 1.0 - (trace_distance(phi1, phi2) - trace_distance(rho1, rho2))
    return _clamp(lower, "lower_td", flags), _clamp(upper, "upper_td", flags)


def delta_eta_lower_bound(phi2, phi3, rho2, rho3, alpha: float, flags=None) -> float:
    """Lower bound on the peak separation delta_eta = delta_mu / sigma.

    Noise can push the fidelity ratio above 1; the bound is then vacuous
    and 0 is returned with a ``delta_eta_noise`` flag.
    """
    if not 0.5 <= alpha < 1.0:
        raise ValueError(f"alpha must lie in [1/2, 1), got {alpha!r}")
    flags = [] if flags is None else flags
    ratio = _fidelity_ratio(phi2, phi3, rho2, rho3, alpha)
    if ratio > 1.0:
        flags.append("delta_eta_noise")
        return 0.0
    if ratio <= 0.0:
        return math.inf
    return math.sqrt(2.0 * math.log(ratio) / (alpha * (alpha - 1.0)))


@dataclass
class ProbeBounds:
    lower_fid: float
    upper_fid: float
    lower_td: float
    upper_td: float
    alpha2: float = 0.5
    alpha3: float = 0.5
    lower_fid_std: float = 0.0
    upper_fid_std: float = 0.0
    lower_td_std: float = 0.0
    upper_td_std: float = 0.0
    flags: list[str] = field(default_factory=list)

    @property
    def best_lower(self) -> float:
        return max(self.lower_fid, self.lower_td)

    @property
    def best_upper(self) -> float:
        return min(self.upper_fid, self.upper_td)

    def values(self) -> dict[str, float]:
        return {
            "lower_fid": self.lower_fid,
            "upper_fid": self.upper_fid,
            "lower_td": self.lower_td,
            "upper_td": self.upper_td,
        }

    def with_std(self, std: dict[str, float]) -> "ProbeBounds":
        return replace(self, **{f"{k}_std": v for k, v in std.items()})


def probe_bounds(phis, rhos, alpha2=0.5, alpha3=0.5) -> ProbeBounds:
    """Both bound routes for one measurement of (phi1, phi2, phi3)."""
    flags: list[str] = []
    lf, uf = coefficient_bounds_fidelity(*phis, *rhos, alpha2, alpha3, flags=flags)
    lt, ut = coefficient_bounds_trace(*phis, *rhos, flags=flags)
    bounds = ProbeBounds(lf, uf, lt, ut, alpha2, alpha3, flags=flags)
    if bounds.lower_fid > bounds.upper_fid or bounds.lower_td > bounds.upper_td or bounds.best_lower > bounds.best_upper:
        flags.append("inconsistent_bounds")
    return bounds


def optimize_alpha(bound_kind: str, states: Sequence[QubitState], alpha_grid: Iterable[float] = DEFAULT_ALPHA_GRID):
    """Grid search for the tightest bound of one kind.

    ``bound_kind`` is ``"upper"`` (states = phi1, phi2, rho1, rho2; minimised),
    ``"lower"`` (states = phi1, phi3, rho1, rho3; maximised) or
    ``"delta_eta"`` (states = phi2, phi3, rho2, rho3; maximised).
    Ties go to the smallest alpha.
    """
    grid = sorted(alpha_grid)
    if not grid:
        raise ValueError("alpha grid is empty")
    if bound_kind == "upper":
        fn, better = (lambda a: _fidelity_ratio(*states, a) ** (1.0 / a)), (lambda new, old: new < old)
    elif bound_kind == "lower":
        fn, better = (lambda a: 1.0 - _fidelity_ratio(*states, a) ** (1.0 / a)), (lambda new, old: new > old)
    elif bound_kind == "delta_eta":
        fn, better = (lambda a: delta_eta_lower_bound(*states, a)), (lambda new, old: new > old)
    else:
        raise ValueError(f"unknown bound kind {bound_kind!r}")
    best_alpha, best = grid[0], fn(grid[0])
    for a in grid[1:]:
        value = fn(a)
        if better(value, best):
            best_alpha, best = a, value
    return best_alpha, best


@dataclass
class ProbedACrit:
    """Pessimistic critical amplitude obtained from a probed delta_eta bound."""

    value: float
    delta_eta_bound: float
    alpha: float
    fit_value: float
    numeric_value: Optional[float]
    notes: list[str] = field(default_factory=list)


def probed_a_crit(phi2, phi3, rho2, rho3, alpha_grid=DEFAULT_ALPHA_GRID) -> ProbedACrit:
    """Upper bound on A_crit from the best delta_eta lower bound over ``alpha_grid``.

    The fitted curve is used; if the numeric solver disagrees by more than
    0.01 the larger (more pessimistic) value is taken and both are noted.
    """
    alpha, eta = optimize_alpha("delta_eta", (phi2, phi3, rho2, rho3), alpha_grid)
    fit = a_crit_fit(eta)
    numeric = a_crit_numeric(eta) if math.isfinite(eta) else 0.0
    numeric_or_half = 0.5 if numeric is None else numeric
    notes = []
    value = fit
    if abs(numeric_or_half - fit) > FIT_NUMERIC_TOLERANCE:
        value = max(fit, numeric_or_half)
        notes.append(f"acrit_fit={fit:.6g};acrit_numeric={numeric_or_half:.6g}")
    return ProbedACrit(min(value, 0.5), eta, alpha, fit, numeric, notes)


@dataclass
class ProbeVerdict:
    bounds: ProbeBounds
    a_crit: float
    a_crit_source: ACritSource
    decision: Verdict
    notes: list[str] = field(default_factory=list)

    def is_consistent(self) -> bool:
        return decide(self.bounds.best_lower, self.bounds.best_upper, self.a_crit)[0] is self.decision


def decide(lower: float, upper: float, a_crit: float) -> tuple[Verdict, list[str]]:
    """The decision rule on its own, for audits of stored rows."""
    if lower > upper:
        return Verdict.INCONCLUSIVE, ["inconsistent_bounds"]
    if lower >= a_crit and upper <= 1.0 - a_crit:
        return Verdict.NON_MARKOVIAN, []
    if upper < a_crit or lower > 1.0 - a_crit:
        return Verdict.MARKOVIAN, []
    return Verdict.INCONCLUSIVE, []


def verdict(bounds: ProbeBounds, a_crit: float, source: ACritSource | str = ACritSource.KNOWN, notes=()) -> ProbeVerdict:
    if not 0.0 <= a_crit <= 0.5:
        raise ValueError(f"a_crit must lie in [0, 1/2], got {a_crit!r}")
    decision, extra = decide(bounds.best_lower, bounds.best_upper, a_crit)
    return ProbeVerdict(bounds, a_crit, ACritSource(source), decision, [*notes, *extra])


# --- commuting mixtures and derived quantities -------------------------------------------


@dataclass(frozen=True)
class CommutingMixture:
    """xi1 = p xi2 + (1-p) xi3 with xi2, xi3 diagonal in a shared basis."""

    lambdas: tuple[float, ...]
    nus: tuple[float, ...]
    p: float
    basis: str = "computational"

    def __post_init__(self):
        lam, nu = np.asarray(self.lambdas, float), np.asarray(self.nus, float)
        if lam.shape != nu.shape:
            raise ValueError("eigenvalue lists must have equal length")
        for name, v in (("lambdas", lam), ("nus", nu)):
            if np.any(v < 0) or abs(v.sum() - 1.0) > 1e-12:
                raise ValueError(f"{name} must be a probability vector")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")

    @property
    def dimension(self) -> int:
        return len(self.lambdas)

    def xi1(self) -> np.ndarray:
        return self.p * np.asarray(self.lambdas) + (1 - self.p) * np.asarray(self.nus)

    def matrices(self):
        return tuple(np.diag(v).astype(complex) for v in (self.xi1(), self.lambdas, self.nus))


def commuting_alpha_fidelity(x, y, alpha: float) -> float:
    """sum_k x_k^alpha y_k^(1-alpha) for diagonal states."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    return float(np.sum(x**alpha * y ** (1 - alpha)))


def commuting_trace_distance(x, y) -> float:
    return float(0.5 * np.sum(np.abs(np.asarray(x, float) - np.asarray(y, float))))


@dataclass(frozen=True)
class ComponentProps:
    purity: float
    entropy: float  # nats


def _interval(f, p_lo, p_hi, interior=()):
    pts = [p_lo, p_hi, *[q for q in interior if p_lo < q < p_hi]]
    vals = [f(q) for q in pts]
    return min(vals), max(vals)


def _xlogx(p):
    return 0.0 if p <= 0 else p * math.log(p)


def derived_quantity_bounds(p_bounds, xi2_props: ComponentProps, xi3_props: ComponentProps, orthogonal: bool):
    """Intervals for purity, entropy and concurrence of xi1 implied by [p_lo, p_hi].

    Only valid for orthogonal components, which the caller must assert.
    The concurrence interval assumes xi2 and xi3 are two Bell states.
    Returns None when orthogonality is not declared.
    """
    if not orthogonal:
        return None
    p_lo, p_hi = max(0.0, p_bounds[0]), min(1.0, p_bounds[1])
    if p_lo > p_hi:
        raise ValueError(f"empty interval {p_bounds!r}")
    P2, P3 = xi2_props.purity, xi3_props.purity
    S2, S3 = xi2_props.entropy, xi3_props.entropy

    def purity_of(p):
        return P2 * p * p + P3 * (1 - p) ** 2

    def entropy_of(p):
        return p * S2 + (1 - p) * S3 - (_xlogx(p) + _xlogx(1 - p))

    p_purity = P3 / (P2 + P3)
    p_entropy = 1.0 / (1.0 + math.exp(S3 - S2))
    return {
        "purity": _interval(purity_of, p_lo, p_hi, (p_purity,)),
        "entropy": _interval(entropy_of, p_lo, p_hi, (p_entropy,)),
        "concurrence": _interval(lambda p: abs(2 * p - 1), p_lo, p_hi, (0.5,)),
    }


def eigenvalue_upper_bounds(phi1, rho1, references: Sequence[tuple], alpha: float = 0.5) -> list[float]:
    """Upper bounds on every eigenvalue of xi1, one reference eigenstate each.

    ``references`` holds (phi_k, rho_k): the probe evolved with the k-th
    eigenstate as system state, and its initial state.
    """
    out = []
    for phi_k, rho_k in references:
        out.append(min(1.0, _fidelity_ratio(phi1, phi_k, rho1, rho_k, alpha) ** (1.0 / alpha)))
    return out
