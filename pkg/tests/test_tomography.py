import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from snapshot_probe.qubit import QubitState, random_state
from snapshot_probe.tomography import (
    BASES,
    CountData,
    born_probabilities,
    monte_carlo_bounds,
    reconstruct,
    sample_counts,
    state_from_probabilities,
    tomograph,
)


def test_right_circular_is_plus_sigma_y():
    r = QubitState.from_ket([1, 1j])
    assert born_probabilities(r)["RL"] == pytest.approx(1.0)


def test_noiseless_round_trip(rng):
    for _ in range(200):
        rho = random_state(rng, pure=rng.uniform() < 0.5)
        assert np.max(np.abs(tomograph(rho, None).state.matrix - rho.matrix)) <= 1e-12


def test_projection_onto_ball():
    s = state_from_probabilities({"HV": 1.0, "DA": 1.0, "RL": 0.5})
    assert np.linalg.norm(s.bloch) == pytest.approx(1.0)
    assert np.allclose(s.bloch, [1 / math.sqrt(2), 0, 1 / math.sqrt(2)])


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_counts_within_five_sigma(seed):
    rho = QubitState.from_bloch(0.3, -0.5, 0.6)
    shots = 10_000
    data = sample_counts(rho, shots, seed)
    for b, p in born_probabilities(rho).items():
        sd = math.sqrt(shots * p * (1 - p))
        assert abs(data.counts[b][0] - shots * p) <= 5 * sd


def test_csv_round_trip():
    data = sample_counts(QubitState.plus(), 500, 1)
    again = CountData.from_csv(data.to_csv())
    assert again == data
    assert data.to_csv().splitlines()[0] == "basis,plus,minus,shots"


def test_count_validation():
    with pytest.raises(ValueError):
        CountData({b: (3, 3) for b in BASES}, 5)
    with pytest.raises(ValueError):
        sample_counts(QubitState.plus(), 0)


def test_reconstruction_converges():
    rho = QubitState.from_bloch(0.2, 0.4, -0.5)
    err = np.linalg.norm(reconstruct(sample_counts(rho, 10**7, 4)).bloch - rho.bloch)
    assert err < 5e-3


def test_tomograph_deterministic():
    rho = QubitState.from_bloch(0.1, 0.2, 0.3)
    a, b = tomograph(rho, 1000, 5, 42), tomograph(rho, 1000, 5, 42)
    assert a.counts == b.counts
    assert all(x.allclose(y, 0) for x, y in zip(a.ensemble, b.ensemble))
    assert tomograph(rho, 1000, 5, 43).counts != a.counts


def _coh(state):
    return {"x": float(state.bloch[0])}


def test_bootstrap_std_scales_as_inverse_sqrt_shots():
    rho = QubitState.from_bloch(0.5, 0.0, 0.0)
    stds = []
    for shots in (1_000, 16_000):
        rec = tomograph(rho, shots, 400, 7)
        stds.append(monte_carlo_bounds([rec], _coh).std["x"])
    assert stds[0] / stds[1] == pytest.approx(4.0, rel=0.15)
    # binomial oracle: std of 2f - 1 is 2 sqrt(p(1-p)/N)
    assert stds[1] == pytest.approx(2 * math.sqrt(0.75 * 0.25 / 16_000), rel=0.15)


def test_monte_carlo_order_independent():
    rec = tomograph(QubitState.plus(), 2000, 20, 3)
    a = monte_carlo_bounds([rec], _coh)
    b = monte_carlo_bounds([rec], _coh, order=list(reversed(range(20))))
    assert a.std["x"] == pytest.approx(b.std["x"], rel=1e-12)


def test_monte_carlo_counts_failures():
    rec = tomograph(QubitState.plus(), 200, 10, 3)
    calls = iter(range(100))

    def flaky(s):
        if next(calls) % 2:
            raise ValueError("boom")
        return {"x": float(s.bloch[0])}

    summary = monte_carlo_bounds([rec], flaky)
    assert summary.failed == 5 and summary.used == 5


def test_monte_carlo_needs_two():
    with pytest.raises(ValueError):
        monte_carlo_bounds([tomograph(QubitState.plus(), 10, 1, 0)], _coh)
