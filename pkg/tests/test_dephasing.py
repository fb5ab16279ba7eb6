
import numpy as np
import pytest

from snapshot_probe.dephasing import (
    DephasingChannel,
    Verdict,
    a_crit_fit,
    a_crit_numeric,
    apply_channel,
    blp_condition,
    blp_mask,
    classify_intervals,
    kappa_abs,
    merge_runs,
    minimum_threshold,
    nonmarkovian_region,
)
from snapshot_probe.spectra import GaussianMixtureSpectrum, decoherence_function

SIGMA = 5.8e11
MU = 3.7e14


def revives(amp, delta_eta, tau):
    """Any increase of |kappa| on a fine tau grid."""
    return bool(np.any(np.diff(kappa_abs(amp, delta_eta, tau)) > 0))


def brute_force_a_crit(delta_eta, tau_max=20.0, step=2e-5):
    tau = np.arange(step, tau_max, step)
    lo, hi = 0.0, 0.5
    if not revives(hi, delta_eta, tau):
        return None
    for _ in range(30):
        mid = 0.5 * (lo + hi)
        lo, hi = (lo, mid) if revives(mid, delta_eta, tau) else (mid, hi)
    return hi


@pytest.mark.parametrize("delta_eta", [4.0, 8.0, 16.0])
def test_a_crit_against_brute_force(delta_eta):
    assert a_crit_numeric(delta_eta) == pytest.approx(brute_force_a_crit(delta_eta), abs=1e-4)


def test_a_crit_absent_at_zero_separation():
    assert a_crit_numeric(0.0) is None
    assert a_crit_fit(0.0) == pytest.approx(0.5, abs=5e-4)


def test_a_crit_fit_in_range_and_decreasing_on_grid():
    vals = [a_crit_fit(d) for d in range(0, 21)]
    assert all(0 < v <= 0.5 + 5e-4 for v in vals)
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_experimental_a_crit():
    assert a_crit_numeric(6.218) == pytest.approx(0.1007, abs=5e-4)


def test_minimum_threshold_consistent_with_a_crit():
    g = minimum_threshold(8.0)
    a = a_crit_numeric(8.0)
    assert a * (1 - a) == pytest.approx(g, rel=1e-9)


def test_blp_condition_vs_finite_difference():
    delta_eta, h = 10.0, 1e-7
    amps = np.linspace(0.0025, 0.9975, 200)
    taus = np.linspace(0.025, 5.0, 200)
    checked = 0
    for a in amps:
        for t in taus:
            d = kappa_abs(a, delta_eta, t + h) - kappa_abs(a, delta_eta, t - h)
            near_lo = kappa_abs(a, delta_eta, t - 1e-6 + h) - kappa_abs(a, delta_eta, t - 1e-6 - h)
            near_hi = kappa_abs(a, delta_eta, t + 1e-6 + h) - kappa_abs(a, delta_eta, t + 1e-6 - h)
            if np.sign(near_lo) != np.sign(near_hi):
                continue
            assert blp_condition(a, delta_eta, t) == bool(d > 0), (a, t)
            checked += 1
    assert checked > 39000


def test_blp_mask_matches_scalar():
    a = np.linspace(0.01, 0.99, 17)[:, None]
    t = np.linspace(0.05, 3.0, 23)[None, :]
    mask = blp_mask(a, 6.0, t)
    assert all(mask[i, j] == blp_condition(a[i, 0], 6.0, t[0, j]) for i in range(17) for j in range(23))


def test_blp_domain_errors():
    with pytest.raises(ValueError):
        blp_condition(1.5, 3.0, 1.0)
    with pytest.raises(ValueError):
        blp_condition(0.5, -1.0, 1.0)
    with pytest.raises(ValueError):
        blp_condition(0.5, 3.0, 0.0)


def test_single_peak_never_revives():
    assert not blp_mask(0.0, 5.0, np.linspace(0.01, 10, 1000)).any()
    labels = classify_intervals(0.0, (0.2, 0.8), np.linspace(0.01, 5, 500))
    assert set(labels) == {Verdict.MARKOVIAN}


def test_vacuous_bounds_never_verify_non_markovian():
    labels = classify_intervals(6.218, (0.0, 1.0), np.linspace(0.01, 5, 2000))
    assert Verdict.NON_MARKOVIAN not in labels
    assert {Verdict.MARKOVIAN, Verdict.INCONCLUSIVE} <= set(labels)


def test_region_band_contains_a_crit():
    region = nonmarkovian_region(6.218, np.linspace(0.01, 5, 5000))
    assert np.nanmin(region.a_minus) >= region.a_crit - 1e-9
    assert np.nanmin(region.a_minus) == pytest.approx(region.a_crit, abs=1e-3)


def test_merge_runs():
    tau = [0.1, 0.2, 0.3, 0.4]
    labs = [Verdict.MARKOVIAN, Verdict.MARKOVIAN, Verdict.INCONCLUSIVE, Verdict.MARKOVIAN]
    assert merge_runs(tau, labs) == [
        (Verdict.MARKOVIAN, 0.1, 0.2),
        (Verdict.INCONCLUSIVE, 0.3, 0.3),
        (Verdict.MARKOVIAN, 0.4, 0.4),
    ]


def test_channel_scales_coherence(plus):
    s = GaussianMixtureSpectrum.two_peak(0.4, MU, MU + 5 * SIGMA, SIGMA)
    ch = DephasingChannel.from_spectrum(s, 1.2 / SIGMA)
    out = apply_channel(ch, plus)
    assert out.coherence == pytest.approx(0.5 * decoherence_function(s, 1.2 / SIGMA))
    assert ch.tau == pytest.approx(1.2)
    assert out.matrix[0, 0].real == pytest.approx(0.5)


def test_kappa_closed_form_cross_check():
    s = GaussianMixtureSpectrum.two_peak(0.4, MU, MU + 5 * SIGMA, SIGMA)
    for tau in (0.3, 1.1, 2.5):
        assert abs(decoherence_function(s, tau / SIGMA)) == pytest.approx(kappa_abs(0.4, 5.0, tau), rel=1e-12)


def test_channel_rejects_large_kappa():
    with pytest.raises(ValueError):
        DephasingChannel(1.1)
