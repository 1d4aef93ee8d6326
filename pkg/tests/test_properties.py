"""Randomized invariants of the forward model, the recursion and the noise models."""

import warnings

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from chainscope import (
    JitterModel,
    SpectralData,
    TruncationModel,
    apply_jitter,
    apply_truncation,
    end_site_spectrum,
    random_chain,
    reconstruct_couplings,
    reconstruction_distance,
)

seeds = st.integers(0, 2**32 - 1)
sizes = st.integers(2, 60)
# disordered site energies localize the end modes quickly; beyond about 30
# sites the recursion's own rounding error swamps any covariance check
conditioned = st.integers(2, 30)


def _chain(n, seed, with_energies=True):
    rng = np.random.default_rng(seed)
    energies = rng.uniform(-0.5, 0.5, n) if with_energies else None
    return random_chain(n, 0.5, 1.5, energies=energies, seed=seed)


@settings(max_examples=60, deadline=None)
@given(sizes, seeds)
def test_spectrum_simple_and_positive(n, seed):
    s = end_site_spectrum(_chain(n, seed))
    assert np.all(np.diff(s.lambdas) > 0)
    assert np.all(s.weights > 0)
    assert abs(s.weights.sum() - 1) <= 1e-10


@settings(max_examples=60, deadline=None)
@given(conditioned, seeds, st.floats(-3, 3))
def test_shift_covariance(n, seed, shift):
    spec = _chain(n, seed)
    s = end_site_spectrum(spec)
    base = reconstruct_couplings(s, spec.energies).couplings_est
    moved = reconstruct_couplings(SpectralData(s.lambdas + shift, s.weights), spec.energies + shift)
    np.testing.assert_allclose(moved.couplings_est, base, rtol=1e-8)


@settings(max_examples=60, deadline=None)
@given(conditioned, seeds, st.floats(0.1, 10))
def test_scale_covariance(n, seed, scale):
    spec = _chain(n, seed)
    s = end_site_spectrum(spec)
    base = reconstruct_couplings(s, spec.energies).couplings_est
    scaled = reconstruct_couplings(SpectralData(scale * s.lambdas, s.weights), scale * spec.energies)
    np.testing.assert_allclose(scaled.couplings_est, scale * base, rtol=1e-8)


@settings(max_examples=60, deadline=None)
@given(st.integers(4, 40), seeds, st.data())
def test_zero_weight_modes_are_skipped(n, seed, data):
    spec = _chain(n, seed)
    s = end_site_spectrum(spec)
    drop = data.draw(st.sets(st.integers(0, n - 1), min_size=1, max_size=n - 2))
    w = s.weights.copy()
    w[list(drop)] = 0.0
    w /= w.sum()
    keep = w > 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        a = reconstruct_couplings(SpectralData(s.lambdas, w, False), spec.energies)
        b = reconstruct_couplings(SpectralData(s.lambdas[keep], w[keep], False), spec.energies)
    assert np.array_equal(a.couplings_est, b.couplings_est, equal_nan=True)
    assert a.aborted_at == b.aborted_at


@settings(max_examples=60, deadline=None)
@given(sizes, seeds, seeds)
def test_noise_free_models_are_identities(n, seed, sample):
    s = end_site_spectrum(_chain(n, seed))
    assert apply_truncation(s, TruncationModel(0.0)) == s
    assert apply_jitter(s, JitterModel(0.0, seed), sample) == s


@settings(max_examples=60, deadline=None)
@given(sizes, seeds, st.floats(0.01, 0.99))
def test_truncation_never_keeps_small_weights(n, seed, theta):
    s = end_site_spectrum(_chain(n, seed))
    out = apply_truncation(s, TruncationModel(theta))
    assert np.all(out.weights >= theta * s.weights.max())
    assert len(out) + np.sum(s.weights < theta * s.weights.max()) == len(s)


@settings(max_examples=60, deadline=None)
@given(sizes, seeds, st.floats(1e-4, 0.5), st.floats(1e-4, 0.5))
def test_distance_monotone_on_reconstructions(n, seed, tol_a, tol_b):
    spec = _chain(n, seed, with_energies=False)
    s = end_site_spectrum(spec)
    noisy = apply_jitter(s, JitterModel(0.02, seed), 0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        est = reconstruct_couplings(noisy, spec.energies).couplings_est
    lo, hi = sorted((tol_a, tol_b))
    assert reconstruction_distance(spec.couplings, est, lo) <= reconstruction_distance(spec.couplings, est, hi)
