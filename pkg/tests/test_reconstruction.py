import warnings

import numpy as np
import pytest
import scipy.linalg

from chainscope import (
    BrokenBondWarning,
    SpectralData,
    TruncationModel,
    apply_truncation,
    end_site_spectrum,
    homogeneous_chain,
    homogeneous_spectrum,
    normalize_spectrum,
    random_chain,
    reconstruct_couplings,
)


def householder_couplings(lambdas, weights):
    """Jacobi matrix with spectrum ``lambdas`` and first-row weights, via orthogonal reduction."""
    q = np.sqrt(weights)
    k = q.size
    # orthogonal basis whose first vector is q
    basis = np.linalg.qr(np.column_stack([q, np.eye(k)[:, : k - 1]]))[0]
    basis[:, 0] *= np.sign(basis[:, 0] @ q)
    b = basis.T @ np.diag(lambdas) @ basis
    t = scipy.linalg.hessenberg(b)
    return np.abs(np.diag(t, -1))


def test_dimer():
    r = reconstruct_couplings(homogeneous_spectrum(2), [0.0, 0.0])
    np.testing.assert_allclose(r.couplings_est, [1.0], atol=1e-15)
    assert r.modes_used == 2
    assert r.aborted_at is None


def test_six_site_homogeneous():
    r = reconstruct_couplings(homogeneous_spectrum(6), np.zeros(6))
    assert np.max(np.abs(r.couplings_est - 1)) <= 1e-10


@pytest.mark.parametrize("seed", range(3))
def test_random_fifty_site_round_trip(seed):
    spec = random_chain(50, 0.9, 1.1, seed=seed)
    r = reconstruct_couplings(end_site_spectrum(spec), spec.energies)
    assert np.max(np.abs(r.couplings_est - spec.couplings)) <= 1e-8


def test_nonzero_site_energies():
    rng = np.random.default_rng(5)
    spec = random_chain(30, 0.5, 1.5, energies=rng.normal(size=30), seed=5)
    r = reconstruct_couplings(end_site_spectrum(spec), spec.energies)
    np.testing.assert_allclose(r.couplings_est, spec.couplings, rtol=1e-9)


def test_matches_householder_oracle_on_truncated_data():
    exact = homogeneous_spectrum(30)
    kept = normalize_spectrum(apply_truncation(exact, TruncationModel(1e-2)))
    r = reconstruct_couplings(kept, np.zeros(30))
    oracle = householder_couplings(kept.lambdas, kept.weights)
    k = len(kept) - 1
    np.testing.assert_allclose(r.couplings_est[:k], oracle, rtol=1e-8)


def test_householder_oracle_recovers_known_chain():
    spec = random_chain(12, 0.5, 1.5, seed=9)
    s = end_site_spectrum(spec)
    np.testing.assert_allclose(householder_couplings(s.lambdas, s.weights), spec.couplings, rtol=1e-10)


def test_single_site_has_no_bonds():
    r = reconstruct_couplings(SpectralData([0.4], [1.0]), [0.4])
    assert r.couplings_est.size == 0


def test_rejects_unnormalized_spectrum():
    raw = SpectralData([-1.0, 1.0], [0.2, 0.2], complete=False)
    with pytest.raises(ValueError, match="normalise"):
        reconstruct_couplings(raw, [0.0, 0.0])
    r = reconstruct_couplings(raw, [0.0, 0.0], require_normalized=False)
    assert r.couplings_est[0] == pytest.approx(np.sqrt(0.4))


def test_zero_weight_mode_is_skipped_exactly():
    s = homogeneous_spectrum(20)
    w = s.weights.copy()
    w[[0, 7]] = 0.0
    w /= w.sum()
    with_zeros = SpectralData(s.lambdas, w, complete=False)
    keep = w > 0
    removed = SpectralData(s.lambdas[keep], w[keep], complete=False)
    a = reconstruct_couplings(with_zeros, np.zeros(20))
    b = reconstruct_couplings(removed, np.zeros(20))
    assert np.array_equal(a.couplings_est, b.couplings_est, equal_nan=True)
    assert a.modes_used == b.modes_used == 18


def test_intermediate_rows_stay_normalised():
    spec = random_chain(40, 0.8, 1.2, seed=1)
    s = end_site_spectrum(spec)
    r = reconstruct_couplings(s, spec.energies, keep_rows=True)
    assert r.coefficients.shape == (40, 40)
    np.testing.assert_array_equal(r.coefficients[0], s.weights)
    norms = np.sum(r.coefficients**2 / s.weights, axis=1)
    assert np.max(np.abs(norms - 1)) <= 1e-8


def test_broken_bond_when_modes_run_out():
    with pytest.warns(BrokenBondWarning, match="broken bond at 2"):
        r = reconstruct_couplings(homogeneous_spectrum(2), np.zeros(4))
    assert r.aborted_at == 2
    assert r.couplings_est[0] == pytest.approx(1.0)
    assert np.all(np.isnan(r.couplings_est[1:]))


def test_no_warning_on_clean_reconstruction():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        reconstruct_couplings(homogeneous_spectrum(10), np.zeros(10))


def test_scale_covariance_power_of_two_is_exact():
    spec = random_chain(25, 0.5, 1.5, energies=np.linspace(-0.3, 0.3, 25), seed=4)
    s = end_site_spectrum(spec)
    base = reconstruct_couplings(s, spec.energies).couplings_est
    scaled = reconstruct_couplings(SpectralData(4 * s.lambdas, s.weights), 4 * spec.energies)
    assert np.array_equal(scaled.couplings_est, 4 * base)


def test_normalize_spectrum_uniform_rescale():
    out = normalize_spectrum(SpectralData([-1.0, 1.0], [0.2, 0.2], complete=False))
    np.testing.assert_allclose(out.weights, [0.5, 0.5], atol=1e-15)
    np.testing.assert_array_equal(out.lambdas, [-1.0, 1.0])
    assert not out.complete


def test_normalize_spectrum_idempotent():
    s = homogeneous_spectrum(33)
    assert np.max(np.abs(normalize_spectrum(s).weights - s.weights)) <= 1e-15
    assert normalize_spectrum(s).complete


def test_normalize_after_band_edge_removal():
    s = homogeneous_spectrum(100)
    inner = SpectralData(s.lambdas[10:90], s.weights[10:90], complete=False)
    assert abs(normalize_spectrum(inner).weights.sum() - 1) <= 1e-15


def test_normalize_rejects_all_zero():
    with pytest.raises(ValueError):
        normalize_spectrum(SpectralData([0.0, 1.0], [0.0, 0.0], complete=False))


def test_first_bond_is_second_moment():
    spec = random_chain(8, 0.5, 1.5, energies=np.full(8, 0.25), seed=2)
    s = end_site_spectrum(spec)
    r = reconstruct_couplings(s, spec.energies)
    direct = np.sqrt(np.sum((s.lambdas - 0.25) ** 2 * s.weights))
    assert r.couplings_est[0] == pytest.approx(direct, rel=1e-14)
    assert r.couplings_est[0] == pytest.approx(spec.couplings[0], rel=1e-12)


def test_homogeneous_long_chain():
    n = 2000
    r = reconstruct_couplings(end_site_spectrum(homogeneous_chain(n)), np.zeros(n))
    assert np.max(np.abs(r.couplings_est - 1)) <= 1e-8
