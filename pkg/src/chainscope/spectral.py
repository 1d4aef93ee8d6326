"""End-site spectral data: exact, closed-form, and simulated measurement.

Three independent routes produce the pairs ``(lambda_n, C_1n)`` of
eigenvalues and end-site weights:

* :func:`end_site_spectrum` diagonalises the chain Hamiltonian;
* :func:`homogeneous_spectrum` evaluates the closed form of a uniform chain;
* :func:`synthesize_end_signal` followed by :func:`extract_spectrum` mimics a
  measurement: the end-site amplitude ``c_1(t)`` is sampled and its peaks
  are read off a discrete Fourier transform.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.linalg import eigh_tridiagonal

from chainscope.chain import ChainSpec, TridiagonalMatrix, build_hamiltonian


class ResolutionError(ValueError):
    """Two accepted spectral peaks lie within one frequency bin."""


@dataclass(frozen=True, eq=False)
class SpectralData:
    """Eigenvalues with their end-site weights.

    ``complete`` is False whenever modes may be missing (truncated or
    unresolved); a complete spectrum has weights summing to one.
    """

    lambdas: np.ndarray
    weights: np.ndarray
    complete: bool = True

    def __post_init__(self):
        lam = np.array(self.lambdas, dtype=float).reshape(-1)
        w = np.array(self.weights, dtype=float).reshape(-1)
        if lam.shape != w.shape:
            raise ValueError(f"{lam.size} eigenvalues but {w.size} weights")
        if not (np.all(np.isfinite(lam)) and np.all(np.isfinite(w))):
            raise ValueError("spectral data must be finite")
        if np.any(np.diff(lam) <= 0):
            raise ValueError("eigenvalues must be strictly increasing")
        if np.any(w < 0):
            raise ValueError("weights must be nonnegative")
        if self.complete and lam.size and abs(w.sum() - 1.0) > 1e-10:
            raise ValueError(f"complete spectrum has weight sum {w.sum()!r}, expected 1")
        lam.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "lambdas", lam)
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return int(self.lambdas.size)

    def __eq__(self, other):
        if not isinstance(other, SpectralData):
            return NotImplemented
        return (
            self.complete == other.complete
            and np.array_equal(self.lambdas, other.lambdas)
            and np.array_equal(self.weights, other.weights)
        )

    @property
    def modes(self):
        return list(zip(self.lambdas.tolist(), self.weights.tolist()))


@dataclass(frozen=True, eq=False)
class TimeSignal:
    """Uniformly sampled end-site amplitude, ``samples[k] = c_1(k * dt)``."""

    dt: float
    samples: np.ndarray

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        s = np.array(self.samples, dtype=complex).reshape(-1)
        if s.size < 2:
            raise ValueError("a time signal needs at least two samples")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def duration(self) -> float:
        return self.dt * self.samples.size

    @property
    def bin_width(self) -> float:
        """Natural frequency resolution ``2 pi / T``."""
        return 2.0 * np.pi / self.duration


def eigendecompose(matrix: TridiagonalMatrix) -> Tuple[np.ndarray, np.ndarray]:
    """All eigenpairs of a symmetric tridiagonal matrix.

    Returns
    -------
    eigenvalues : numpy.ndarray
        Ascending, shape ``(N,)``.
    eigenvectors : numpy.ndarray
        Unit columns, shape ``(N, N)``; column ``n`` pairs with
        ``eigenvalues[n]`` and has a nonnegative first component.
    """
    if matrix.size == 1:
        return matrix.diagonal.copy(), np.ones((1, 1))
    w, v = eigh_tridiagonal(matrix.diagonal, matrix.off_diagonal, lapack_driver="stemr")
    v = v * np.where(v[0] < 0, -1.0, 1.0)
    return w, v


def end_site_spectrum(spec: ChainSpec) -> SpectralData:
    w, v = eigendecompose(build_hamiltonian(spec))
    return SpectralData(w, v[0] ** 2, complete=True)


def homogeneous_spectrum(n_sites: int, epsilon: float = 0.0, j: float = 1.0) -> SpectralData:
    """Closed-form spectrum of the uniform chain.

    ``lambda_n = epsilon + 2 j cos(n pi / (N + 1))`` with weights
    ``2 / (N + 1) * sin^2(n pi / (N + 1))``, listed in ascending order.
    """
    if n_sites < 1:
        raise ValueError("n_sites must be positive")
    if not j > 0:
        raise ValueError("j must be positive")
    n = np.arange(n_sites, 0, -1)
    phase = n * np.pi / (n_sites + 1)
    lambdas = epsilon + 2.0 * j * np.cos(phase)
    weights = 2.0 / (n_sites + 1) * np.sin(phase) ** 2
    return SpectralData(lambdas, weights, complete=True)


def default_time_grid(max_abs_lambda: float) -> Tuple[float, int]:
    """Sampling interval and sample count used when a scenario gives none."""
    return 0.1 / max(1.0, abs(max_abs_lambda)), 2**16


def synthesize_end_signal(spectrum: SpectralData, dt: float, n_samples: int) -> TimeSignal:
    """Sample ``c_1(t) = sum_n C_1n exp(-i lambda_n t)`` at ``t = k dt``."""
    if not dt > 0 or n_samples < 2:
        raise ValueError("need dt > 0 and at least two samples")
    max_abs = float(np.max(np.abs(spectrum.lambdas))) if len(spectrum) else 0.0
    if dt * max_abs >= np.pi:
        raise ValueError(
            f"dt={dt} undersamples the spectrum: dt * max|lambda| = {dt * max_abs:.4g} >= pi"
        )
    t = dt * np.arange(n_samples)
    samples = np.zeros(n_samples, dtype=complex)
    for lam, c in zip(spectrum.lambdas, spectrum.weights):
        samples += c * np.exp(-1j * lam * t)
    return TimeSignal(dt, samples)


def _dirichlet(theta, n):
    # sum_{m=0}^{n-1} exp(i theta m)
    theta = np.asarray(theta, dtype=float)
    near = np.abs(np.sin(theta / 2)) < 1e-12
    z = np.exp(1j * np.where(near, 0.5, theta))
    return np.where(near, n, (1 - z**n) / (1 - z))


def _parabolic_offset(left, centre, right):
    denom = left - 2.0 * centre + right
    if denom == 0:
        return 0.0
    return float(np.clip(0.5 * (left - right) / denom, -0.5, 0.5))


def _check_resolved(lam, bin_width):
    gaps = np.diff(lam)
    if np.any(gaps < bin_width):
        j = int(np.argmin(gaps))
        raise ResolutionError(
            f"peaks at {lam[j]:.6g} and {lam[j + 1]:.6g} are within one bin "
            f"({bin_width:.3g}) of each other"
        )


def extract_spectrum(
    signal: TimeSignal,
    peak_floor: float,
    pad_factor: int = 4,
    refine_passes: int = 3,
) -> SpectralData:
    """Read eigenvalues and weights off the peaks of a sampled end-site signal.

    The spectrum ``Y(w) = (1/n) sum_m x_m exp(i w m dt)`` is evaluated on a
    grid ``pad_factor`` times finer than the natural bin ``2 pi / T`` by a
    zero-padded FFT, so that an on-grid mode of weight ``C`` has height
    ``C`` (the rectangular window's coherent gain is one). Local maxima above
    ``peak_floor`` are candidates; a candidate is dropped as a sidelobe when
    its height does not exceed the summed Dirichlet-kernel envelope of the
    stronger peaks already accepted. Positions are refined by three-point
    parabolic interpolation, and heights by a joint least-squares fit of
    complex amplitudes at the refined positions, which removes mutual
    leakage. Refinement alternates ``refine_passes`` times, each pass
    re-centring every peak on the spectrum with the other fitted modes
    subtracted.

    Raises
    ------
    ResolutionError
        If two accepted peaks are closer than one natural bin.
    """
    if peak_floor < 0:
        raise ValueError("peak_floor must be nonnegative")
    if pad_factor < 1:
        raise ValueError("pad_factor must be at least 1")
    x = signal.samples
    n = x.size
    dt = signal.dt
    n_fft = pad_factor * n
    fine = 2.0 * np.pi / (n_fft * dt)
    spec = np.fft.fftshift(np.fft.ifft(x, n_fft)) * pad_factor
    omega = np.fft.fftshift(np.fft.fftfreq(n_fft, dt)) * 2.0 * np.pi
    mag = np.abs(spec)

    inner = mag[1:-1]
    is_max = (inner > mag[:-2]) & (inner >= mag[2:]) & (inner > peak_floor)
    cand = np.flatnonzero(is_max) + 1
    cand = cand[np.argsort(-mag[cand], kind="stable")]

    accepted = []
    for k in cand:
        leak = 0.0
        for a in accepted:
            d = abs(k - a) / pad_factor
            if d < 0.5:
                leak = np.inf
                break
            leak += 1.1 * mag[a] / (n * abs(np.sin(np.pi * d / n)))
        if mag[k] > leak:
            accepted.append(k)
    bins = np.array(sorted(accepted), dtype=int)
    if bins.size == 0:
        return SpectralData([], [], complete=False)

    lam = np.empty(bins.size)
    for j, k in enumerate(bins):
        lam[j] = omega[k] + _parabolic_offset(mag[k - 1], mag[k], mag[k + 1]) * fine
    _check_resolved(np.sort(lam), signal.bin_width)

    t = dt * np.arange(n)
    stencil = np.array([-fine, 0.0, fine])

    def fit_amplitudes(lam):
        b = np.array([np.exp(1j * l * t) @ x for l in lam])
        gram = _dirichlet((lam[:, None] - lam[None, :]) * dt, n)
        return np.linalg.solve(gram, b)

    amps = fit_amplitudes(lam)
    for _ in range(refine_passes):
        for j in range(lam.size):
            w3 = lam[j] + stencil
            y3 = np.exp(1j * np.outer(w3, t)) @ x / n
            others = np.delete(np.arange(lam.size), j)
            if others.size:
                y3 -= _dirichlet((w3[:, None] - lam[None, others]) * dt, n) @ amps[others] / n
            lam[j] += _parabolic_offset(*np.abs(y3)) * fine
        amps = fit_amplitudes(lam)

    order = np.argsort(lam)
    _check_resolved(lam[order], signal.bin_width)
    return SpectralData(lam[order], np.abs(amps)[order], complete=False)
