"""Measurement-error models and ensemble-averaged reconstruction.

Two mechanisms are modelled: weights too small relative to the largest
peak are lost (finite signal-to-noise ratio), and each measured eigenvalue
carries Gaussian jitter (finite spectral width).

Random numbers come from a counter-based Philox generator keyed, through
``numpy.random.SeedSequence``, on ``(base_seed, sample_index)``; normal
variates use numpy's ziggurat sampler. An ensemble is therefore a pure
function of its inputs and samples can be drawn in any order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from chainscope.reconstruction import (
    ReconstructionError,
    ReconstructionResult,
    _recurse,
)
from chainscope.spectral import SpectralData

RNG_SCHEME = "numpy-philox4x64-seedsequence/v1"


@dataclass(frozen=True)
class TruncationModel:
    """Drop modes whose weight is below ``theta`` times the largest weight."""

    theta: float = 0.0

    def __post_init__(self):
        if not 0 <= self.theta < 1:
            raise ValueError(f"theta must lie in [0, 1), got {self.theta}")


@dataclass(frozen=True)
class JitterModel:
    sigma: float = 0.0
    base_seed: int = 0

    def __post_init__(self):
        if not self.sigma >= 0:
            raise ValueError(f"sigma must be nonnegative, got {self.sigma}")
        if self.base_seed < 0:
            raise ValueError("base_seed must be unsigned")


@dataclass(frozen=True)
class EnsembleSpec:
    n_samples: int
    jitter: JitterModel
    aggregate: str = "mean"

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("an ensemble needs at least one sample")
        if self.aggregate not in ("mean", "median"):
            raise ValueError(f"aggregate must be 'mean' or 'median', got {self.aggregate!r}")


@dataclass(frozen=True, eq=False)
class EnsembleResult(ReconstructionResult):
    """Ensemble average; ``sample_counts[b]`` samples contributed to bond ``b + 1``."""

    sample_counts: Optional[np.ndarray] = None


def sample_rng(base_seed: int, sample_index: int) -> np.random.Generator:
    """Generator for one ensemble member."""
    seq = np.random.SeedSequence([int(base_seed), int(sample_index)])
    return np.random.Generator(np.random.Philox(seq))


def apply_truncation(spectrum: SpectralData, model: TruncationModel) -> SpectralData:
    """Remove every mode with weight below ``theta * max(weight)``.

    The surviving weights are not rescaled; see
    :func:`chainscope.reconstruction.normalize_spectrum`.
    """
    if len(spectrum) == 0:
        raise ValueError("cannot truncate an empty spectrum")
    w = spectrum.weights
    keep = w >= model.theta * w.max()
    if not np.any(keep & (w > 0)):
        raise ValueError("truncation removed every mode")
    if keep.all():
        return spectrum
    return SpectralData(spectrum.lambdas[keep], w[keep], complete=False)


def apply_jitter(spectrum: SpectralData, model: JitterModel, sample_index: int) -> SpectralData:
    """Add ``N(0, sigma^2)`` noise to every eigenvalue.

    Weights travel with their eigenvalues; the modes are re-sorted if the
    noise changes their order.
    """
    if len(spectrum) == 0:
        raise ValueError("cannot jitter an empty spectrum")
    if model.sigma == 0:
        return spectrum
    rng = sample_rng(model.base_seed, sample_index)
    lam = spectrum.lambdas + model.sigma * rng.standard_normal(len(spectrum))
    order = np.argsort(lam, kind="stable")
    return SpectralData(lam[order], spectrum.weights[order], complete=spectrum.complete)


def ensemble_reconstruct(
    spectrum: SpectralData,
    energies: Sequence[float],
    ensemble: EnsembleSpec,
) -> EnsembleResult:
    """Average reconstructions over independently jittered copies of a spectrum.

    Sample ``s`` is ``apply_jitter(spectrum, ensemble.jitter, s)``. A sample
    that aborts at bond ``b`` contributes only to bonds before ``b``.
    Aggregation runs over sample index in a fixed order.

    Raises
    ------
    ReconstructionError
        If every sample aborted at the first bond.
    """
    eps = np.asarray(energies, dtype=float).reshape(-1)
    if abs(spectrum.weights.sum() - 1.0) > 1e-9:
        raise ValueError("spectrum weights must be normalised")
    used = spectrum.weights > 0
    n_used = int(used.sum())
    lam = np.empty((ensemble.n_samples, n_used))
    wts = np.empty((ensemble.n_samples, n_used))
    for s in range(ensemble.n_samples):
        jittered = apply_jitter(spectrum, ensemble.jitter, s)
        mask = jittered.weights > 0
        lam[s] = jittered.lambdas[mask]
        wts[s] = jittered.weights[mask]
    est, aborted, _ = _recurse(lam, wts, eps)

    counts = np.sum(~np.isnan(est), axis=0)
    if eps.size > 1 and counts[0] == 0:
        raise ReconstructionError("every ensemble sample aborted at the first bond")
    agg = np.full(eps.size - 1, np.nan)
    filled = counts > 0
    if ensemble.aggregate == "mean":
        agg[filled] = np.nanmean(est[:, filled], axis=0)
    else:
        agg[filled] = np.nanmedian(est[:, filled], axis=0)
    aborted_at = int(np.argmin(filled)) + 1 if not filled.all() else None
    return EnsembleResult(agg, n_used, aborted_at, None, counts)
