"""Recursive estimation of chain couplings from end-site spectral data.

Given eigenvalues ``lambda_n``, end-site weights ``C_1n`` and the known site
energies, the couplings follow one bond at a time. Writing ``C_in`` for
the spectral coefficient of mode ``n`` on site ``i``::

    u_n         = (lambda_n - eps_i) C_in - J_{i-1,i} C_{i-1,n}
    J_{i,i+1}   = sqrt( sum_n u_n^2 / C_1n )
    C_{i+1,n}   = u_n / J_{i,i+1}

with ``C_0n = 0`` and ``J_{0,1} = 0``. The square root is the requirement
that site ``i + 1`` is normalised, ``sum_n C_{i+1,n}^2 / C_1n = 1``.
Modes of zero weight drop out of every sum and are skipped entirely.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from chainscope.spectral import SpectralData

#: estimates below this are treated as a broken bond; dividing by them
#: would only amplify rounding noise.
BROKEN_BOND_FLOOR = 1e-12


class BrokenBondWarning(RuntimeWarning):
    """The recursion met a vanishing coupling and stopped."""


class ReconstructionError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class ReconstructionResult:
    """Estimated couplings of one reconstruction.

    Attributes
    ----------
    couplings_est : numpy.ndarray
        ``N - 1`` estimates; NaN from ``aborted_at`` onward.
    modes_used : int
        Number of modes with nonzero weight.
    aborted_at : int or None
        1-based bond index at which the estimate fell below
        :data:`BROKEN_BOND_FLOOR`.
    coefficients : numpy.ndarray or None
        Rows ``C_in`` for every site reached, over the modes used; only
        kept when requested.
    """

    couplings_est: np.ndarray
    modes_used: int
    aborted_at: Optional[int] = None
    coefficients: Optional[np.ndarray] = None


def normalize_spectrum(raw: SpectralData) -> SpectralData:
    """Rescale weights so they sum to one."""
    total = raw.weights.sum()
    if not total > 0:
        raise ValueError("cannot normalise a spectrum whose weights are all zero")
    return SpectralData(raw.lambdas, raw.weights / total, complete=raw.complete)


def _recurse(lambdas, weights, energies, floor=BROKEN_BOND_FLOOR, keep_rows=False):
    """Run the recursion for a batch of spectra.

    ``lambdas`` and ``weights`` have shape ``(B, K)``, all weights positive.
    Returns the ``(B, N - 1)`` estimates (NaN at and past an abort), the
    per-row abort bond (0 when none) and, if asked, the coefficient rows of
    the first batch member.
    """
    n_bonds = energies.size - 1
    n_batch = lambdas.shape[0]
    est = np.full((n_batch, n_bonds), np.nan)
    aborted = np.zeros(n_batch, dtype=int)
    alive = np.ones(n_batch, dtype=bool)
    prev = np.zeros_like(lambdas)
    cur = weights.copy()
    j_prev = np.zeros((n_batch, 1))
    rows = [cur[0].copy()] if keep_rows else None
    for i in range(n_bonds):
        u = (lambdas - energies[i]) * cur - j_prev * prev
        terms = u * u / weights
        j = np.sqrt(terms.sum(axis=1))
        broke = alive & (j < floor)
        aborted[broke] = i + 1
        alive &= ~broke
        est[alive, i] = j[alive]
        if not alive.any():
            break
        j_safe = np.where(alive, j, 1.0)[:, None]
        prev, cur, j_prev = cur, u / j_safe, j_safe
        if keep_rows and alive[0]:
            rows.append(cur[0].copy())
    return est, aborted, (np.array(rows) if keep_rows else None)


def reconstruct_couplings(
    spectrum: SpectralData,
    energies: Sequence[float],
    *,
    require_normalized: bool = True,
    keep_rows: bool = False,
) -> ReconstructionResult:
    """Estimate all ``N - 1`` couplings from end-site spectral data.

    ``N`` is taken from ``energies`` rather than from the number of modes:
    with truncated data fewer modes than sites are available and the
    recursion still runs to the last bond.

    Parameters
    ----------
    spectrum : SpectralData
        Eigenvalues and end-site weights. Zero-weight modes are ignored.
    energies : sequence of float
        Known site energies, one per site.
    require_normalized : bool
        Reject spectra whose weights do not sum to one within 1e-9.
    keep_rows : bool
        Also return every coefficient row ``C_in`` (memory ``O(N M)``).

    Warns
    -----
    BrokenBondWarning
        When an estimate falls below :data:`BROKEN_BOND_FLOOR`; the result's
        ``aborted_at`` names the bond.
    """
    eps = np.asarray(energies, dtype=float).reshape(-1)
    if eps.size < 1:
        raise ValueError("need at least one site energy")
    w = spectrum.weights
    if require_normalized and abs(w.sum() - 1.0) > 1e-9:
        raise ValueError(
            f"spectrum weights sum to {w.sum()!r}; normalise first (normalize_spectrum)"
        )
    used = w > 0
    if not used.any():
        raise ValueError("spectrum has no mode of positive weight")
    lam = spectrum.lambdas[used][None, :]
    c1 = w[used][None, :]
    est, aborted, rows = _recurse(lam, c1, eps, keep_rows=keep_rows)
    aborted_at = int(aborted[0]) or None
    if aborted_at is not None:
        warnings.warn(f"broken bond at {aborted_at}", BrokenBondWarning, stacklevel=2)
    return ReconstructionResult(est[0], int(used.sum()), aborted_at, rows)
