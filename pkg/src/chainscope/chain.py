"""Ground-truth chain model.

A chain of ``N`` sites is described by its site energies and its ``N - 1``
nearest-neighbour couplings; its Hamiltonian is the symmetric tridiagonal
(Jacobi) matrix with the energies on the diagonal and the couplings on the
off-diagonal. Units use hbar = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np


def _frozen(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ChainSpec:
    """Site energies and couplings of a linear chain.

    Every coupling must be strictly positive: the reconstruction only ever
    returns nonnegative square roots, so a chain with a negative or zero
    bond is outside the identifiable class.
    """

    energies: np.ndarray
    couplings: np.ndarray

    def __post_init__(self):
        energies = _frozen(self.energies, "energies")
        couplings = _frozen(self.couplings, "couplings")
        if energies.size < 1:
            raise ValueError("a chain needs at least one site")
        if couplings.size != energies.size - 1:
            raise ValueError(
                f"expected {energies.size - 1} couplings for {energies.size} sites, "
                f"got {couplings.size}"
            )
        if np.any(couplings <= 0):
            bond = int(np.flatnonzero(couplings <= 0)[0]) + 1
            raise ValueError(f"coupling at bond {bond} is not strictly positive (broken chain)")
        object.__setattr__(self, "energies", energies)
        object.__setattr__(self, "couplings", couplings)

    @property
    def n_sites(self) -> int:
        return int(self.energies.size)

    def __eq__(self, other):
        if not isinstance(other, ChainSpec):
            return NotImplemented
        return np.array_equal(self.energies, other.energies) and np.array_equal(
            self.couplings, other.couplings
        )

    def __hash__(self):
        return hash((self.energies.tobytes(), self.couplings.tobytes()))


@dataclass(frozen=True, eq=False)
class TridiagonalMatrix:
    """Symmetric tridiagonal matrix stored as its two distinct diagonals."""

    diagonal: np.ndarray
    off_diagonal: np.ndarray

    def __post_init__(self):
        d = _frozen(self.diagonal, "diagonal")
        e = _frozen(self.off_diagonal, "off_diagonal")
        if d.size < 1 or e.size != d.size - 1:
            raise ValueError(f"inconsistent sizes: diagonal {d.size}, off-diagonal {e.size}")
        object.__setattr__(self, "diagonal", d)
        object.__setattr__(self, "off_diagonal", e)

    @property
    def size(self) -> int:
        return int(self.diagonal.size)

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diagonal) + np.diag(self.off_diagonal, 1) + np.diag(self.off_diagonal, -1)

    def norm_inf(self) -> float:
        """Infinity norm (maximum absolute row sum)."""
        rows = np.abs(self.diagonal).copy()
        rows[:-1] += np.abs(self.off_diagonal)
        rows[1:] += np.abs(self.off_diagonal)
        return float(rows.max())

    def to_chain(self) -> ChainSpec:
        return ChainSpec(self.diagonal, self.off_diagonal)


def build_hamiltonian(spec: ChainSpec) -> TridiagonalMatrix:
    return TridiagonalMatrix(spec.energies, spec.couplings)


def heisenberg_site_energies(couplings: Sequence[float], delta: float) -> np.ndarray:
    """Effective site energies of a Heisenberg chain in the one-excitation sector.

    With anisotropy ``delta`` every site gets ``delta * (sum(J) - 2 * (J_right + J_left))``
    where the missing neighbours of the two end sites count as zero.

    Parameters
    ----------
    couplings : sequence of float
        The ``N - 1`` exchange couplings.
    delta : float
        Anisotropy of the zz term.

    Returns
    -------
    numpy.ndarray
        ``N`` site energies.
    """
    j = np.asarray(couplings, dtype=float).reshape(-1)
    if j.size == 0:
        raise ValueError("couplings must be nonempty")
    padded = np.concatenate(([0.0], j, [0.0]))
    return delta * (j.sum() - 2.0 * (padded[1:] + padded[:-1]))


def heisenberg_chain(couplings: Sequence[float], delta: float) -> ChainSpec:
    return ChainSpec(heisenberg_site_energies(couplings, delta), couplings)


def homogeneous_chain(n_sites: int, epsilon: float = 0.0, j: float = 1.0) -> ChainSpec:
    return ChainSpec(np.full(n_sites, float(epsilon)), np.full(n_sites - 1, float(j)))


def random_chain(
    n_sites: int,
    j_low: float,
    j_high: float,
    energies: Optional[Sequence[float]] = None,
    seed: int = 0,
) -> ChainSpec:
    """Chain with couplings drawn i.i.d. uniform on ``[j_low, j_high]``.

    The draw comes from ``numpy.random.default_rng(seed)`` so a fixed seed
    always yields the same chain. ``energies`` defaults to all zeros.
    """
    if n_sites < 1:
        raise ValueError("n_sites must be positive")
    if j_low <= 0:
        raise ValueError("j_low must be positive (a zero coupling breaks the chain)")
    if j_high < j_low:
        raise ValueError("j_high must not be below j_low")
    if energies is None:
        energies = np.zeros(n_sites)
    elif len(energies) != n_sites:
        raise ValueError(f"expected {n_sites} energies, got {len(energies)}")
    rng = np.random.default_rng(seed)
    couplings = rng.uniform(j_low, j_high, n_sites - 1)
    return ChainSpec(energies, couplings)
