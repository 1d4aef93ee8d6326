"""Coupling-strength reconstruction for linear chains probed at one end.

The end site of a nearest-neighbour chain carries, through its spectral
weights, enough information to recover every coupling along the chain.
This package builds such chains, produces their end-site spectra (exactly,
in closed form, or through a simulated time-domain measurement), runs the
recursive reconstruction, and studies how measurement errors degrade it.
"""

from chainscope.chain import (
    ChainSpec,
    TridiagonalMatrix,
    build_hamiltonian,
    heisenberg_chain,
    heisenberg_site_energies,
    homogeneous_chain,
    random_chain,
)
from chainscope.spectral import (
    ResolutionError,
    SpectralData,
    TimeSignal,
    default_time_grid,
    eigendecompose,
    end_site_spectrum,
    extract_spectrum,
    homogeneous_spectrum,
    synthesize_end_signal,
)
from chainscope.reconstruction import (
    BrokenBondWarning,
    ReconstructionResult,
    normalize_spectrum,
    reconstruct_couplings,
)
from chainscope.noise import (
    EnsembleResult,
    EnsembleSpec,
    JitterModel,
    TruncationModel,
    apply_jitter,
    apply_truncation,
    ensemble_reconstruct,
)
from chainscope.metrics import reconstruction_distance

__version__ = "0.1.0"

__all__ = [
    "BrokenBondWarning",
    "ChainSpec",
    "EnsembleResult",
    "EnsembleSpec",
    "JitterModel",
    "ReconstructionResult",
    "ResolutionError",
    "SpectralData",
    "TimeSignal",
    "TridiagonalMatrix",
    "TruncationModel",
    "apply_jitter",
    "apply_truncation",
    "build_hamiltonian",
    "default_time_grid",
    "eigendecompose",
    "end_site_spectrum",
    "ensemble_reconstruct",
    "extract_spectrum",
    "heisenberg_chain",
    "heisenberg_site_energies",
    "homogeneous_chain",
    "homogeneous_spectrum",
    "normalize_spectrum",
    "random_chain",
    "reconstruct_couplings",
    "reconstruction_distance",
    "synthesize_end_signal",
]
