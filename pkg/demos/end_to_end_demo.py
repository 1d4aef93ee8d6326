"""Couplings of a six-site chain, recovered from the first site alone.

The chain is homogeneous (all couplings 1, all site energies 0).  We
simulate the amplitude that an excitation placed on site 1 stays there,
Fourier transform it, read off the peaks and run the recursion.
"""

import numpy as np

from chainscope import (
    default_time_grid,
    end_site_spectrum,
    extract_spectrum,
    homogeneous_chain,
    normalize_spectrum,
    reconstruct_couplings,
    synthesize_end_signal,
)

chain = homogeneous_chain(6)
exact = end_site_spectrum(chain)
print("exact end-site spectrum")
for lam, c in exact.modes:
    print(f"  lambda = {lam:+.6f}   C = {c:.6f}")

# %% the measured signal
dt, n_samples = default_time_grid(np.abs(exact.lambdas).max())
signal = synthesize_end_signal(exact, dt, n_samples)
print(f"\nsignal: {n_samples} samples at dt = {dt}, total time {signal.duration:.0f}")

# %% peaks
measured = extract_spectrum(signal, peak_floor=1e-3)
print(f"found {len(measured)} peaks")
for lam, c in measured.modes:
    print(f"  lambda = {lam:+.6f}   C = {c:.6f}")

# %% reconstruction
result = reconstruct_couplings(normalize_spectrum(measured), chain.energies)
print("\n  i   J_true   J_est")
for i, (jt, je) in enumerate(zip(chain.couplings, result.couplings_est), start=1):
    print(f"  {i}   {jt:.4f}   {je:.6f}")
