"""How long a chain can the recursion handle from exact data?

A homogeneous chain spreads its weight over the whole band and survives
thousands of sites.  Strongly disordered couplings localize the
eigenvectors away from site 1; their end-site weights then shrink
exponentially and eventually fall below double precision.
"""

import warnings

import numpy as np

from chainscope import end_site_spectrum, homogeneous_chain, random_chain, reconstruct_couplings


def max_rel_error(chain):
    s = end_site_spectrum(chain)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        est = reconstruct_couplings(s, chain.energies).couplings_est
    with np.errstate(invalid="ignore"):
        err = np.abs(est / chain.couplings - 1)
    return np.nan if np.isnan(err).any() else err.max(), s.weights.min()


for n in (100, 1000, 2000):
    err, wmin = max_rel_error(homogeneous_chain(n))
    print(f"homogeneous N={n}: max rel error {err:.2e}, smallest weight {wmin:.1e}")

for n in (20, 50, 100, 200):
    err, wmin = max_rel_error(random_chain(n, 0.5, 1.5, seed=1))
    print(f"J in [0.5,1.5] N={n}: max rel error {err:.2e}, smallest weight {wmin:.1e}")
