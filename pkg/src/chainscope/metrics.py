"""How far along the chain a reconstruction stays correct."""

from __future__ import annotations

from typing import Sequence

import numpy as np


def reconstruction_distance(
    j_true: Sequence[float], j_est: Sequence[float], tol: float = 0.05
) -> int:
    """Number of leading bonds whose relative error stays within ``tol``.

    Returns the largest ``k`` such that bonds ``1..k`` all satisfy
    ``|j_est - j_true| / j_true <= tol``. Missing (NaN) estimates count as
    deviating.
    """
    jt = np.asarray(j_true, dtype=float).reshape(-1)
    je = np.asarray(j_est, dtype=float).reshape(-1)
    if jt.shape != je.shape:
        raise ValueError(f"length mismatch: {jt.size} true vs {je.size} estimated couplings")
    if not tol > 0:
        raise ValueError("tol must be positive")
    with np.errstate(invalid="ignore"):
        ok = np.abs(je - jt) <= tol * np.abs(jt)
    bad = np.flatnonzero(~ok)
    return int(bad[0]) if bad.size else int(jt.size)
