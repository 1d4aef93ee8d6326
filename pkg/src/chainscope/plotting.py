"""SVG figures mirroring the report tables. Requires matplotlib."""

from __future__ import annotations

from pathlib import Path
from typing import List

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

matplotlib.rcParams["svg.hashsalt"] = "chainscope"


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def plot_report(report, root: Path) -> List[Path]:
    from chainscope.experiments import _safe_label

    written = []
    for label, rows in report.bonds.items():
        arr = np.array([r[:4] for r in rows], dtype=float)
        fig, (top, bottom) = plt.subplots(2, 1, sharex=True, figsize=(6, 5))
        top.plot(arr[:, 0], arr[:, 1], "k-", label="true")
        top.plot(arr[:, 0], arr[:, 2], "o", ms=3, label="estimated")
        top.set_ylabel("coupling")
        top.legend()
        top.set_title(label)
        bottom.plot(arr[:, 0], arr[:, 3], ".-")
        bottom.set_xlabel("bond i")
        bottom.set_ylabel("J' - J")
        written.append(_save(fig, root / _safe_label(label) / "bonds.svg"))
    for label, rows in report.spectra.items():
        arr = np.array(rows, dtype=float)
        fig, ax = plt.subplots(figsize=(6, 3.5))
        kept = arr[:, 3] == 0
        ax.vlines(arr[kept, 1], 0, arr[kept, 2], colors="C0")
        if (~kept).any():
            ax.vlines(arr[~kept, 1], 0, arr[~kept, 2], colors="C3", label="truncated")
            ax.legend()
        ax.set_xlabel("lambda")
        ax.set_ylabel("C_1n")
        ax.set_title(label)
        written.append(_save(fig, root / _safe_label(label) / "spectrum.svg"))
    return written
