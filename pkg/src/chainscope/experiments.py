"""Scenario runner for the reconstruction robustness studies.

Each scenario builds ground-truth chains, produces their end-site spectra,
perturbs them as configured, reconstructs, and scores the result with
:func:`chainscope.metrics.reconstruction_distance`. Results are returned
in memory and written as CSV (the source of truth) plus optional SVG plots.

Scenarios
---------
demo
    Uniform chain, simulated time-domain measurement, peak extraction,
    reconstruction.
truncation
    Uniform chain with the small end-site weights removed at each
    threshold in ``theta_list``.
coupling-disorder
    Random couplings from each interval in ``j_ranges``, truncated at
    ``theta_list[0]``, over ``n_seeds`` ground-truth chains.
eigenvalue-jitter
    Random couplings, ensemble-averaged reconstruction under Gaussian
    eigenvalue noise for each ``sigma_list`` entry, over ``n_seeds`` chains.
roundtrip
    Random couplings, exact spectra; checks that reconstruction inverts
    the forward problem.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import os
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from chainscope.chain import ChainSpec, heisenberg_site_energies, homogeneous_chain, random_chain
from chainscope.metrics import reconstruction_distance
from chainscope.noise import (
    RNG_SCHEME,
    EnsembleSpec,
    JitterModel,
    TruncationModel,
    apply_truncation,
    ensemble_reconstruct,
)
from chainscope.reconstruction import (
    BrokenBondWarning,
    ReconstructionError,
    normalize_spectrum,
    reconstruct_couplings,
)
from chainscope.spectral import (
    SpectralData,
    default_time_grid,
    end_site_spectrum,
    extract_spectrum,
    synthesize_end_signal,
)

SCENARIOS = ("demo", "truncation", "coupling-disorder", "eigenvalue-jitter", "roundtrip")

_SCENARIO_SITES = {
    "demo": 6,
    "truncation": 100,
    "coupling-disorder": 50,
    "eigenvalue-jitter": 100,
    "roundtrip": 1000,
}
_SCENARIO_RANGE = {
    "coupling-disorder": (0.9, 1.1),
    "eigenvalue-jitter": (0.9, 1.1),
    "roundtrip": (0.5, 1.5),
}
_REQUIRED = {"truncation": ("theta_list",), "eigenvalue-jitter": ("sigma_list",)}


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass
class ExperimentConfig:
    scenario: str
    n_sites: Optional[int] = None
    j_low: Optional[float] = None
    j_high: Optional[float] = None
    j_ranges: Optional[List[List[float]]] = None
    delta: float = 0.0
    theta_list: Optional[List[float]] = None
    sigma_list: Optional[List[float]] = None
    n_samples: int = 2000
    n_seeds: int = 20
    base_seed: int = 0
    distance_tol: float = 0.05
    renormalize: bool = True
    aggregate: str = "mean"
    peak_floor: float = 1e-3
    dt: Optional[float] = None
    n_time_samples: Optional[int] = None
    output_dir: str = "chainscope-out"
    emit_plots: bool = False

    def sites(self) -> int:
        return self.n_sites if self.n_sites is not None else _SCENARIO_SITES[self.scenario]

    def j_range(self) -> Tuple[float, float]:
        lo, hi = _SCENARIO_RANGE.get(self.scenario, (1.0, 1.0))
        return (
            self.j_low if self.j_low is not None else lo,
            self.j_high if self.j_high is not None else hi,
        )

    def ranges(self) -> List[Tuple[float, float]]:
        if self.j_ranges is not None:
            return [tuple(r) for r in self.j_ranges]
        if self.j_low is not None or self.j_high is not None:
            return [self.j_range()]
        return [(0.9, 1.1), (0.8, 1.2)]

    def thetas(self) -> List[float]:
        if self.theta_list:
            return list(self.theta_list)
        return [1e-3]

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)


_FIELD_TYPES = {
    "scenario": (str,),
    "n_sites": (int,),
    "j_low": (int, float),
    "j_high": (int, float),
    "j_ranges": (list,),
    "delta": (int, float),
    "theta_list": (list,),
    "sigma_list": (list,),
    "n_samples": (int,),
    "n_seeds": (int,),
    "base_seed": (int,),
    "distance_tol": (int, float),
    "renormalize": (bool,),
    "aggregate": (str,),
    "peak_floor": (int, float),
    "dt": (int, float),
    "n_time_samples": (int,),
    "output_dir": (str,),
    "emit_plots": (bool,),
}
_FLOAT_FIELDS = {k for k, t in _FIELD_TYPES.items() if t == (int, float)}


def _check_type(key, value):
    if value is None:
        if key == "scenario":
            raise ConfigError("field 'scenario' is required")
        return None
    allowed = _FIELD_TYPES[key]
    # bool is an int subclass; keep them apart
    if isinstance(value, bool) and bool not in allowed:
        raise ConfigError(f"field {key!r} expects {allowed[-1].__name__}, got bool")
    if not isinstance(value, allowed):
        raise ConfigError(
            f"field {key!r} expects {'/'.join(t.__name__ for t in allowed)}, "
            f"got {type(value).__name__}"
        )
    if key in _FLOAT_FIELDS:
        return float(value)
    if key in ("theta_list", "sigma_list"):
        for v in value:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ConfigError(f"field {key!r} must be a list of numbers")
        return [float(v) for v in value]
    if key == "j_ranges":
        for r in value:
            if not (isinstance(r, list) and len(r) == 2):
                raise ConfigError("field 'j_ranges' must be a list of [low, high] pairs")
        return [[float(a), float(b)] for a, b in value]
    return value


def validate_config(cfg: ExperimentConfig) -> ExperimentConfig:
    """Check scenario-level consistency; raises :class:`ConfigError`."""
    if cfg.scenario not in SCENARIOS:
        raise ConfigError(f"field 'scenario' must be one of {', '.join(SCENARIOS)}; got {cfg.scenario!r}")
    for name in _REQUIRED.get(cfg.scenario, ()):
        if not getattr(cfg, name):
            raise ConfigError(f"scenario {cfg.scenario!r} requires field {name!r}")
    if cfg.sites() < 2:
        raise ConfigError("field 'n_sites' must be at least 2")
    if cfg.distance_tol <= 0:
        raise ConfigError("field 'distance_tol' must be positive")
    if cfg.n_samples < 1:
        raise ConfigError("field 'n_samples' must be positive")
    if cfg.n_seeds < 1:
        raise ConfigError("field 'n_seeds' must be positive")
    if cfg.base_seed < 0:
        raise ConfigError("field 'base_seed' must be nonnegative")
    if cfg.aggregate not in ("mean", "median"):
        raise ConfigError("field 'aggregate' must be 'mean' or 'median'")
    for t in cfg.theta_list or []:
        if not 0 <= t < 1:
            raise ConfigError(f"field 'theta_list' entries must lie in [0, 1), got {t}")
    for s in cfg.sigma_list or []:
        if s < 0:
            raise ConfigError(f"field 'sigma_list' entries must be nonnegative, got {s}")
    for lo, hi in cfg.ranges() if cfg.scenario != "demo" else []:
        if not 0 < lo <= hi:
            raise ConfigError(f"coupling range [{lo}, {hi}] must satisfy 0 < low <= high")
    return cfg


def parse_config(path: Optional[os.PathLike] = None, overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """Merge defaults, a JSON config file, and explicit overrides (highest precedence).

    Raises
    ------
    ConfigError
        On unknown keys, wrong types, or missing scenario fields; the
        offending field is named in the message.
    """
    merged: Dict[str, Any] = {}
    if path is not None:
        text = Path(path).read_text()
        if text.strip():
            try:
                data = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: not valid JSON ({exc})") from None
            if not isinstance(data, dict):
                raise ConfigError(f"{path}: top level must be an object")
            merged.update(data)
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value
    unknown = sorted(set(merged) - set(_FIELD_TYPES))
    if unknown:
        raise ConfigError(f"unknown field(s): {', '.join(unknown)}")
    if "scenario" not in merged:
        raise ConfigError("field 'scenario' is required")
    clean = {k: _check_type(k, v) for k, v in merged.items()}
    return validate_config(ExperimentConfig(**clean))


@dataclass
class ScenarioReport:
    """In-memory result of one scenario.

    ``bonds`` and ``spectra`` map a condition label to rows of
    ``(i, j_true, j_est, delta_j)`` and ``(n, lambda, c1, truncated)``;
    ``summary`` rows are ``(condition, value, distance)`` with the distance
    being the median over ground-truth seeds; ``distances`` keeps the
    per-seed rows ``(condition, value, seed, distance)``.
    """

    config: ExperimentConfig
    bonds: Dict[str, List[tuple]] = field(default_factory=dict)
    spectra: Dict[str, List[tuple]] = field(default_factory=dict)
    summary: List[tuple] = field(default_factory=list)
    distances: List[tuple] = field(default_factory=list)
    provenance: Dict[str, Any] = field(default_factory=dict)

    def distance(self, condition: str, value: Optional[float] = None) -> float:
        for cond, val, dist in self.summary:
            if cond == condition and (value is None or val == value):
                return dist
        raise KeyError((condition, value))


def _energies(cfg: ExperimentConfig, couplings) -> np.ndarray:
    return heisenberg_site_energies(couplings, cfg.delta)


def _ground_truth(cfg: ExperimentConfig, lo: float, hi: float, seed: int) -> ChainSpec:
    n = cfg.sites()
    chain = random_chain(n, lo, hi, seed=seed)
    return ChainSpec(_energies(cfg, chain.couplings), chain.couplings)


def _bond_rows(j_true, j_est) -> List[tuple]:
    return [(i + 1, float(t), float(e), float(e - t)) for i, (t, e) in enumerate(zip(j_true, j_est))]


def _spectrum_rows(full: SpectralData, kept: SpectralData) -> List[tuple]:
    kept_set = set(kept.lambdas.tolist())
    return [
        (n + 1, float(lam), float(c), int(lam not in kept_set))
        for n, (lam, c) in enumerate(zip(full.lambdas, full.weights))
    ]


def _median(values) -> float:
    return float(np.median(np.asarray(values, dtype=float)))


def _run_demo(cfg: ExperimentConfig, report: ScenarioReport):
    n = cfg.sites()
    j = cfg.j_low if cfg.j_low is not None else 1.0
    base = homogeneous_chain(n, 0.0, j)
    chain = ChainSpec(_energies(cfg, base.couplings), base.couplings)
    exact = end_site_spectrum(chain)
    dt, n_t = default_time_grid(np.abs(exact.lambdas).max())
    dt = cfg.dt if cfg.dt is not None else dt
    n_t = cfg.n_time_samples if cfg.n_time_samples is not None else n_t
    signal = synthesize_end_signal(exact, dt, n_t)
    measured = extract_spectrum(signal, cfg.peak_floor)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BrokenBondWarning)
        result = reconstruct_couplings(normalize_spectrum(measured), chain.energies)
    if result.aborted_at is not None:
        raise ReconstructionError(f"broken bond at {result.aborted_at} in the demo reconstruction")
    err = float(np.max(np.abs(result.couplings_est - chain.couplings) / chain.couplings))
    d = reconstruction_distance(chain.couplings, result.couplings_est, cfg.distance_tol)
    report.bonds["demo"] = _bond_rows(chain.couplings, result.couplings_est)
    report.spectra["demo"] = [
        (k + 1, float(lam), float(c), 0) for k, (lam, c) in enumerate(measured.modes)
    ]
    report.summary.append(("max_rel_error", err, float(d)))
    report.provenance["signal"] = {"dt": dt, "n_samples": n_t, "peaks_found": len(measured)}


def _truncated_reconstruction(cfg, chain: ChainSpec, theta: float):
    exact = end_site_spectrum(chain)
    kept = apply_truncation(exact, TruncationModel(theta))
    data = normalize_spectrum(kept) if cfg.renormalize else kept
    # aborts under truncation are part of the measurement, kept as NaN bonds
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BrokenBondWarning)
        result = reconstruct_couplings(data, chain.energies, require_normalized=cfg.renormalize)
    return exact, kept, result


def _run_truncation(cfg: ExperimentConfig, report: ScenarioReport):
    base = homogeneous_chain(cfg.sites(), 0.0, 1.0)
    chain = ChainSpec(_energies(cfg, base.couplings), base.couplings)
    for theta in cfg.thetas():
        exact, kept, result = _truncated_reconstruction(cfg, chain, theta)
        label = f"theta={theta:g}"
        d = reconstruction_distance(chain.couplings, result.couplings_est, cfg.distance_tol)
        report.bonds[label] = _bond_rows(chain.couplings, result.couplings_est)
        report.spectra[label] = _spectrum_rows(exact, kept)
        report.summary.append(("theta", theta, float(d)))
        report.distances.append(("theta", theta, cfg.base_seed, d))


def _run_disorder(cfg: ExperimentConfig, report: ScenarioReport):
    theta = cfg.thetas()[0]
    for lo, hi in cfg.ranges():
        label = f"j_range={lo:g}..{hi:g}"
        ds = []
        for k in range(cfg.n_seeds):
            seed = cfg.base_seed + k
            chain = _ground_truth(cfg, lo, hi, seed)
            exact, kept, result = _truncated_reconstruction(cfg, chain, theta)
            d = reconstruction_distance(chain.couplings, result.couplings_est, cfg.distance_tol)
            ds.append(d)
            report.distances.append((label, hi - lo, seed, d))
            if k == 0:
                report.bonds[label] = _bond_rows(chain.couplings, result.couplings_est)
                report.spectra[label] = _spectrum_rows(exact, kept)
        report.summary.append((label, hi - lo, _median(ds)))


def _run_jitter(cfg: ExperimentConfig, report: ScenarioReport):
    lo, hi = cfg.j_range()
    chains = [_ground_truth(cfg, lo, hi, cfg.base_seed + k) for k in range(cfg.n_seeds)]
    spectra = [end_site_spectrum(c) for c in chains]
    for sigma in cfg.sigma_list:
        label = f"sigma={sigma:g}"
        ds = []
        for k, (chain, exact) in enumerate(zip(chains, spectra)):
            seed = cfg.base_seed + k
            ens = EnsembleSpec(cfg.n_samples, JitterModel(sigma, seed), cfg.aggregate)
            result = ensemble_reconstruct(exact, chain.energies, ens)
            d = reconstruction_distance(chain.couplings, result.couplings_est, cfg.distance_tol)
            ds.append(d)
            report.distances.append(("sigma", sigma, seed, d))
            if k == 0:
                report.bonds[label] = _bond_rows(chain.couplings, result.couplings_est)
                report.spectra[label] = _spectrum_rows(exact, exact)
        report.summary.append(("sigma", sigma, _median(ds)))


def _run_roundtrip(cfg: ExperimentConfig, report: ScenarioReport):
    lo, hi = cfg.j_range()
    ds, worst = [], 0.0
    for k in range(cfg.n_seeds):
        seed = cfg.base_seed + k
        chain = _ground_truth(cfg, lo, hi, seed)
        exact = end_site_spectrum(chain)
        result = reconstruct_couplings(exact, chain.energies)
        if result.aborted_at is not None:
            raise ReconstructionError(f"broken bond at {result.aborted_at} for seed {seed}")
        err = float(np.nanmax(np.abs(result.couplings_est - chain.couplings) / chain.couplings))
        worst = max(worst, err)
        d = reconstruction_distance(chain.couplings, result.couplings_est, cfg.distance_tol)
        ds.append(d)
        report.distances.append(("max_rel_error", err, seed, d))
        if k == 0:
            report.bonds["roundtrip"] = _bond_rows(chain.couplings, result.couplings_est)
            report.spectra["roundtrip"] = _spectrum_rows(exact, exact)
    report.summary.append(("max_rel_error", worst, _median(ds)))


_RUNNERS = {
    "demo": _run_demo,
    "truncation": _run_truncation,
    "coupling-disorder": _run_disorder,
    "eigenvalue-jitter": _run_jitter,
    "roundtrip": _run_roundtrip,
}


def _provenance(cfg: ExperimentConfig) -> Dict[str, Any]:
    from chainscope import __version__

    return {
        "chainscope": __version__,
        "numpy": np.__version__,
        "rng": RNG_SCHEME,
        "base_seed": cfg.base_seed,
    }


def run_scenario(cfg: ExperimentConfig, write: bool = True) -> ScenarioReport:
    """Execute a scenario and, when ``write`` is set, store its files under ``cfg.output_dir``.

    Everything is computed before the first file is written, so a failing
    scenario leaves no partial output behind.
    """
    validate_config(cfg)
    report = ScenarioReport(config=cfg, provenance=_provenance(cfg))
    _RUNNERS[cfg.scenario](cfg, report)
    if write:
        write_report(report)
    return report


# -- output -------------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _header(report: ScenarioReport) -> List[str]:
    lines = [f"# {k}: {json.dumps(v, sort_keys=True)}" for k, v in sorted(report.provenance.items())]
    lines.append("# config: " + json.dumps(report.config.to_dict(), sort_keys=True))
    return lines


def _csv_text(report: ScenarioReport, columns, rows) -> str:
    buf = io.StringIO()
    for line in _header(report):
        buf.write(line + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _safe_label(label: str) -> str:
    return label.replace("=", "_").replace("..", "_")


def _write(path: Path, text: str):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def write_report(report: ScenarioReport) -> List[Path]:
    """Write the CSV tables (and plots if configured); returns the paths written."""
    root = Path(report.config.output_dir) / report.config.scenario
    written = []
    files = [
        (root / "summary.csv", ("condition", "value", "distance"), report.summary),
    ]
    if report.distances:
        files.append((root / "distances.csv", ("condition", "value", "seed", "distance"), report.distances))
    for label, rows in report.bonds.items():
        files.append((root / _safe_label(label) / "bonds.csv", ("i", "j_true", "j_est", "delta_j"), rows))
    for label, rows in report.spectra.items():
        files.append((root / _safe_label(label) / "spectrum.csv", ("n", "lambda", "c1", "truncated"), rows))
    for path, cols, rows in files:
        _write(path, _csv_text(report, cols, rows))
        written.append(path)
    if report.config.emit_plots:
        from chainscope.plotting import plot_report

        written.extend(plot_report(report, root))
    return written


def read_config_header(path: os.PathLike) -> ExperimentConfig:
    """Recover the configuration echoed in the header of an emitted CSV file."""
    with open(path) as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            if line.startswith("# config: "):
                data = json.loads(line[len("# config: "):])
                return parse_config(overrides=data)
    raise ConfigError(f"{path}: no config header found")
