"""Configuration-driven experiment runner.

One JSON config fully determines an experiment; together with the master
seed it fully determines the emitted CSV bytes, worker count included. The
runner writes `<prefix>.csv` (plus `<prefix>.dt.csv` for the phase
transition) and `<prefix>.meta.json` with the resolved config, seed,
library version, and feasibility flags.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, fields
from importlib import metadata as _importlib_metadata
from pathlib import Path

import numpy as np

from .coherence import coherence_sweep
from .kernels import BACKEND
from .pipeline import CombOverlapError, PipelineConfig, rejection_sweep
from .recovery import omp, phase_transition, support_success
from .seeding import seed_derive
from .sensing import PlanInfeasibleError, effective_matrix, measure, nuwbs_plan
from .signals import SubBandSpec, make_multiband_signal
from .wavelets import ALPHA_10DB, DegenerateAtomError

__all__ = [
    "EXPERIMENTS",
    "ConfigError",
    "ExperimentConfig",
    "ResultBundle",
    "config_from_dict",
    "config_to_dict",
    "load_config",
    "run",
]

EXPERIMENTS = ("coherence-sweep", "phase-transition", "rejection-sweep", "measure-recover")


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Flat bag of experiment parameters; each experiment validates its slice.

    snr_db is stored as +inf for the noiseless case and serialized as JSON
    null. Grids and bands normalize to tuples so configs compare and
    round-trip by value.
    """

    experiment: str
    master_seed: int = 0
    out_prefix: str = "result"
    n: int | None = None
    bands: tuple = ()
    gamma: int | None = None
    tau: float | None = None
    tau_grid: tuple = ()
    q: float | None = None
    m_grid: tuple = ()
    k_grid: tuple = ()
    k: int | None = None
    trials: int | None = None
    snr_db: float | None = math.inf
    puncture_keep: float = 1.0
    kappa: int | None = None
    f_c: float | None = None
    oversample: int = 8
    n_meas: int = 64
    guard_periods: int = 2
    offsets_fs: tuple = ()
    f_s_hz: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "bands", tuple((int(a), int(b)) for a, b in self.bands))
        object.__setattr__(self, "tau_grid", tuple(float(v) for v in self.tau_grid))
        object.__setattr__(self, "m_grid", tuple(int(v) for v in self.m_grid))
        object.__setattr__(self, "k_grid", tuple(int(v) for v in self.k_grid))
        object.__setattr__(self, "offsets_fs", tuple(float(v) for v in self.offsets_fs))
        snr = math.inf if self.snr_db is None else float(self.snr_db)
        object.__setattr__(self, "snr_db", snr)


def config_from_dict(raw: dict) -> ExperimentConfig:
    """Build a config from parsed JSON, rejecting unknown or malformed fields."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object of experiment parameters")
    allowed = {f.name for f in fields(ExperimentConfig)}
    unknown = sorted(set(raw) - allowed)
    if unknown:
        raise ConfigError(f"unknown config fields: {', '.join(unknown)}")
    if "experiment" not in raw:
        raise ConfigError("config must name an experiment")
    try:
        return ExperimentConfig(**raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"malformed config: {exc}") from exc


def config_to_dict(config: ExperimentConfig) -> dict:
    """JSON-ready dict; config_from_dict(config_to_dict(c)) == c."""
    out = asdict(config)
    out["bands"] = [list(b) for b in config.bands]
    for name in ("tau_grid", "m_grid", "k_grid", "offsets_fs"):
        out[name] = list(out[name])
    out["snr_db"] = None if math.isinf(config.snr_db) else config.snr_db
    return out


def load_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))


@dataclass(frozen=True)
class ResultBundle:
    """Paths of the emitted tables plus the metadata record they came with."""

    csv_paths: tuple
    meta_path: str
    metadata: dict


def _require(condition: bool, message: str):
    if not condition:
        raise ConfigError(message)


def _validate(config: ExperimentConfig):
    _require(
        config.experiment in EXPERIMENTS,
        f"unknown experiment '{config.experiment}'; choose from: {', '.join(EXPERIMENTS)}",
    )
    _require(
        isinstance(config.master_seed, int) and config.master_seed >= 0,
        "master_seed must be a nonnegative integer",
    )
    _require(bool(config.out_prefix), "out_prefix must be a nonempty path prefix")
    if config.experiment != "measure-recover":
        _require(
            math.isinf(config.snr_db),
            "snr_db applies to measure-recover only; leave it null elsewhere",
        )
    if config.experiment in ("coherence-sweep", "phase-transition", "measure-recover"):
        _require(config.n is not None and config.n >= 2, "n (grid length) is required")
        _require(len(config.bands) >= 1, "bands is required: list of [start, stop) bin pairs")
    if config.experiment == "coherence-sweep":
        _require(len(config.tau_grid) >= 1, "tau_grid is required")
        _require(config.q is None, "q does not apply to coherence-sweep; sweep tau_grid instead")
    if config.experiment in ("phase-transition", "measure-recover"):
        _require(config.gamma is not None and config.gamma >= 1, "gamma (shift stride) is required")
        _require(
            (config.tau is None) != (config.q is None),
            "exactly one of tau (atom width) or q (constant-Q mode) is required",
        )
    if config.experiment == "phase-transition":
        _require(len(config.m_grid) >= 1, "m_grid is required: measurement counts")
        _require(len(config.k_grid) >= 1, "k_grid is required: sparsity counts")
        _require(config.trials is not None and config.trials >= 1, "trials must be at least 1")
    if config.experiment == "measure-recover":
        _require(config.k is not None and config.k >= 0, "k (sparsity) is required")
        _require(0.0 < config.puncture_keep <= 1.0, "puncture_keep must lie in (0, 1]")
    if config.experiment == "rejection-sweep":
        _require(
            config.kappa is not None and config.kappa >= 2 and config.kappa % 2 == 0,
            "kappa must be an even integer >= 2",
        )
        _require(config.f_c is not None, "f_c (comb carrier frequency) is required")
        _require(len(config.offsets_fs) >= 1, "offsets_fs is required: offsets in multiples of f_s")


def _call(fn, *args, **kwargs):
    # config-induced ValueErrors become ConfigError (CLI exit 2); genuine
    # infeasibility keeps its type (CLI exit 3)
    try:
        return fn(*args, **kwargs)
    except (PlanInfeasibleError, CombOverlapError, DegenerateAtomError):
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _resolve_tau(config: ExperimentConfig, spec: SubBandSpec) -> float:
    if config.tau is not None:
        return float(config.tau)
    # constant-Q mode: width implied by Q at the first branch's center frequency
    start, stop = sorted(spec.bands)[0]
    f_c = ((start + stop) // 2) / spec.n
    _require(f_c > 0, "q mode needs the first band's center bin above DC")
    return float(config.q) / (f_c * math.pi * ALPHA_10DB * math.sqrt(2.0))


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        raise TypeError("booleans have no CSV encoding here")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _write_csv(path: Path, header, rows):
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _library_version() -> str:
    try:
        return _importlib_metadata.version("nuwsim")
    except _importlib_metadata.PackageNotFoundError:
        return "unknown"


def run(config: ExperimentConfig, *, workers: int = 1) -> ResultBundle:
    """Validate, dispatch, and emit one experiment's tables and metadata."""
    _validate(config)
    _require(workers >= 1, "worker count must be at least 1")
    started = time.perf_counter()
    prefix = Path(config.out_prefix)
    if str(prefix.parent) not in ("", "."):
        prefix.parent.mkdir(parents=True, exist_ok=True)

    flags: dict = {}
    csv_paths: list[str] = []

    if config.experiment == "coherence-sweep":
        spec = _call(SubBandSpec, n=config.n, bands=config.bands)
        curve = _call(coherence_sweep, spec, np.asarray(config.tau_grid))
        path = Path(str(prefix) + ".csv")
        _write_csv(
            path,
            ["bwp_over_bwrf", "mu", "welch_bound"],
            [
                (ratio, mu, curve.bound)
                for ratio, mu in zip(curve.ratios, curve.coherences)
            ],
        )
        csv_paths.append(str(path))

    elif config.experiment == "phase-transition":
        spec = _call(SubBandSpec, n=config.n, bands=config.bands)
        tau = _resolve_tau(config, spec)
        grid = _call(
            phase_transition,
            spec,
            tau,
            config.gamma,
            config.m_grid,
            config.k_grid,
            config.trials,
            config.master_seed,
            workers=workers,
        )
        path = Path(str(prefix) + ".csv")
        rows = [
            (grid.m_ratios[i], grid.k_ratios[j], grid.success[i, j], grid.trials)
            for i in range(grid.m_values.shape[0])
            for j in range(grid.k_values.shape[0])
        ]
        _write_csv(path, ["m_ratio", "k_ratio", "success_rate", "trials"], rows)
        csv_paths.append(str(path))
        dt_path = Path(str(prefix) + ".dt.csv")
        _write_csv(dt_path, ["delta", "rho"], list(zip(grid.dt_deltas, grid.dt_rhos)))
        csv_paths.append(str(dt_path))
        flags["unattainable_cells"] = [
            [int(grid.m_values[i]), int(grid.k_values[j])]
            for i in range(grid.m_values.shape[0])
            for j in range(grid.k_values.shape[0])
            if math.isnan(grid.success[i, j])
        ]

    elif config.experiment == "rejection-sweep":
        tau = float(config.tau) if config.tau is not None else config.kappa / 4.0
        try:
            pipeline_config = PipelineConfig(
                kappa=config.kappa,
                tau=tau,
                f_c=config.f_c,
                oversample=config.oversample,
                n_meas=config.n_meas,
                guard_periods=config.guard_periods,
                f_s_hz=config.f_s_hz,
            )
        except CombOverlapError:
            raise
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        offsets = np.asarray(config.offsets_fs) * pipeline_config.f_s
        curve = _call(rejection_sweep, pipeline_config, offsets)
        path = Path(str(prefix) + ".csv")
        _write_csv(
            path,
            ["offset", "h_wbs_sim_db", "h_wbs_analytic_db", "h_cwt_db", "sinc_db"],
            list(
                zip(
                    curve.offsets_fs,
                    curve.h_wbs_sim_db,
                    curve.h_wbs_analytic_db,
                    curve.h_cwt_db,
                    curve.sinc_db,
                )
            ),
        )
        csv_paths.append(str(path))
        flags["folds_onto_carrier"] = [
            float(u) for u, hit in zip(curve.offsets_fs, curve.folds_onto_carrier) if hit
        ]

    else:  # measure-recover
        spec = _call(SubBandSpec, n=config.n, bands=config.bands)
        tau = _resolve_tau(config, spec)
        plan = nuwbs_plan(
            spec,
            tau=tau,
            gamma=config.gamma,
            puncture_keep=config.puncture_keep,
            rng=seed_derive(config.master_seed, (0,)),
        )
        matrix = effective_matrix(plan)
        truth, x = _call(make_multiband_signal, spec, config.k, seed_derive(config.master_seed, (1,)))
        y = _call(
            measure, plan, x, snr_db=config.snr_db, rng=seed_derive(config.master_seed, (2,)), matrix=matrix
        )
        result = _call(omp, matrix, y, config.k, sigma=spec.sigma)
        estimate = np.zeros(spec.n, dtype=np.complex128)
        estimate[result.support] = result.coefficients
        path = Path(str(prefix) + ".csv")
        _write_csv(
            path,
            ["bin", "true_re", "true_im", "est_re", "est_im"],
            [
                (
                    int(b),
                    truth.coefficients[b].real,
                    truth.coefficients[b].imag,
                    estimate[b].real,
                    estimate[b].imag,
                )
                for b in spec.sigma
            ],
        )
        csv_paths.append(str(path))
        flags["support_recovered"] = bool(support_success(result, truth.support))
        flags["rank_deficient"] = bool(result.rank_deficient)
        flags["residual_norm"] = float(result.residual_norm)
        flags["measurements"] = int(plan.m)

    metadata_record = {
        "experiment": config.experiment,
        "config": config_to_dict(config),
        "master_seed": config.master_seed,
        "library_version": _library_version(),
        "kernel_backend": BACKEND,
        "workers": workers,
        "wall_clock_s": time.perf_counter() - started,
        "flags": flags,
        "csv_files": csv_paths,
    }
    meta_path = Path(str(prefix) + ".meta.json")
    meta_path.write_text(json.dumps(metadata_record, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return ResultBundle(csv_paths=tuple(csv_paths), meta_path=str(meta_path), metadata=metadata_record)
