"""Experiment runner: moment sweeps, eigenvalue CDFs, capacity curves.

Each runner produces a ResultTable whose file form embeds the seed and
a hash of the generating configuration, so results are reproducible
and self-describing. All randomness flows from a single seed through
per-point / per-trial sub-streams; output bytes are independent of the
thread count.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    analytical_mean_cn,
    analytical_variance_cn,
    capacity,
    eigen_summary,
    empirical_cdf,
    mc_moments,
)
from .channel import GainMode, SystemConfig, build_channel_matrix, gaussian_baseline
from .errors import ConfigError
from .numkernel import RngStream

__all__ = [
    "ExperimentConfig",
    "ResultTable",
    "run_moments",
    "run_eigen_cdf",
    "run_capacity",
]

DEFAULT_M_SWEEP = (8, 16, 32, 64, 128, 256, 512)
DEFAULT_D_SWEEP = (0.3, 0.5, 1.0)
DEFAULT_CAPACITY_D_SWEEP = tuple(np.round(np.linspace(0.1, 2.0, 16), 6))
DEFAULT_RHO_SWEEP = (10.0,)
DEFAULT_TRIALS = {"moments": 10_000, "eigen-cdf": 1_000, "capacity": 1_000}

_SYSTEM_KEYS = {
    "M": "m_antennas",
    "K": "k_users",
    "fc_hz": "fc_hz",
    "fs_hz": "fs_hz",
    "N": "n_fft",
    "Ng": "n_guard",
    "S": "s_paths",
    "d_over_lambda": "d_over_lambda",
    "n": "subcarrier",
    "gain_mode": "gain_mode",
}


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: base system, sweep lists, trials, seed, output."""

    experiment: str
    system: SystemConfig = field(default_factory=SystemConfig)
    m_values: tuple = DEFAULT_M_SWEEP
    d_values: tuple = DEFAULT_D_SWEEP
    rho_values: tuple = DEFAULT_RHO_SWEEP
    trials: int = 0  # 0 means: experiment-specific default
    seed: int = 0
    output: str | None = None
    threads: int | None = None

    def __post_init__(self):
        if self.experiment not in DEFAULT_TRIALS:
            raise ConfigError(
                f"unknown experiment {self.experiment!r}; "
                f"expected one of {sorted(DEFAULT_TRIALS)}"
            )
        if not self.m_values or not self.d_values or not self.rho_values:
            raise ConfigError("sweep lists must be non-empty")
        if self.trials == 0:
            object.__setattr__(self, "trials", DEFAULT_TRIALS[self.experiment])
        if self.trials < 2:
            raise ConfigError("trials must be at least 2")
        if self.experiment == "eigen-cdf" and self.trials < 100:
            raise ConfigError("CDF experiments need at least 100 trials")

    @classmethod
    def from_dict(cls, raw: dict, experiment: str | None = None) -> "ExperimentConfig":
        system_raw = raw.get("system", {})
        unknown = set(system_raw) - set(_SYSTEM_KEYS)
        if unknown:
            raise ConfigError(f"unknown system keys: {sorted(unknown)}")
        system = SystemConfig(**{_SYSTEM_KEYS[k]: v for k, v in system_raw.items()})
        sweep = raw.get("sweep", {})
        kwargs = {
            "experiment": experiment or raw.get("experiment"),
            "system": system,
            "seed": int(raw.get("seed", 0)),
            "trials": int(raw.get("trials", 0)),
            "output": raw.get("output"),
        }
        if kwargs["experiment"] is None:
            raise ConfigError("config must name an experiment")
        if "m_values" in sweep:
            kwargs["m_values"] = tuple(int(m) for m in sweep["m_values"])
        if "d_values" in sweep:
            kwargs["d_values"] = tuple(float(d) for d in sweep["d_values"])
        if "rho_values" in sweep:
            kwargs["rho_values"] = tuple(float(r) for r in sweep["rho_values"])
        if kwargs["experiment"] == "capacity" and "d_values" not in sweep:
            kwargs["d_values"] = DEFAULT_CAPACITY_D_SWEEP
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path: str, experiment: str | None = None) -> "ExperimentConfig":
        p = Path(path)
        if not p.is_file():
            raise ConfigError(f"config file not found: {path}")
        try:
            raw = json.loads(p.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        return cls.from_dict(raw, experiment=experiment)

    def canonical_dict(self) -> dict:
        sys = self.system
        return {
            "experiment": self.experiment,
            "system": {
                "M": sys.m_antennas,
                "K": sys.k_users,
                "fc_hz": sys.fc_hz,
                "fs_hz": sys.fs_hz,
                "N": sys.n_fft,
                "Ng": sys.n_guard,
                "S": sys.s_paths,
                "d_over_lambda": sys.d_over_lambda,
                "n": sys.subcarrier,
                "gain_mode": sys.gain_mode.value,
            },
            "sweep": {
                "m_values": list(self.m_values),
                "d_values": [float(d) for d in self.d_values],
                "rho_values": [float(r) for r in self.rho_values],
            },
            "trials": self.trials,
            "seed": self.seed,
        }

    def config_hash(self) -> str:
        return config_hash(self.canonical_dict())


def config_hash(canonical: dict) -> str:
    blob = json.dumps(canonical, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


@dataclass
class ResultTable:
    """Rectangular numeric table plus reproducibility metadata."""

    columns: list
    rows: list
    metadata: dict

    def __post_init__(self):
        width = len(self.columns)
        for row in self.rows:
            if len(row) != width:
                raise ConfigError("result table rows must match the column count")

    def column(self, name: str) -> np.ndarray:
        idx = self.columns.index(name)
        return np.array([row[idx] for row in self.rows], dtype=np.float64)

    def _header_lines(self):
        for key in sorted(self.metadata):
            yield f"# {key}: {self.metadata[key]}"

    def to_csv(self, path) -> None:
        lines = list(self._header_lines())
        lines.append(",".join(self.columns))
        for row in self.rows:
            lines.append(",".join(repr(float(v)) for v in row))
        Path(path).write_text("\n".join(lines) + "\n")

    def to_json(self, path) -> None:
        payload = {
            "metadata": self.metadata,
            "columns": self.columns,
            "rows": [[float(v) for v in row] for row in self.rows],
        }
        Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")

    def write(self, path, fmt: str = "csv") -> None:
        if fmt == "csv":
            self.to_csv(path)
        elif fmt == "json":
            self.to_json(path)
        else:
            raise ConfigError(f"unknown output format {fmt!r}")


def _metadata(cfg: ExperimentConfig) -> dict:
    canonical = cfg.canonical_dict()
    return {
        "experiment": cfg.experiment,
        "seed": cfg.seed,
        "config": json.dumps(canonical, sort_keys=True, separators=(",", ":")),
        "config_sha256": config_hash(canonical),
        "tool_version": __version__,
    }


def verify_embedded_hash(path) -> None:
    """Re-derive the config hash embedded in a result file and compare."""
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"result file not found: {path}")
    text = p.read_text()
    if text.lstrip().startswith("{"):
        payload = json.loads(text)
        meta = payload["metadata"]
        embedded_config, embedded_hash = meta["config"], meta["config_sha256"]
    else:
        fields = {}
        for line in text.splitlines():
            if line.startswith("# ") and ": " in line:
                key, value = line[2:].split(": ", 1)
                fields[key] = value
        try:
            embedded_config, embedded_hash = fields["config"], fields["config_sha256"]
        except KeyError as exc:
            raise ConfigError(f"{path} lacks embedded config metadata") from exc
    derived = config_hash(json.loads(embedded_config))
    if derived != embedded_hash:
        raise ConfigError(
            f"{path}: embedded config hash mismatch "
            f"(derived {derived[:12]}…, embedded {embedded_hash[:12]}…)"
        )


def run_moments(cfg: ExperimentConfig) -> ResultTable:
    """Simulated vs analytical moments of g_p g_q*/M over an (M, d) sweep."""
    if cfg.experiment != "moments":
        raise ConfigError("run_moments requires a moments experiment config")
    root = RngStream(cfg.seed)
    rows = []
    point = 0
    for d in sorted(cfg.d_values):
        for m in sorted(cfg.m_values):
            system = cfg.system.with_updates(
                m_antennas=int(m),
                d_over_lambda=float(d),
                gain_mode=GainMode.COMPLEX_GAUSSIAN,
            )
            est = mc_moments(
                system, cfg.trials, cfg.seed, threads=cfg.threads, root=root.child(point)
            )
            rows.append(
                [
                    float(d),
                    int(m),
                    cfg.trials,
                    abs(est.mean),
                    est.variance,
                    abs(analytical_mean_cn(system)),
                    analytical_variance_cn(system),
                    est.mean_std_error,
                ]
            )
            point += 1
    columns = [
        "d_over_lambda",
        "m_antennas",
        "trials",
        "sim_abs_mean",
        "sim_variance",
        "ana_abs_mean",
        "ana_variance",
        "mean_std_error",
    ]
    return ResultTable(columns=columns, rows=rows, metadata=_metadata(cfg))


def _eigen_scenarios(cfg: ExperimentConfig):
    """(M, K, sparse?, d) scenarios: small and massive arrays, sparse
    channels across the d sweep plus the Gaussian benchmark."""
    for m, k in ((6, 6), (128, 6)):
        yield m, k, False, 0.0
        for d in sorted(cfg.d_values):
            yield m, k, True, float(d)


def run_eigen_cdf(cfg: ExperimentConfig) -> ResultTable:
    """Empirical CDFs of the extreme eigenvalues of G G*."""
    if cfg.experiment != "eigen-cdf":
        raise ConfigError("run_eigen_cdf requires an eigen-cdf experiment config")
    root = RngStream(cfg.seed)
    rows = []
    for scenario_idx, (m, k, sparse, d) in enumerate(_eigen_scenarios(cfg)):
        if k > m:
            raise ConfigError(f"K={k} exceeds M={m}")
        scenario_root = root.child(scenario_idx)
        lam_min, lam_max = [], []
        for trial in range(cfg.trials):
            rng = scenario_root.child(trial)
            if sparse:
                system = cfg.system.with_updates(
                    m_antennas=m, k_users=k, d_over_lambda=d
                )
                channel = build_channel_matrix(system, rng)
            else:
                channel = gaussian_baseline(m, k, rng)
            summary = eigen_summary(channel)
            lam_min.append(summary.lambda_min)
            lam_max.append(summary.lambda_max)
        for is_max, samples in ((0, lam_min), (1, lam_max)):
            for value, prob in empirical_cdf(samples):
                rows.append([m, k, int(sparse), d, is_max, value, prob])
    columns = [
        "m_antennas",
        "k_users",
        "is_sparse",
        "d_over_lambda",
        "eig_is_max",
        "eigenvalue",
        "probability",
    ]
    return ResultTable(columns=columns, rows=rows, metadata=_metadata(cfg))


def run_capacity(cfg: ExperimentConfig) -> ResultTable:
    """Mean per-user capacity of sparse channels against antenna
    spacing, with the (d-independent) Gaussian benchmark and the
    large-M asymptote."""
    if cfg.experiment != "capacity":
        raise ConfigError("run_capacity requires a capacity experiment config")
    m, k = cfg.system.m_antennas, cfg.system.k_users
    if k > m:
        raise ConfigError(f"K={k} exceeds M={m}")
    root = RngStream(cfg.seed)

    rows = []
    for rho_idx, rho in enumerate(sorted(cfg.rho_values)):
        gauss_root = root.child(rho_idx).child(0)
        gauss_mean = float(
            np.mean(
                [
                    capacity(gaussian_baseline(m, k, gauss_root.child(t)), rho).per_user
                    for t in range(cfg.trials)
                ]
            )
        )
        asymptotic_per_user = float(np.log2(1.0 + rho * m))
        for d_idx, d in enumerate(sorted(cfg.d_values)):
            point_root = root.child(rho_idx).child(1 + d_idx)
            system = cfg.system.with_updates(d_over_lambda=float(d))
            sparse_mean = float(
                np.mean(
                    [
                        capacity(
                            build_channel_matrix(system, point_root.child(t)), rho
                        ).per_user
                        for t in range(cfg.trials)
                    ]
                )
            )
            rows.append(
                [rho, float(d), cfg.trials, sparse_mean, gauss_mean, asymptotic_per_user]
            )
    columns = [
        "rho_d",
        "d_over_lambda",
        "trials",
        "sparse_per_user",
        "gaussian_per_user",
        "asymptotic_per_user",
    ]
    return ResultTable(columns=columns, rows=rows, metadata=_metadata(cfg))
