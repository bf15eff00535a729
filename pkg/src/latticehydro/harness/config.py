"""Experiment configuration: parsing, validation, canonical hashing."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import yaml

from ..errors import ConfigurationError
from ..measures import ProfileSpec, TestFunction, default_dictionary

EXPERIMENT_KINDS = (
    "hydro-exclusion",
    "hydro-zr",
    "front",
    "potts-profile",
    "coupling",
    "stationarity",
    "flux",
)


@dataclass
class ExperimentConfig:
    """Everything one experiment needs; hashable for reproducibility."""

    kind: str
    n_list: list[int]
    T: float
    replicas: int
    seed: int
    r_b: float = 1.0
    rho0: ProfileSpec | None = None
    zeta0: ProfileSpec | None = None
    zeta0_b: ProfileSpec | None = None  # upper copy for coupling experiments
    du: float = 1.0 / 200.0
    cfl_safety: float = 0.6
    n_times: int = 2
    dictionary: str | list = "default"
    block_eps: float = 0.05
    tolerance: float | None = None
    out: str = "results"
    workers: int = 1
    mode: str = "basic"
    k_sets: list = field(default_factory=list)
    alpha: float | None = None
    level: float = 0.01
    r_hi: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in EXPERIMENT_KINDS:
            raise ConfigurationError(f"unknown experiment kind {self.kind!r}")
        if not self.n_list or any(
            b <= a for a, b in zip(self.n_list, self.n_list[1:])
        ):
            raise ConfigurationError("N list must be nonempty and strictly increasing")
        if self.replicas < 1:
            raise ConfigurationError("replica count must be >= 1")
        if self.T <= 0 or self.du <= 0:
            raise ConfigurationError("T and du must be positive")
        if self.r_b < 0:
            raise ConfigurationError("r_b must be nonnegative")
        try:
            if self.rho0 is not None:
                self.rho0.validate_density()
            if self.zeta0 is not None:
                self.zeta0.validate_occupancy()
            if self.zeta0_b is not None:
                self.zeta0_b.validate_occupancy()
        except ValueError as exc:
            raise ConfigurationError(f"profile validation failed: {exc}") from exc
        if self.rho0 is not None and (
            self.rho0.support[1] > 1e-12 or self.rho0.support[0] >= 0
        ):
            raise ConfigurationError("rho0 support must be a negative interval")
        if self.zeta0 is not None and self.zeta0.support[0] < -1e-12:
            raise ConfigurationError("zeta0 support must be a positive interval")
        needs_rho = self.kind in ("hydro-exclusion", "hydro-zr", "front", "flux",
                                  "potts-profile", "coupling")
        if needs_rho and self.rho0 is None:
            raise ConfigurationError(f"{self.kind} needs a rho0 profile")
        needs_zeta = self.kind in ("hydro-exclusion", "hydro-zr", "potts-profile",
                                   "coupling")
        if needs_zeta and self.zeta0 is None:
            raise ConfigurationError(f"{self.kind} needs a zeta0 profile")
        if self.kind == "coupling" and self.zeta0_b is None:
            raise ConfigurationError("coupling needs the second profile zeta0_b")
        if self.kind == "stationarity" and self.alpha is None:
            raise ConfigurationError("stationarity needs the equilibrium alpha")

    # -- geometry ------------------------------------------------------------

    @property
    def schedule(self) -> np.ndarray:
        return np.linspace(0.0, self.T, self.n_times + 1)

    @property
    def z_lo(self) -> float:
        if self.rho0 is None:
            return -default_halfwidth(self.T)
        return float(self.rho0.support[0])

    @property
    def e_hi(self) -> float:
        if self.zeta0 is None:
            return default_halfwidth(self.T)
        return float(self.zeta0.support[1])

    def test_functions(self, side: str) -> list[TestFunction]:
        if self.dictionary == "default":
            return default_dictionary(side)
        return [
            TestFunction(d["id"], d["kind"], d["params"]) for d in self.dictionary
        ]

    # -- identity ------------------------------------------------------------

    def canonical(self) -> dict:
        """Result-determining fields only (execution knobs excluded)."""
        data = asdict(self)
        data.pop("out", None)
        data.pop("workers", None)
        for key in ("rho0", "zeta0", "zeta0_b"):
            prof = getattr(self, key)
            if prof is not None:
                data[key] = {
                    "kind": prof.kind,
                    "params": prof.params,
                    "support": list(prof.support),
                }
        return data

    @property
    def config_hash(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def default_halfwidth(T: float, support_radius: float = 2.0) -> float:
    """Window half-width rule: 4 (sqrt(T) + profile/test support radius)."""
    return float(np.ceil(4.0 * (np.sqrt(T) + support_radius)))


def _parse_profile(data) -> ProfileSpec | None:
    if data is None:
        return None
    return ProfileSpec(data["kind"], dict(data["params"]), tuple(data["support"]))


def config_from_dict(data: dict, **overrides) -> ExperimentConfig:
    data = dict(data)
    data.update({k: v for k, v in overrides.items() if v is not None})
    known = {
        "kind", "n_list", "T", "replicas", "seed", "r_b", "rho0", "zeta0",
        "zeta0_b", "du", "cfl_safety", "n_times", "dictionary", "block_eps",
        "tolerance", "out", "workers", "mode", "k_sets", "alpha", "level",
        "r_hi",
    }
    unknown = set(data) - known - {"N"}
    if unknown:
        raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
    if "N" in data and "n_list" not in data:
        data["n_list"] = data.pop("N")
    for key in ("rho0", "zeta0", "zeta0_b"):
        if key in data:
            data[key] = _parse_profile(data[key])
    data.setdefault("seed", 0)
    data.setdefault("replicas", 1)
    if isinstance(data.get("n_list"), int):
        data["n_list"] = [data["n_list"]]
    return ExperimentConfig(**data)


def load_config(path: str | Path, **overrides) -> ExperimentConfig:
    """Load a YAML (or JSON) experiment file, applying CLI overrides."""
    with open(path) as fh:
        data = yaml.safe_load(fh)
    if not isinstance(data, dict):
        raise ConfigurationError(f"config file {path} must hold a mapping")
    return config_from_dict(data, **overrides)
