"""Run configuration: built-in defaults, an optional YAML/JSON file, then flags."""
import logging
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import yaml

from trijp.rodrigues import IndexPair, ParamSet, PreconditionError
from trijp.scalar import Mode

log = logging.getLogger(__name__)


class ConfigError(ValueError):
    """The configuration cannot be turned into a valid run."""


@dataclass
class GridSpec:
    z_min: float = 2.0
    z_max: float = 20.0
    w_min: float = 2.0
    w_max: float = 20.0
    steps: int = 46


@dataclass
class RunConfig:
    """
    Everything a command needs. The defaults reproduce the two-measure
    degree-4 example: alphas (0, 3/2), betas (1/2, 4/3), gamma 0 and the
    pairs (2, 1), (2, 1).
    """

    alphas: List[str] = field(default_factory=lambda: ["0", "3/2"])
    betas: List[str] = field(default_factory=lambda: ["1/2", "4/3"])
    gamma: str = "0"
    pairs: List[str] = field(default_factory=lambda: ["2:1", "2:1"])
    max_degree: Optional[int] = None
    quad_nodes: int = 64
    max_quad_nodes: int = 1024
    quad_rtol: float = 1e-10
    tol: float = 1e-14
    verify_tol: float = 1e-10
    pole_threshold: float = 1e-12
    floor: float = 1.05
    grid: GridSpec = field(default_factory=GridSpec)
    out: Optional[str] = None
    format: str = "csv"
    perturb: Optional[Tuple[int, int]] = None

    @property
    def params(self) -> ParamSet:
        try:
            params = ParamSet.parse(self.alphas, self.betas, self.gamma)
        except (ValueError, ZeroDivisionError) as e:
            raise ConfigError(f"Invalid weight parameters: {e}") from e
        return params

    @property
    def index_pairs(self) -> List[IndexPair]:
        try:
            pairs = [IndexPair.parse(p) for p in self.pairs]
        except PreconditionError as e:
            raise ConfigError(str(e)) from e
        return pairs

    def validate(self) -> "RunConfig":
        params, pairs = self.params, self.index_pairs
        if len(pairs) != params.r:
            raise ConfigError(f"{len(pairs)} index pairs given for {params.r} measures")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"Unknown output format {self.format!r}")
        if self.quad_nodes < 1:
            raise ConfigError(f"quad_nodes must be positive, got {self.quad_nodes}")
        if self.grid.steps < 0:
            raise ConfigError(f"Grid steps must be nonnegative, got {self.grid.steps}")
        if self.grid.steps:
            for name in ("z_min", "w_min"):
                value = getattr(self.grid, name)
                if not value > self.floor:
                    raise ConfigError(
                        f"grid.{name}={value} must exceed the floor {self.floor}"
                    )
        if params.mode is Mode.FLOAT:
            log.warning("Decimal parameters given: running in floating point mode")
        return self

    def check_point(self, z: float, w: float):
        if not (z > self.floor and w > self.floor):
            raise ConfigError(f"Point ({z}, {w}) must lie above the floor {self.floor}")


def _split_list(value) -> List[str]:
    if isinstance(value, str):
        return [part.strip() for part in value.split(",") if part.strip()]
    return [
        str(v) if not isinstance(v, (list, tuple)) else f"{v[0]}:{v[1]}" for v in value
    ]


def _parse_key(value) -> Tuple[int, int]:
    if isinstance(value, str):
        l, m = value.replace(",", ":").split(":")
        return int(l), int(m)
    l, m = value
    return int(l), int(m)


def _normalize(raw: Dict[str, Any]) -> Dict[str, Any]:
    """Coerce file or flag values into RunConfig field types."""
    known = {f.name for f in fields(RunConfig)}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"Unknown configuration keys: {sorted(unknown)}")
    out = dict(raw)
    try:
        for key in ("alphas", "betas"):
            if key in out:
                out[key] = _split_list(out[key])
        if "pairs" in out:
            pairs = out["pairs"]
            if isinstance(pairs, str):
                out["pairs"] = _split_list(pairs)
            else:
                out["pairs"] = [
                    p if isinstance(p, str) else f"{p[0]}:{p[1]}" for p in pairs
                ]
        if "gamma" in out:
            out["gamma"] = str(out["gamma"])
        if "perturb" in out and out["perturb"] is not None:
            out["perturb"] = _parse_key(out["perturb"])
        if "grid" in out and isinstance(out["grid"], dict):
            out["grid"] = GridSpec(**out["grid"])
        for key in ("quad_nodes", "max_quad_nodes"):
            if key in out:
                out[key] = int(out[key])
        if out.get("max_degree") is not None:
            out["max_degree"] = int(out["max_degree"])
        for key in ("quad_rtol", "tol", "verify_tol", "pole_threshold", "floor"):
            if key in out:
                out[key] = float(out[key])
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Cannot read configuration: {e}") from e
    return out


def load_config_file(path) -> Dict[str, Any]:
    """Read a YAML (or JSON) mapping of RunConfig fields."""
    path = Path(path)
    try:
        with open(path, "r") as file:
            data = yaml.safe_load(file)
    except (OSError, yaml.YAMLError) as e:
        raise ConfigError(f"Cannot load config file {path}: {e}") from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"Config file {path} must contain a mapping")
    log.info(f"Loaded configuration from {path}")
    return data


def build_config(config_file=None, **overrides) -> RunConfig:
    """
    Merge defaults, the config file and command-line overrides (None means
    "not given") into a validated RunConfig.
    """
    config = RunConfig()
    if config_file is not None:
        config = replace(config, **_normalize(load_config_file(config_file)))
    grid_keys = {f.name for f in fields(GridSpec)}
    grid_overrides = {k: overrides.pop(k) for k in list(overrides) if k in grid_keys}
    given = {k: v for k, v in overrides.items() if v is not None}
    config = replace(config, **_normalize(given))
    grid_given = {k: v for k, v in grid_overrides.items() if v is not None}
    if grid_given:
        config = replace(config, grid=replace(config.grid, **grid_given))
    return config.validate()
