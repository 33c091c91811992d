"""
Run configuration: a small YAML file with command-line overrides on top.

    grid:       {length: 512.0, num_points: 1048576}
    experiment: all
    parameters: {k: 5, n: null, i: null, sigma: 4.0, p: 2.0, epsilon: 0.05,
                 model: camassa-holm, b: 2.0, j_list: [4, 5, 6, 7, 8],
                 t_end: 0.01, t_list: null}
    thresholds: {c_star: 0.001, ...}      # any field of Thresholds
    output:     {dir: reports, format: both}
    seed:       0

Every key is optional; unknown keys are rejected with their dotted path.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import yaml

from .errors import ConfigurationError
from .experiments import Thresholds
from .pde_models import ModelKind
from .spectral_core import DEFAULT_LENGTH, DEFAULT_POINTS, Grid

__all__ = ["EXPERIMENTS", "ExperimentParams", "RunConfig", "load_config", "parse_config"]

EXPERIMENTS = (
    "localization",
    "ch-lower-bound",
    "novikov-lower-bound",
    "remainder",
    "discontinuity",
    "conservation",
)
FORMATS = ("csv", "json", "both")
MODELS = ("camassa-holm", "b-family", "novikov")


@dataclass(frozen=True)
class ExperimentParams:
    """Experiment parameters; None means "use the experiment's default"."""

    k: int = 5
    n: tuple | None = None
    i: int | None = None
    sigma: float = 4.0
    p: float = 2.0
    epsilon: float = 0.05
    model: str = "camassa-holm"
    b: float = 2.0
    j_list: tuple = (4, 5, 6, 7, 8)
    t_end: float = 0.01
    t_list: tuple | None = None

    def __post_init__(self):
        if self.model not in MODELS:
            raise ConfigurationError(f"parameters.model: unknown model {self.model!r} (choose from {', '.join(MODELS)})")
        if self.model == "camassa-holm" and self.b != 2.0:
            raise ConfigurationError("parameters.b: Camassa-Holm is b = 2; use model b-family for other b")

    def model_kind(self) -> ModelKind:
        return ModelKind(self.model, self.b if self.model == "b-family" else 2.0)


@dataclass(frozen=True)
class RunConfig:
    grid_length: float = DEFAULT_LENGTH
    grid_points: int = DEFAULT_POINTS
    experiment: str = "all"
    params: ExperimentParams = field(default_factory=ExperimentParams)
    thresholds: Thresholds = field(default_factory=Thresholds)
    out_dir: str = "reports"
    format: str = "both"
    seed: int = 0

    def __post_init__(self):
        if self.experiment != "all" and self.experiment not in EXPERIMENTS:
            raise ConfigurationError(f"experiment: unknown experiment {self.experiment!r}")
        if self.format not in FORMATS:
            raise ConfigurationError(f"output.format: must be one of {', '.join(FORMATS)}, got {self.format!r}")

    def grid(self) -> Grid:
        return Grid(self.grid_length, self.grid_points)

    def to_dict(self) -> dict:
        """Plain-data form; `parse_config(cfg.to_dict()) == cfg`."""
        return {
            "grid": {"length": self.grid_length, "num_points": self.grid_points},
            "experiment": self.experiment,
            "parameters": _plain(asdict(self.params)),
            "thresholds": self.thresholds.to_dict(),
            "output": {"dir": self.out_dir, "format": self.format},
            "seed": self.seed,
        }

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False)

    def with_overrides(self, **overrides) -> "RunConfig":
        """Apply flat overrides (grid_points, k, epsilon, ...); None values are skipped."""
        top, par = {}, {}
        names = {f.name for f in fields(ExperimentParams)}
        for key, value in overrides.items():
            if value is None:
                continue
            if key in names:
                par[key] = _coerce(f"parameters.{key}", key, value)
            elif key in {f.name for f in fields(RunConfig)} - {"params", "thresholds"}:
                top[key] = _coerce(key, key, value) if key in _KINDS else value
            else:
                raise ConfigurationError(f"{key}: unknown override")
        if par:
            top["params"] = replace(self.params, **par)
        return replace(self, **top)


def _plain(d: dict) -> dict:
    return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}


_SECTIONS = {"grid", "experiment", "parameters", "thresholds", "output", "seed"}


def _check_keys(path: str, given: dict, allowed) -> None:
    if not isinstance(given, dict):
        raise ConfigurationError(f"{path}: expected a mapping, got {type(given).__name__}")
    for key in given:
        if key not in allowed:
            raise ConfigurationError(f"{path + '.' if path else ''}{key}: unknown key")


_KINDS = {
    "grid_length": "float",
    "grid_points": "int",
    "seed": "int",
    "k": "int",
    "n": "ints?",
    "i": "int?",
    "sigma": "float",
    "p": "float",
    "epsilon": "float",
    "model": "str",
    "b": "float",
    "j_list": "ints",
    "t_end": "float",
    "t_list": "floats?",
    "remainder_slope": "floats",
    "first_slope": "floats",
    "control_slope": "floats",
}


def _to_int(v):
    if isinstance(v, bool) or (isinstance(v, float) and not v.is_integer()):
        raise ValueError("expected an integer")
    return int(v)


def _to_float(v):
    if isinstance(v, str) and v.strip().lower() in ("inf", "infinity"):
        return math.inf
    return float(v)


def _coerce(path: str, name: str, value):
    """Convert a YAML or command-line value to the declared kind of `name`.

    Threshold fields not listed in the table are floats.
    """
    kind = _KINDS.get(name, "float")
    optional = kind.endswith("?")
    kind = kind.rstrip("?")
    if value is None:
        if optional:
            return None
        raise ConfigurationError(f"{path}: a value is required")
    try:
        if kind in ("ints", "floats"):
            seq = value if isinstance(value, (list, tuple)) else [value]
            conv = _to_int if kind == "ints" else _to_float
            return tuple(conv(v) for v in seq)
        if kind == "int":
            return _to_int(value)
        if kind == "float":
            return _to_float(value)
        return str(value)
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"{path}: cannot read {value!r} ({exc})") from None


def _section(data: dict, name: str):
    """The mapping under `name`; an absent or empty (null) section is {}."""
    value = data.get(name)
    return {} if value is None else value


def parse_config(data: dict | None) -> RunConfig:
    data = {} if data is None else data
    _check_keys("", data, _SECTIONS)
    kw = {}
    grid = _section(data, "grid")
    _check_keys("grid", grid, {"length", "num_points"})
    if "length" in grid:
        kw["grid_length"] = _coerce("grid.length", "grid_length", grid["length"])
    if "num_points" in grid:
        kw["grid_points"] = _coerce("grid.num_points", "grid_points", grid["num_points"])
    if "experiment" in data:
        kw["experiment"] = str(data["experiment"])
    if "seed" in data:
        kw["seed"] = _coerce("seed", "seed", data["seed"])

    params = _section(data, "parameters")
    _check_keys("parameters", params, {f.name for f in fields(ExperimentParams)})
    kw["params"] = ExperimentParams(
        **{k: _coerce(f"parameters.{k}", k, v) for k, v in params.items()}
    )
    thr = _section(data, "thresholds")
    _check_keys("thresholds", thr, {f.name for f in fields(Thresholds)})
    kw["thresholds"] = Thresholds(**{k: _coerce(f"thresholds.{k}", k, v) for k, v in thr.items()})

    out = _section(data, "output")
    _check_keys("output", out, {"dir", "format"})
    if "dir" in out:
        kw["out_dir"] = str(out["dir"])
    if "format" in out:
        kw["format"] = str(out["format"])
    return RunConfig(**kw)


def load_config(path) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"config file not found: {path}")
    try:
        data = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"{path}: not valid YAML ({exc})") from None
    return parse_config(data)
