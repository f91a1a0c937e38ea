"""Scenario configuration files (TOML) with field-path validation.

Example::

    [carrier]
    wavelength_m = 0.125

    [array]
    n_elements = 64
    spacing_in_wavelengths = 0.5
    height_m = 3.0

    [ue]
    initial_position_m = [200.0, 0.0]
    speed_mps = [2.0, 4.0, 6.0]
    turn_radius_m = 10.0          # or a list, or "linear"
    # heading_deg = 0.0           # fixes the initial heading instead of sampling it

    [sweep]                       # optional; used by the figure drivers
    variable = "distance"         # distance | radius
    range = [10.0, 300.0]
    points = 30
    spacing = "linear"            # linear | log

    [correlation]
    variants = ["exact", "no_polarization"]
    n_trials = 2000
    seed = 7
    far_field = false
    tau_grid = { max_s = 2.0, n_geometric = 40, n_linear = 60 }

    [solver]
    zeta = 0.9
    tau_max_s = 20.0
    tol_s = 1e-6
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Tuple, Union

import tomli
import tomli_w

from ..correlation import VARIANTS
from ..errors import ConfigError
from ..geometry import ArrayConfig

SEED_ENV = "EMCOHERENCE_SEED"
TRIALS_ENV = "EMCOHERENCE_TRIALS"
FULL_SCALE_TRIALS = 20_000


@dataclass(frozen=True)
class CarrierConfig:
    wavelength_m: float


@dataclass(frozen=True)
class ArraySection:
    n_elements: int
    spacing_in_wavelengths: float
    height_m: float


@dataclass(frozen=True)
class UEConfig:
    initial_position_m: Tuple[float, float]
    speed_mps: Tuple[float, ...]
    turn_radius_m: Union[Tuple[float, ...], str]
    heading_deg: Optional[float] = None

    @property
    def is_linear(self) -> bool:
        return self.turn_radius_m == "linear"


@dataclass(frozen=True)
class SweepConfig:
    variable: str
    range: Tuple[float, float]
    points: int
    spacing: str = "linear"


@dataclass(frozen=True)
class TauGridConfig:
    max_s: float
    n_geometric: int = 40
    n_linear: int = 60


@dataclass(frozen=True)
class CorrelationConfig:
    variants: Tuple[str, ...]
    n_trials: int
    seed: int
    tau_grid: TauGridConfig
    far_field: bool = False


@dataclass(frozen=True)
class SolverConfig:
    zeta: float
    tau_max_s: float
    tol_s: float


@dataclass(frozen=True)
class ScenarioConfig:
    carrier: CarrierConfig
    array: ArraySection
    ue: UEConfig
    correlation: CorrelationConfig
    solver: SolverConfig
    sweep: Optional[SweepConfig] = None

    def array_config(self) -> ArrayConfig:
        lam = self.carrier.wavelength_m
        return ArrayConfig(self.array.n_elements, self.array.spacing_in_wavelengths * lam, self.array.height_m, lam)


# -- parsing ---------------------------------------------------------------

_MISSING = object()


def _table(data, key, path, required=True):
    value = data.get(key, _MISSING)
    full = f"{path}.{key}" if path else key
    if value is _MISSING:
        if required:
            raise ConfigError(full, "missing required table")
        return None
    if not isinstance(value, dict):
        raise ConfigError(full, "expected a table")
    return value


def _value(data, key, path, default=_MISSING):
    full = f"{path}.{key}"
    if key not in data:
        if default is _MISSING:
            raise ConfigError(full, "missing required field")
        return default
    return data[key]


def _number(data, key, path, positive=True, default=_MISSING):
    full = f"{path}.{key}"
    value = _value(data, key, path, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(full, f"expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(full, "must be finite")
    if positive and not value > 0:
        raise ConfigError(full, f"must be positive, got {value!r}")
    return value


def _integer(data, key, path, minimum=1, default=_MISSING):
    full = f"{path}.{key}"
    value = _value(data, key, path, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(full, f"expected an integer, got {value!r}")
    if value < minimum:
        raise ConfigError(full, f"must be >= {minimum}, got {value}")
    return value


def _number_list(value, full, length=None, positive=True):
    items = value if isinstance(value, list) else [value]
    if not items:
        raise ConfigError(full, "must not be empty")
    out = []
    for i, item in enumerate(items):
        if isinstance(item, bool) or not isinstance(item, (int, float)) or not math.isfinite(item):
            raise ConfigError(f"{full}[{i}]", f"expected a finite number, got {item!r}")
        if positive and not item > 0:
            raise ConfigError(f"{full}[{i}]", f"must be positive, got {item!r}")
        out.append(float(item))
    if length is not None and len(out) != length:
        raise ConfigError(full, f"expected {length} values, got {len(out)}")
    return tuple(out)


def _choice(data, key, path, choices, default=_MISSING):
    value = _value(data, key, path, default)
    if value not in choices:
        raise ConfigError(f"{path}.{key}", f"expected one of {list(choices)}, got {value!r}")
    return value


def config_from_dict(data: dict) -> ScenarioConfig:
    carrier_t = _table(data, "carrier", "")
    array_t = _table(data, "array", "")
    ue_t = _table(data, "ue", "")
    corr_t = _table(data, "correlation", "")
    solver_t = _table(data, "solver", "")
    sweep_t = _table(data, "sweep", "", required=False)

    carrier = CarrierConfig(_number(carrier_t, "wavelength_m", "carrier"))
    array = ArraySection(
        n_elements=_integer(array_t, "n_elements", "array"),
        spacing_in_wavelengths=_number(array_t, "spacing_in_wavelengths", "array"),
        height_m=_number(array_t, "height_m", "array"),
    )

    position = _number_list(_value(ue_t, "initial_position_m", "ue"), "ue.initial_position_m", length=2,
                            positive=False)
    if not position[0] > 0:
        raise ConfigError("ue.initial_position_m[0]", "x must be positive (UE in front of the array)")
    speeds = _number_list(_value(ue_t, "speed_mps", "ue"), "ue.speed_mps")
    radius = _value(ue_t, "turn_radius_m", "ue")
    if isinstance(radius, str):
        if radius != "linear":
            raise ConfigError("ue.turn_radius_m", f"expected a number, a list or \"linear\", got {radius!r}")
    else:
        radius = _number_list(radius, "ue.turn_radius_m")
    heading = _number(ue_t, "heading_deg", "ue", positive=False, default=None)
    ue = UEConfig(position, speeds, radius, heading)

    variants = _value(corr_t, "variants", "correlation")
    if isinstance(variants, str):
        variants = [variants]
    if not isinstance(variants, list) or not variants:
        raise ConfigError("correlation.variants", "expected a non-empty list")
    for i, v in enumerate(variants):
        if v not in VARIANTS:
            raise ConfigError(f"correlation.variants[{i}]", f"expected one of {list(VARIANTS)}, got {v!r}")
    grid_t = _table(corr_t, "tau_grid", "correlation")
    grid = TauGridConfig(
        max_s=_number(grid_t, "max_s", "correlation.tau_grid"),
        n_geometric=_integer(grid_t, "n_geometric", "correlation.tau_grid", default=40),
        n_linear=_integer(grid_t, "n_linear", "correlation.tau_grid", default=60),
    )
    far_field = _value(corr_t, "far_field", "correlation", default=False)
    if not isinstance(far_field, bool):
        raise ConfigError("correlation.far_field", f"expected true/false, got {far_field!r}")
    correlation = CorrelationConfig(
        variants=tuple(variants),
        n_trials=_integer(corr_t, "n_trials", "correlation"),
        seed=_integer(corr_t, "seed", "correlation", minimum=0),
        tau_grid=grid,
        far_field=far_field,
    )

    zeta = _number(solver_t, "zeta", "solver")
    if not zeta < 1:
        raise ConfigError("solver.zeta", f"must lie in (0, 1), got {zeta!r}")
    solver = SolverConfig(zeta, _number(solver_t, "tau_max_s", "solver"), _number(solver_t, "tol_s", "solver"))

    sweep = None
    if sweep_t is not None:
        lo_hi = _number_list(_value(sweep_t, "range", "sweep"), "sweep.range", length=2)
        if not lo_hi[0] <= lo_hi[1]:
            raise ConfigError("sweep.range", "lower end exceeds upper end")
        sweep = SweepConfig(
            variable=_choice(sweep_t, "variable", "sweep", ("distance", "radius")),
            range=lo_hi,
            points=_integer(sweep_t, "points", "sweep"),
            spacing=_choice(sweep_t, "spacing", "sweep", ("linear", "log"), default="linear"),
        )
        if sweep.variable == "distance" and lo_hi[0] <= array.height_m:
            raise ConfigError("sweep.range[0]", "distance must exceed the array height")

    return ScenarioConfig(carrier, array, ue, correlation, solver, sweep)


def config_to_dict(cfg: ScenarioConfig) -> dict:
    ue = {
        "initial_position_m": list(cfg.ue.initial_position_m),
        "speed_mps": list(cfg.ue.speed_mps),
        "turn_radius_m": cfg.ue.turn_radius_m if cfg.ue.is_linear else list(cfg.ue.turn_radius_m),
    }
    if cfg.ue.heading_deg is not None:
        ue["heading_deg"] = cfg.ue.heading_deg
    out = {
        "carrier": {"wavelength_m": cfg.carrier.wavelength_m},
        "array": {
            "n_elements": cfg.array.n_elements,
            "spacing_in_wavelengths": cfg.array.spacing_in_wavelengths,
            "height_m": cfg.array.height_m,
        },
        "ue": ue,
        "correlation": {
            "variants": list(cfg.correlation.variants),
            "n_trials": cfg.correlation.n_trials,
            "seed": cfg.correlation.seed,
            "far_field": cfg.correlation.far_field,
            "tau_grid": {
                "max_s": cfg.correlation.tau_grid.max_s,
                "n_geometric": cfg.correlation.tau_grid.n_geometric,
                "n_linear": cfg.correlation.tau_grid.n_linear,
            },
        },
        "solver": {"zeta": cfg.solver.zeta, "tau_max_s": cfg.solver.tau_max_s, "tol_s": cfg.solver.tol_s},
    }
    if cfg.sweep is not None:
        out["sweep"] = {
            "variable": cfg.sweep.variable,
            "range": list(cfg.sweep.range),
            "points": cfg.sweep.points,
            "spacing": cfg.sweep.spacing,
        }
    return out


def loads_config(text: str) -> ScenarioConfig:
    try:
        data = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError("<file>", f"not valid TOML: {exc}") from exc
    return config_from_dict(data)


def load_config(path) -> ScenarioConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read config: {exc.strerror}") from exc
    return loads_config(text)


def dumps_config(cfg: ScenarioConfig) -> str:
    return tomli_w.dumps(config_to_dict(cfg))


def with_overrides(cfg: ScenarioConfig, seed=None, trials=None, env=None) -> ScenarioConfig:
    """Apply seed/trial overrides: explicit arguments win over environment variables."""
    env = os.environ if env is None else env
    if seed is None and env.get(SEED_ENV):
        seed = _env_int(env, SEED_ENV, minimum=0)
    if trials is None and env.get(TRIALS_ENV):
        trials = _env_int(env, TRIALS_ENV, minimum=1)
    corr = cfg.correlation
    if seed is not None:
        corr = replace(corr, seed=int(seed))
    if trials is not None:
        corr = replace(corr, n_trials=int(trials))
    return replace(cfg, correlation=corr)


def _env_int(env, name, minimum):
    try:
        value = int(env[name])
    except ValueError:
        raise ConfigError(f"${name}", f"expected an integer, got {env[name]!r}") from None
    if value < minimum:
        raise ConfigError(f"${name}", f"must be >= {minimum}")
    return value


# -- built-in profiles -------------------------------------------------------

def _base(**ue):
    return dict(
        carrier={"wavelength_m": 0.125},
        array={"n_elements": 64, "spacing_in_wavelengths": 0.5, "height_m": 3.0},
        ue=ue,
        solver={"zeta": 0.9, "tau_max_s": 20.0, "tol_s": 1e-6},
    )


def default_config(profile) -> ScenarioConfig:
    """Built-in profiles: ``3``, ``4``, ``5`` (figure drivers), ``"turning"``, ``"linear"``."""
    profile = str(profile)
    corr = {"variants": ["exact", "no_polarization"], "n_trials": 2000, "seed": 7,
            "tau_grid": {"max_s": 2.0, "n_geometric": 40, "n_linear": 60}}
    if profile in ("3", "turning"):
        data = _base(initial_position_m=[200.0, 0.0], speed_mps=[2.0, 4.0, 6.0] if profile == "3" else [2.0],
                     turn_radius_m=10.0)
        if profile == "3":
            data["sweep"] = {"variable": "distance", "range": [10.0, 300.0], "points": 30, "spacing": "linear"}
    elif profile in ("4", "linear"):
        data = _base(initial_position_m=[100.0, 0.0], speed_mps=[2.0, 4.0, 6.0] if profile == "4" else [10.0],
                     turn_radius_m="linear", heading_deg=0.0)
        if profile == "4":
            data["sweep"] = {"variable": "distance", "range": [10.0, 300.0], "points": 30, "spacing": "linear"}
    elif profile == "5":
        data = _base(initial_position_m=[200.0, 0.0], speed_mps=4.0, turn_radius_m=10.0)
        data["sweep"] = {"variable": "radius", "range": [2.0, 2000.0], "points": 13, "spacing": "log"}
        data["solver"]["tau_max_s"] = 60.0
        corr["variants"] = ["exact", "polar_only", "no_polarization"]
    else:
        raise ValueError(f"unknown profile {profile!r}")
    data["correlation"] = corr
    return config_from_dict(data)
