"""Sweep drivers for the three coherence-time figures and CSV emission."""
from __future__ import annotations

import io
import logging
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..closed_form import (
    coherence_time_linear,
    coherence_time_linear_lower_bound,
    coherence_time_turning,
    linear_scenario_from_state,
    turning_scenario_from_state,
)
from ..coherence import CoherenceResult, quarter_wavelength_result, solve_numeric
from ..correlation import TrialPlan, correlation_source, default_tau_grid
from ..errors import ConfigError
from ..geometry import TrajectoryState
from .config import ScenarioConfig

FIGURE3_HEADER = ("distance_m", "speed_mps", "t_em_simulated_s", "t_em_closed_s", "t_em_no_polarization_s")
FIGURE4_HEADER = ("distance_m", "speed_mps", "t_em_simulated_s", "t_em_lower_bound_s", "t_em_no_polarization_s")
FIGURE5_HEADER = ("radius_m", "t_em_simulated_s", "t_em_polar_only_s", "t_em_no_polarization_s")

log = logging.getLogger(__name__)

_NUMERIC_METHOD = {"exact": "numeric_exact", "no_polarization": "numeric_no_polarization",
                   "polar_only": "numeric_polar_only"}


def format_cell(value) -> str:
    if not math.isfinite(value):
        raise ValueError(f"refusing to emit non-finite CSV cell {value!r}")
    return format(float(value), ".9g")


@dataclass
class Table:
    header: Tuple[str, ...]
    rows: List[Tuple[float, ...]] = field(default_factory=list)

    def column(self, name) -> np.ndarray:
        i = self.header.index(name)
        return np.array([row[i] for row in self.rows])

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(self.header) + "\n")
        for row in self.rows:
            buf.write(",".join(format_cell(v) for v in row) + "\n")
        return buf.getvalue()

    def write(self, path):
        Path(path).write_text(self.to_csv(), encoding="utf-8", newline="")


def sweep_values(cfg: ScenarioConfig) -> np.ndarray:
    if cfg.sweep is None:
        raise ConfigError("sweep", "missing required table for figure drivers")
    lo, hi = cfg.sweep.range
    if cfg.sweep.spacing == "log":
        return np.geomspace(lo, hi, cfg.sweep.points)
    return np.linspace(lo, hi, cfg.sweep.points)


def position_at_distance(cfg: ScenarioConfig, distance: float) -> Tuple[float, float]:
    """UE ground position at BS-UE distance ``distance``, keeping the configured azimuth."""
    h = cfg.array.height_m
    if not distance > h:
        raise ConfigError("sweep.range", f"distance {distance:g} m must exceed the array height {h:g} m")
    x, y = cfg.ue.initial_position_m
    phi = math.atan2(y, x)
    r_h = math.sqrt(distance * distance - h * h)
    return r_h * math.cos(phi), r_h * math.sin(phi)


def turn_rate_for(speed: float, radius) -> float:
    return 0.0 if radius == "linear" or math.isinf(radius) else speed / radius


def trial_plan(cfg: ScenarioConfig) -> TrialPlan:
    if cfg.ue.heading_deg is not None:
        return TrialPlan(1, cfg.correlation.seed, math.radians(cfg.ue.heading_deg))
    return TrialPlan(cfg.correlation.n_trials, cfg.correlation.seed)


def numeric_coherence(cfg: ScenarioConfig, position, speed, turn_rate, variant, workers=1,
                      tau_max: Optional[float] = None) -> CoherenceResult:
    source = correlation_source(position, speed, turn_rate, cfg.array_config(), trial_plan(cfg), variant,
                                cfg.correlation.far_field, workers)
    return solve_numeric(source, cfg.solver.zeta, tau_max or cfg.solver.tau_max_s, cfg.solver.tol_s,
                         method=_NUMERIC_METHOD[variant])


def _closed_turning(cfg, position, speed, radius):
    state = TrajectoryState(position, speed, 0.0, speed / radius)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        scenario = turning_scenario_from_state(state, cfg.array_config(), cfg.solver.zeta)
    return coherence_time_turning(scenario)


def _single_speed_radius(cfg):
    radius = cfg.ue.turn_radius_m if cfg.ue.is_linear else cfg.ue.turn_radius_m[0]
    return cfg.ue.speed_mps[0], radius


def run_figure3(cfg: ScenarioConfig, workers=1) -> Table:
    """Turning scenario: coherence time vs distance for every configured speed."""
    if cfg.ue.is_linear:
        raise ConfigError("ue.turn_radius_m", "figure 3 needs a finite turning radius")
    radius = cfg.ue.turn_radius_m[0]
    table = Table(FIGURE3_HEADER)
    for distance in sweep_values(cfg):
        position = position_at_distance(cfg, distance)
        for speed in sorted(cfg.ue.speed_mps):
            omega = speed / radius
            sim = numeric_coherence(cfg, position, speed, omega, "exact", workers)
            nopol = numeric_coherence(cfg, position, speed, omega, "no_polarization", workers)
            closed = _closed_turning(cfg, position, speed, radius)
            log.info("figure 3: r=%.4g m v=%g m/s T_sim=%.4g s", distance, speed, sim.t_em)
            table.rows.append((distance, speed, sim.t_em, closed, nopol.t_em))
    return table


def run_figure4(cfg: ScenarioConfig, workers=1) -> Table:
    """Linear motion at a fixed heading: numeric coherence time vs the closed-form lower bound."""
    if not cfg.ue.is_linear:
        raise ConfigError("ue.turn_radius_m", 'figure 4 needs turn_radius_m = "linear"')
    if cfg.ue.heading_deg is None:
        raise ConfigError("ue.heading_deg", "figure 4 needs a fixed heading")
    heading = math.radians(cfg.ue.heading_deg)
    array = cfg.array_config()
    table = Table(FIGURE4_HEADER)
    for distance in sweep_values(cfg):
        position = position_at_distance(cfg, distance)
        for speed in sorted(cfg.ue.speed_mps):
            sim = numeric_coherence(cfg, position, speed, 0.0, "exact", workers)
            nopol = numeric_coherence(cfg, position, speed, 0.0, "no_polarization", workers)
            state = TrajectoryState(position, speed, heading)
            bound = coherence_time_linear_lower_bound(linear_scenario_from_state(state, array, cfg.solver.zeta))
            log.info("figure 4: r=%.4g m v=%g m/s T_sim=%.4g s", distance, speed, sim.t_em)
            table.rows.append((distance, speed, sim.t_em, bound, nopol.t_em))
    return table


def run_figure5(cfg: ScenarioConfig, workers=1) -> Table:
    """Coherence time vs turning radius at fixed position and speed."""
    if cfg.sweep is None or cfg.sweep.variable != "radius":
        raise ConfigError("sweep.variable", 'figure 5 needs a "radius" sweep')
    speed = cfg.ue.speed_mps[0]
    position = cfg.ue.initial_position_m
    table = Table(FIGURE5_HEADER)
    for radius in sweep_values(cfg):
        omega = speed / radius
        sim = numeric_coherence(cfg, position, speed, omega, "exact", workers)
        polar = numeric_coherence(cfg, position, speed, omega, "polar_only", workers)
        nopol = numeric_coherence(cfg, position, speed, omega, "no_polarization", workers)
        log.info("figure 5: rho=%.4g m T_sim=%.4g s", radius, sim.t_em)
        table.rows.append((radius, sim.t_em, polar.t_em, nopol.t_em))
    return table


FIGURES = {"3": run_figure3, "4": run_figure4, "5": run_figure5}


def run_figure(number, cfg: ScenarioConfig, workers=1) -> Table:
    return FIGURES[str(number)](cfg, workers)


def correlation_table(cfg: ScenarioConfig, workers=1) -> Table:
    """R(tau) for every configured variant at the configured position, first speed and radius."""
    speed, radius = _single_speed_radius(cfg)
    omega = turn_rate_for(speed, radius)
    grid = cfg.correlation.tau_grid
    taus = default_tau_grid(grid.max_s, grid.n_geometric, grid.n_linear)
    table = Table(("tau_s",) + tuple(f"r_{v}" for v in cfg.correlation.variants))
    sources = [correlation_source(cfg.ue.initial_position_m, speed, omega, cfg.array_config(), trial_plan(cfg),
                                  v, cfg.correlation.far_field, workers) for v in cfg.correlation.variants]
    for tau in taus:
        table.rows.append((tau,) + tuple(src(tau) for src in sources))
    return table


def coherence_for_config(cfg: ScenarioConfig, method: Optional[str] = None, workers=1) -> CoherenceResult:
    """Coherence time of the single scenario at the configured position, first speed and radius."""
    speed, radius = _single_speed_radius(cfg)
    omega = turn_rate_for(speed, radius)
    position = cfg.ue.initial_position_m
    if method is None:
        method = "closed_linear" if cfg.ue.is_linear else "closed_turning"
    zeta = cfg.solver.zeta
    if method == "closed_turning":
        if omega == 0:
            raise ConfigError("ue.turn_radius_m", "closed_turning needs a finite turning radius")
        return CoherenceResult(_closed_turning(cfg, position, speed, radius), method, zeta)
    if method in ("closed_linear", "lower_bound_linear"):
        heading = math.radians(cfg.ue.heading_deg) if cfg.ue.heading_deg is not None else 0.0
        state = TrajectoryState(position, speed, heading)
        scenario = linear_scenario_from_state(state, cfg.array_config(), zeta)
        fn = coherence_time_linear if method == "closed_linear" else coherence_time_linear_lower_bound
        return CoherenceResult(fn(scenario), method, zeta)
    if method == "quarter_wavelength":
        return quarter_wavelength_result(speed, cfg.carrier.wavelength_m)
    variant = {v: k for k, v in _NUMERIC_METHOD.items()}.get(method)
    if variant is None:
        raise ValueError(f"unknown method {method!r}")
    return numeric_coherence(cfg, position, speed, omega, variant, workers)


def compare_csv(actual: str, expected: str, rel_tol: float = 1e-9) -> Sequence[str]:
    """Differences between two CSV texts: exact match, else per-cell relative tolerance."""
    if actual == expected:
        return []
    problems = []
    a_lines, e_lines = actual.splitlines(), expected.splitlines()
    if len(a_lines) != len(e_lines):
        return [f"row count {len(a_lines)} != {len(e_lines)}"]
    if a_lines[0] != e_lines[0]:
        return [f"header {a_lines[0]!r} != {e_lines[0]!r}"]
    for i, (a, e) in enumerate(zip(a_lines[1:], e_lines[1:]), start=1):
        a_cells, e_cells = a.split(","), e.split(",")
        if len(a_cells) != len(e_cells):
            problems.append(f"row {i}: column count differs")
            continue
        for j, (x, y) in enumerate(zip(a_cells, e_cells)):
            xf, yf = float(x), float(y)
            if not math.isclose(xf, yf, rel_tol=rel_tol, abs_tol=0.0):
                problems.append(f"row {i} col {j}: {x} != {y}")
    return problems
