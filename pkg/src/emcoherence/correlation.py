"""Temporal correlation of the EM channel.

The per-realization integrand is::

    min(beta(0), beta(tau)) / max(beta(0), beta(tau)) * |a(0)^H a(tau)| / N_r

and the correlation is its expectation over the initial heading, drawn
uniformly on ``[0, 2 pi)``.  Positions and angles at both instants are exact
(no small-angle approximations).

Variants
--------
``exact``
    the full integrand.
``no_polarization``
    the steering inner product only (amplitude ratio dropped).
``polar_only``
    the amplitude ratio only, with the position frozen; evaluated by the
    deterministic region integral in :mod:`emcoherence.closed_form`.
"""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .closed_form import TurningScenario, correlation_turning_region_integral
from .em_channel import amplitude, amplitude_of, steering_phase, steering_vector
from .errors import ScenarioError
from .geometry import ArrayConfig, TrajectoryState, advance, displaced_xy, snapshot

VARIANTS = ("exact", "no_polarization", "polar_only")

# trial chunks handed to workers are aligned to this many trials
_CHUNK_ALIGN = 64


@dataclass(frozen=True)
class TrialPlan:
    """Monte Carlo plan over the initial heading.

    Trial ``i`` always receives the ``i``-th draw of ``default_rng(seed)``, so
    the heading set depends only on ``(seed, n_trials)``.  ``fixed_heading``
    replaces sampling with a single deterministic heading.
    """

    n_trials: int = 2000
    seed: int = 7
    fixed_heading: Optional[float] = None

    def __post_init__(self):
        if int(self.n_trials) != self.n_trials or self.n_trials < 1:
            raise ValueError(f"n_trials must be a positive integer, got {self.n_trials!r}")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")

    def headings(self) -> np.ndarray:
        if self.fixed_heading is not None:
            return np.full(self.n_trials, float(self.fixed_heading))
        return np.random.default_rng(self.seed).uniform(0.0, 2 * np.pi, self.n_trials)


@dataclass(frozen=True)
class CorrelationCurve:
    taus: np.ndarray
    values: np.ndarray
    variant: str = "exact"
    n_trials: int = 1
    seed: Optional[int] = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        taus = np.asarray(self.taus, dtype=float)
        if taus.ndim != 1 or np.any(np.diff(taus) <= 0):
            raise ValueError("tau grid must be one-dimensional and strictly increasing")


def default_tau_grid(tau_max, n_geometric=40, n_linear=60, tau_min=None, knee=None):
    """``0``, then geometric spacing up to ``knee``, then linear up to ``tau_max``."""
    if not tau_max > 0:
        raise ValueError("tau_max must be positive")
    knee = tau_max / 10 if knee is None else knee
    tau_min = knee / 1000 if tau_min is None else tau_min
    if not 0 < tau_min < knee <= tau_max:
        raise ValueError("need 0 < tau_min < knee <= tau_max")
    geo = np.geomspace(tau_min, knee, n_geometric)
    lin = np.linspace(knee, tau_max, n_linear + 1)[1:]
    return np.concatenate([[0.0], geo, lin])


def _inner_product(state0: TrajectoryState, state1: TrajectoryState, array, far_field_only):
    a0 = steering_vector(snapshot(state0, array), array, far_field_only)
    a1 = steering_vector(snapshot(state1, array), array, far_field_only)
    return abs(np.vdot(a0, a1)) / array.n_elements


def polarization_ratio(initial: TrajectoryState, array: ArrayConfig, tau: float) -> float:
    """Amplitude factor ``min(beta0, beta_tau) / max(beta0, beta_tau)`` alone."""
    b0 = amplitude(initial, array)
    b1 = amplitude(advance(initial, tau), array)
    return min(b0, b1) / max(b0, b1)


def correlation_single(
    initial: TrajectoryState, array: ArrayConfig, tau: float, far_field_only=False, variant="exact"
) -> float:
    """Correlation integrand for one trajectory realization."""
    if tau == 0:
        return 1.0
    final = advance(initial, tau)
    beam = min(_inner_product(initial, final, array, far_field_only), 1.0)
    if variant == "no_polarization":
        return beam
    if variant != "exact":
        raise ValueError(f"unsupported variant for a single realization: {variant!r}")
    return polarization_ratio(initial, array, tau) * beam


class MonteCarloCorrelation:
    """Heading-averaged correlation ``tau -> R(tau)`` for a fixed start position.

    The trial set is drawn once at construction, so repeated calls (e.g. from
    the coherence-time solver) see the same realizations.
    """

    def __init__(
        self,
        position,
        speed: float,
        turn_rate: float,
        array: ArrayConfig,
        plan: TrialPlan = TrialPlan(),
        variant: str = "exact",
        far_field_only: bool = False,
        workers: int = 1,
    ):
        if variant not in ("exact", "no_polarization"):
            raise ValueError(f"Monte Carlo supports 'exact' and 'no_polarization', got {variant!r}")
        x0, y0 = float(position[0]), float(position[1])
        if not x0 > 0:
            raise ScenarioError(f"x_u must be positive, got {x0!r}")
        self.x0, self.y0 = x0, y0
        self.speed = float(speed)
        self.turn_rate = float(turn_rate)
        self.array = array
        self.plan = plan
        self.variant = variant
        self.far_field_only = far_field_only
        self.workers = max(int(workers), 1)
        self.headings = plan.headings()

        r0 = math.sqrt(x0 * x0 + y0 * y0 + array.height ** 2)
        self._phase0 = steering_phase(y0 / r0, r0, array, far_field_only)
        self._beta0 = amplitude_of(x0, y0, self.headings, array.height)

    def _chunk_values(self, tau, sl):
        headings = self.headings[sl]
        x1, y1, h1 = displaced_xy(self.x0, self.y0, headings, self.speed, self.turn_rate, tau)
        if np.any(x1 <= 0):
            raise ScenarioError(f"a trial crossed the array plane (x_u <= 0) at tau={tau:g} s")
        r1 = np.sqrt(x1 * x1 + y1 * y1 + self.array.height ** 2)
        phase1 = steering_phase(y1 / r1, r1, self.array, self.far_field_only)
        inner = np.abs(np.exp(1j * (phase1 - self._phase0)).sum(axis=-1)) / self.array.n_elements
        beam = np.minimum(inner, 1.0)
        if self.variant == "no_polarization":
            return beam
        b0 = self._beta0[sl]
        b1 = amplitude_of(x1, y1, h1, self.array.height)
        return np.minimum(b0, b1) / np.maximum(b0, b1) * beam

    def _slices(self):
        n = len(self.headings)
        if self.workers == 1 or n <= _CHUNK_ALIGN:
            return [slice(0, n)]
        per = -(-n // self.workers)
        per = -(-per // _CHUNK_ALIGN) * _CHUNK_ALIGN
        return [slice(i, min(i + per, n)) for i in range(0, n, per)]

    def trial_values(self, tau: float) -> np.ndarray:
        """Per-trial integrand values at ``tau``; independent of ``workers``."""
        if not tau >= 0:
            raise ValueError(f"tau must be non-negative, got {tau!r}")
        if tau == 0:
            return np.ones(len(self.headings))
        slices = self._slices()
        if len(slices) == 1:
            return self._chunk_values(tau, slices[0])
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            parts = list(pool.map(lambda sl: self._chunk_values(tau, sl), slices))
        return np.concatenate(parts)

    def __call__(self, tau: float) -> float:
        values = self.trial_values(tau)
        # exactly rounded, so the mean cannot depend on summation order
        return math.fsum(values.tolist()) / len(values)

    def curve(self, taus) -> CorrelationCurve:
        taus = np.asarray(taus, dtype=float)
        values = np.array([self(t) for t in taus])
        return CorrelationCurve(
            taus, values, self.variant, len(self.headings),
            None if self.plan.fixed_heading is not None else self.plan.seed,
        )


class PolarOnlyCorrelation:
    """Amplitude-only correlation with frozen position (beam misalignment ignored)."""

    def __init__(self, position, speed: float, turn_rate: float, array: ArrayConfig):
        x0, y0 = float(position[0]), float(position[1])
        if not x0 > 0:
            raise ScenarioError(f"x_u must be positive, got {x0!r}")
        self.turn_rate = abs(float(turn_rate))
        self.scenario = None
        if self.turn_rate > 0:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                self.scenario = TurningScenario(
                    turning_radius=speed / self.turn_rate,
                    speed=speed,
                    initial_azimuth=math.atan2(y0, x0),
                    horizontal_range=math.hypot(x0, y0),
                    array_height=array.height,
                )

    def __call__(self, tau: float) -> float:
        if self.scenario is None or tau == 0:
            return 1.0
        return correlation_turning_region_integral(self.turn_rate * tau, self.scenario)

    def curve(self, taus) -> CorrelationCurve:
        taus = np.asarray(taus, dtype=float)
        return CorrelationCurve(taus, np.array([self(t) for t in taus]), "polar_only", 1, None)


def correlation_source(position, speed, turn_rate, array, plan=TrialPlan(), variant="exact",
                       far_field_only=False, workers=1):
    """Callable ``tau -> R(tau)`` for any variant."""
    if variant == "polar_only":
        return PolarOnlyCorrelation(position, speed, turn_rate, array)
    return MonteCarloCorrelation(position, speed, turn_rate, array, plan, variant, far_field_only, workers)


def correlation_expected(position, speed, turn_rate, array, taus, plan=TrialPlan(), variant="exact",
                         far_field_only=False, workers=1) -> CorrelationCurve:
    """Trial-averaged correlation sampled on ``taus``."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    return correlation_source(position, speed, turn_rate, array, plan, variant, far_field_only, workers).curve(taus)
