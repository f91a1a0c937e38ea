"""Quick self-check run by ``emcoherence validate``.

Each check returns ``(name, passed, detail)``; the checks use small
randomized inputs with a fixed seed and finish in a few seconds.
"""
from __future__ import annotations

import math

import numpy as np

from ..closed_form import (
    LinearScenario,
    TurningScenario,
    coherence_time_linear,
    coherence_time_linear_lower_bound,
    coherence_time_turning,
    correlation_linear_gaussian,
    correlation_turning_closed,
    lambert_w_minus1,
)
from ..correlation import MonteCarloCorrelation, TrialPlan
from ..em_channel import steering_vector
from ..geometry import ArrayConfig, TrajectoryState, advance, element_distance, snapshot


def _lambert(rng):
    xs = -np.logspace(math.log10(math.exp(-1)), -8, 200)
    worst = max(abs(w * math.exp(w) - x) for x in xs for w in [lambert_w_minus1(x)])
    return worst <= 1e-12 and lambert_w_minus1(-math.exp(-1)) == -1.0, f"max residual {worst:.2e}"


def _element_distances(rng):
    worst = 0.0
    for _ in range(50):
        array = ArrayConfig(int(rng.integers(1, 65)), rng.uniform(0.01, 0.2), rng.uniform(1, 20), 0.125)
        state = TrajectoryState((rng.uniform(5, 300), rng.uniform(-300, 300)), 1.0, 0.0)
        snap = snapshot(state, array)
        ue = np.array(state.position)
        for m, pos in enumerate(array.element_positions()):
            direct = np.linalg.norm(pos - ue)
            worst = max(worst, abs(element_distance(snap, array, m) - direct) / direct)
    return worst <= 1e-12, f"max relative error {worst:.2e}"


def _advance_composes(rng):
    worst = 0.0
    for _ in range(50):
        state = TrajectoryState((rng.uniform(200, 400), rng.uniform(-50, 50)), rng.uniform(0.5, 10),
                                rng.uniform(0, 2 * math.pi), rng.uniform(-1, 1))
        t1, t2 = rng.uniform(0, 3, 2)
        a = advance(advance(state, t1), t2)
        b = advance(state, t1 + t2)
        worst = max(worst, float(np.max(np.abs(np.subtract(a.position, b.position)))))
    return worst <= 1e-9, f"max position gap {worst:.2e} m"


def _steering(rng):
    array = ArrayConfig(8, 0.0625, 3.0, 0.125)
    state = TrajectoryState((80.0, 30.0), 1.0, 0.0)
    snap = snapshot(state, array)
    a = steering_vector(snap, array)
    k = array.wavenumber
    worst = 0.0
    for n in range(8):
        off = array.offset(n) * array.spacing
        ref = np.exp(-1j * k * (off * snap.psi_product - off ** 2 * (1 - snap.psi_product ** 2) / (2 * snap.range)))
        worst = max(worst, abs(a[n] - ref))
    return worst <= 1e-12 and np.allclose(np.abs(a), 1.0), f"max entry error {worst:.2e}"


def _correlation_bounds(rng):
    array = ArrayConfig.half_wavelength()
    mc = MonteCarloCorrelation((150.0, 20.0), 3.0, 0.3, array, TrialPlan(500, 3))
    values = [mc(t) for t in np.linspace(0, 2, 21)]
    ok = values[0] == 1.0 and all(0.0 <= v <= 1.0 for v in values)
    return ok, f"R(0)={values[0]!r}, min={min(values):.4f}"


def _turning_inverse(rng):
    s = TurningScenario(10.0, 2.0, 0.9)
    t = coherence_time_turning(s)
    r = correlation_turning_closed(s.turn_rate * t, s, form="simplified")
    return abs(r - 0.9) <= 1e-9, f"R(T_EM)={r:.12f}"


def _linear_inverse(rng):
    s = LinearScenario(100.0, 10.0, 0.9, 64, 0.2, 1.4, 1.1)
    t = coherence_time_linear(s)
    r = correlation_linear_gaussian(t, s)
    lb = coherence_time_linear_lower_bound(s)
    return abs(r - 0.9) <= 1e-12 and lb <= t, f"R(T_EM)={r:.15f}, bound {lb:.4g} <= {t:.4g}"


CHECKS = {
    "lambert_w_residual": _lambert,
    "element_distance_vs_norm": _element_distances,
    "advance_composition": _advance_composes,
    "steering_exponent": _steering,
    "correlation_bounds": _correlation_bounds,
    "turning_closed_form_inverse": _turning_inverse,
    "linear_closed_form_inverse": _linear_inverse,
}


def run_checks(seed=0):
    rng = np.random.default_rng(seed)
    results = []
    for name, check in CHECKS.items():
        try:
            ok, detail = check(rng)
        except Exception as exc:  # a crashing check is reported as a failure
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((name, bool(ok), detail))
    return results
