"""Closed-form and semianalytic coherence results for the two motion regimes.

Turning (small radius, frozen position, random heading):
    correlation ``1 - (dh/pi) ln(4/dh^2)`` with ``dh = omega * tau`` and the
    coherence time obtained from it through the lower Lambert-W branch.
Linear motion (beam misalignment only):
    Gaussian correlation in ``tau`` and its exact inverse, plus a bound that
    drops the geometry-dependent ``|sin(psi) cos(phi0)|`` factor.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from scipy import integrate

from .errors import DomainError, UnboundedCoherenceError

INV_E = math.exp(-1.0)


def lambert_w_minus1(x: float) -> float:
    """Lower real branch ``W_{-1}`` of the Lambert W function.

    Solves ``w * exp(w) = x`` for ``w <= -1`` on ``-1/e <= x < 0`` using a
    branch-point series or log asymptotics as the starting point, refined by
    Halley iterations.
    """
    x = float(x)
    if not (-INV_E - 1e-16 <= x < 0):
        raise DomainError(f"W_-1 is defined on [-1/e, 0), got x={x!r}")
    if x <= -INV_E:
        return -1.0
    if x < -0.25:
        p = -math.sqrt(max(2.0 * (1.0 + math.e * x), 0.0))
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p ** 3
    else:
        l1 = math.log(-x)
        l2 = math.log(-l1)
        w = l1 - l2 + l2 / l1
    for _ in range(64):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        if wp1 == 0.0:
            break
        step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w_new = w - step
        if w_new > -1.0:
            # stay on the lower branch near the branch point
            w_new = (w - 1.0) / 2.0 if w < -1.0 else -1.0
        if abs(w_new - w) <= 4e-16 * abs(w_new):
            w = w_new
            break
        w = w_new
    return w


@dataclass(frozen=True)
class TurningScenario:
    turning_radius: float
    speed: float
    threshold: float = 0.9
    initial_azimuth: float = 0.0
    horizontal_range: float = 200.0
    array_height: float = 3.0

    def __post_init__(self):
        if not self.turning_radius > 0:
            raise ValueError(f"turning_radius must be positive, got {self.turning_radius!r}")
        if not self.speed > 0:
            raise ValueError(f"speed must be positive, got {self.speed!r}")
        if not 0 < self.threshold < 1:
            raise ValueError(f"threshold must lie in (0, 1), got {self.threshold!r}")
        if self.turning_radius > 0.1 * self.horizontal_range:
            warnings.warn(
                f"turning radius {self.turning_radius:g} m is not small against r_h={self.horizontal_range:g} m; "
                "the frozen-position turning approximation may be inaccurate",
                stacklevel=2,
            )

    @property
    def turn_rate(self) -> float:
        return self.speed / self.turning_radius

    @property
    def height_ratio(self) -> float:
        """``2 h_r^2 / r_h^2``, the regularizer that keeps the polarization null finite."""
        return 2 * self.array_height ** 2 / self.horizontal_range ** 2


@dataclass(frozen=True)
class LinearScenario:
    horizontal_range: float
    speed: float
    threshold: float
    n_elements: int
    initial_azimuth: float
    initial_elevation: float
    psi_angle: float

    def __post_init__(self):
        if not math.sin(self.initial_elevation) > 0:
            raise ValueError("sin(initial_elevation) must be positive")
        if not 0 < self.threshold < 1:
            raise ValueError(f"threshold must lie in (0, 1), got {self.threshold!r}")
        if not self.speed > 0:
            raise ValueError(f"speed must be positive, got {self.speed!r}")

    @property
    def drift_factor(self) -> float:
        return abs(math.sin(self.psi_angle) * math.cos(self.initial_azimuth))


def coherence_time_turning(s: TurningScenario) -> float:
    arg = -(1 - s.threshold) * math.pi / 4
    if arg < -INV_E:
        raise DomainError(
            f"threshold {s.threshold:g} is below the closed-form domain (zeta >= {1 - 4 * INV_E / math.pi:.4f}); "
            "use the numeric solver instead"
        )
    w = lambert_w_minus1(arg)
    return -math.pi * (1 - s.threshold) * s.turning_radius / (2 * s.speed * w)


def correlation_turning_closed(d_heading: float, s: TurningScenario, form="log") -> float:
    """Turning-scenario correlation at heading change ``d_heading``.

    ``form="log"`` keeps the height regularizer; ``form="simplified"`` is its
    large-distance, small-angle limit.
    """
    dh = abs(d_heading)
    if dh == 0:
        return 1.0
    if form == "log":
        c = 1 + s.height_ratio
        value = 1 - dh / math.pi * math.log((c + math.cos(dh)) / (c - math.cos(dh)))
    elif form == "simplified":
        value = 1 - dh / math.pi * (math.log(4.0) - 2 * math.log(dh))
    else:
        raise ValueError(f"unknown form {form!r}")
    return min(max(value, 0.0), 1.0)


def turning_regions(d_heading: float, initial_azimuth: float):
    """Initial-heading intervals where the amplitude shrinks (A) or grows (B).

    Returns two lists of ``(lo, hi)`` pairs covering one full period.
    """
    alpha = [k * math.pi / 2 - initial_azimuth - d_heading / 2 for k in range(5)]
    region_a = [(alpha[0], alpha[1]), (alpha[2], alpha[3])]
    region_b = [(alpha[1], alpha[2]), (alpha[3], alpha[4])]
    return region_a, region_b


def correlation_turning_region_integral(d_heading: float, s: TurningScenario) -> float:
    """Average min/max amplitude ratio over a uniform initial heading, position frozen.

    Integrates the exact ratio (no linearization) piecewise over the A/B
    regions; this is the correlation with beam misalignment ignored.
    """
    dh = abs(d_heading)
    if dh == 0:
        return 1.0
    h2 = s.array_height ** 2
    rh2 = s.horizontal_range ** 2
    phi0 = s.initial_azimuth

    def power(heading):
        return h2 + rh2 * math.cos(heading + phi0) ** 2

    def shrink(v0):
        return math.sqrt(power(v0 + dh) / power(v0))

    def grow(v0):
        return math.sqrt(power(v0) / power(v0 + dh))

    # polarization nulls of either instant make the integrand sharply peaked
    nulls = []
    for n in range(-2, 4):
        nulls.append(math.pi / 2 - phi0 + n * math.pi)
        nulls.append(math.pi / 2 - phi0 - dh + n * math.pi)

    region_a, region_b = turning_regions(dh, phi0)
    total = 0.0
    for intervals, f in ((region_a, shrink), (region_b, grow)):
        for lo, hi in intervals:
            pts = [p for p in nulls if lo < p < hi]
            val, _ = integrate.quad(f, lo, hi, points=pts or None, limit=200, epsabs=1e-12, epsrel=1e-12)
            total += val
    return min(max(total / (2 * math.pi), 0.0), 1.0)


def coherence_time_linear(s: LinearScenario) -> float:
    drift = s.drift_factor
    if drift < 1e-12:
        raise UnboundedCoherenceError(
            "sin(psi) cos(phi0) = 0: the motion causes no first-order azimuth drift"
        )
    return coherence_time_linear_lower_bound(s) / drift


def coherence_time_linear_lower_bound(s: LinearScenario) -> float:
    return s.horizontal_range / s.speed * math.sqrt(
        2 * math.log(1 / s.threshold) / (s.n_elements ** 2 * math.sin(s.initial_elevation))
    )


def correlation_linear_gaussian(tau: float, s: LinearScenario) -> float:
    shift = s.drift_factor * s.speed * tau / s.horizontal_range
    return math.exp(-(s.n_elements ** 2) / 2 * math.sin(s.initial_elevation) * shift ** 2)


def turning_scenario_from_state(state, array, threshold=0.9) -> TurningScenario:
    """Turning-scenario inputs read off an exact UE state (requires ``turn_rate != 0``)."""
    from .geometry import snapshot

    if state.is_linear:
        raise ValueError("state has zero turn rate; use linear_scenario_from_state")
    snap = snapshot(state, array)
    return TurningScenario(
        turning_radius=abs(state.turning_radius),
        speed=state.speed,
        threshold=threshold,
        initial_azimuth=snap.azimuth,
        horizontal_range=snap.horizontal_range,
        array_height=array.height,
    )


def linear_scenario_from_state(state, array, threshold=0.9) -> LinearScenario:
    from .geometry import motion_psi_angle, snapshot

    snap = snapshot(state, array)
    return LinearScenario(
        horizontal_range=snap.horizontal_range,
        speed=state.speed,
        threshold=threshold,
        n_elements=array.n_elements,
        initial_azimuth=snap.azimuth,
        initial_elevation=snap.elevation,
        psi_angle=motion_psi_angle(state),
    )
