"""Numeric coherence time: first time the correlation drops below a threshold."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

from .errors import NoCrossingError, UnboundedCoherenceError

METHODS = (
    "numeric_exact",
    "numeric_no_polarization",
    "numeric_polar_only",
    "closed_turning",
    "closed_linear",
    "lower_bound_linear",
    "quarter_wavelength",
)


@dataclass(frozen=True)
class CoherenceResult:
    t_em: float
    method: str
    threshold: Optional[float] = None
    bracket: Optional[Tuple[float, float]] = None
    evaluations: int = 0

    def as_lines(self):
        """``key=value`` lines for line-oriented output."""
        lines = [f"t_em_s={self.t_em:.9g}", f"method={self.method}"]
        if self.threshold is not None:
            lines.append(f"threshold={self.threshold:.9g}")
        if self.bracket is not None:
            lines.append(f"bracket_lo_s={self.bracket[0]:.9g}")
            lines.append(f"bracket_hi_s={self.bracket[1]:.9g}")
        if self.evaluations:
            lines.append(f"evaluations={self.evaluations}")
        return lines


def solve_numeric(
    curve: Callable[[float], float],
    zeta: float,
    tau_max: float,
    tol: float = 1e-6,
    *,
    initial_step: Optional[float] = None,
    max_step: Optional[float] = None,
    growth: float = 2.0,
    deadband: float = 0.0,
    method: str = "numeric_exact",
) -> CoherenceResult:
    """Locate ``inf {tau : R(tau) < zeta}`` on ``[0, tau_max]``.

    A forward scan with geometrically growing steps (capped at ``max_step``)
    finds the first sampled point below ``zeta - deadband``; bisection then
    narrows ``[lo, hi]`` to width ``tol`` while keeping ``R(lo) >= zeta`` and
    ``R(hi) < zeta``.  Dips narrower than the scan step can be missed, so
    ``max_step`` bounds the resolution of the first-crossing search.

    Raises
    ------
    ValueError
        for invalid arguments or ``R(0) < zeta``.
    NoCrossingError
        when no sample falls below the threshold up to ``tau_max``.
    """
    if not 0 < zeta < 1:
        raise ValueError(f"zeta must lie in (0, 1), got {zeta!r}")
    if not tau_max > 0 or not tol > 0:
        raise ValueError("tau_max and tol must be positive")
    if growth < 1:
        raise ValueError("growth must be >= 1")
    level = zeta - deadband
    step = tau_max / 1024 if initial_step is None else initial_step
    cap = tau_max / 32 if max_step is None else max_step
    step = min(step, cap)

    evaluations = 1
    r0 = curve(0.0)
    if r0 < level:
        raise ValueError(f"curve starts below the threshold: R(0)={r0!r} < {level!r}")

    lo = 0.0
    hi = None
    while lo < tau_max:
        t = min(lo + step, tau_max)
        evaluations += 1
        if curve(t) < level:
            hi = t
            break
        lo = t
        step = min(step * growth, cap)
    if hi is None:
        raise NoCrossingError(tau_max, level)

    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        evaluations += 1
        if curve(mid) < level:
            hi = mid
        else:
            lo = mid
    return CoherenceResult(
        t_em=0.5 * (lo + hi), method=method, threshold=zeta, bracket=(lo, hi), evaluations=evaluations
    )


def quarter_wavelength_baseline(speed: float, wavelength: float) -> float:
    """Time to travel a quarter wavelength, the classical rule of thumb."""
    if speed < 0 or not wavelength > 0:
        raise ValueError("speed must be non-negative and wavelength positive")
    if speed == 0:
        raise UnboundedCoherenceError("a static UE has unbounded coherence time")
    return wavelength / (4 * speed)


def quarter_wavelength_result(speed: float, wavelength: float) -> CoherenceResult:
    return CoherenceResult(t_em=quarter_wavelength_baseline(speed, wavelength), method="quarter_wavelength")

