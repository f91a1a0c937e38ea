"""Array/UE geometry, trajectory evolution and motion-induced angle deltas.

Frame conventions
-----------------
* The ULA lies along the y-axis at height ``h_r``: element ``m`` sits at
  ``[0, delta_m * d, h_r]`` with ``delta_m = (2m - N_r + 1) / 2``.
* The UE moves in the ground plane ``z = 0`` with ``x_u > 0`` (in front of
  the array).  ``x_u <= 0`` is rejected everywhere.
* Azimuth ``phi = atan2(y_u, x_u)`` (0 is broadside), elevation ``theta`` is
  measured from the vertical so that ``sin(theta) = r_h / r``.  With these
  choices ``Psi = sin(phi) sin(theta) = y_u / r``.
* Heading ``vartheta`` is measured from the y-axis: the direction of travel
  is ``[sin(vartheta), cos(vartheta), 0]``.  A turn rate of exactly 0 encodes
  straight-line motion.

All angles are radians.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ScenarioError


@dataclass(frozen=True)
class ArrayConfig:
    """Base-station ULA and carrier.

    Parameters
    ----------
    n_elements : int
        Number of elements ``N_r``.
    spacing : float
        Inter-element spacing ``d`` in meters.
    height : float
        Array height ``h_r`` in meters.
    wavelength : float
        Carrier wavelength ``lambda`` in meters.
    """

    n_elements: int
    spacing: float
    height: float
    wavelength: float

    def __post_init__(self):
        if int(self.n_elements) != self.n_elements or self.n_elements < 1:
            raise ValueError(f"n_elements must be a positive integer, got {self.n_elements!r}")
        for name in ("spacing", "height", "wavelength"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")

    @classmethod
    def half_wavelength(cls, n_elements=64, height=3.0, wavelength=0.125):
        return cls(n_elements, wavelength / 2, height, wavelength)

    @property
    def wavenumber(self) -> float:
        return 2 * math.pi / self.wavelength

    def offsets(self) -> np.ndarray:
        """Element index offsets ``delta_m`` (dimensionless, centered on 0)."""
        m = np.arange(self.n_elements)
        return (2 * m - self.n_elements + 1) / 2

    def offset(self, m: int) -> float:
        if not 0 <= m < self.n_elements:
            raise IndexError(f"element index {m} out of range for N_r={self.n_elements}")
        return (2 * m - self.n_elements + 1) / 2

    def element_positions(self) -> np.ndarray:
        """``(N_r, 3)`` array of element coordinates."""
        pos = np.zeros((self.n_elements, 3))
        pos[:, 1] = self.offsets() * self.spacing
        pos[:, 2] = self.height
        return pos


@dataclass(frozen=True)
class TrajectoryState:
    """UE kinematic state at one instant.

    ``position`` is stored as a 3-tuple with z exactly 0.  ``turn_rate`` of 0
    means linear motion; otherwise the turning radius is ``speed / turn_rate``
    (signed: positive turns clockwise seen from above, i.e. heading grows).
    """

    position: tuple
    speed: float
    heading: float
    turn_rate: float = 0.0

    def __post_init__(self):
        pos = tuple(float(c) for c in self.position)
        if len(pos) == 2:
            pos = pos + (0.0,)
        if len(pos) != 3:
            raise ScenarioError(f"position must have 2 or 3 components, got {len(pos)}")
        if pos[2] != 0.0:
            raise ScenarioError(f"UE must move in the z=0 plane, got z={pos[2]!r}")
        if not pos[0] > 0:
            raise ScenarioError(f"UE must be in front of the array (x_u > 0), got x_u={pos[0]!r}")
        if not self.speed >= 0:
            raise ScenarioError(f"speed must be non-negative, got {self.speed!r}")
        object.__setattr__(self, "position", pos)

    @classmethod
    def from_radius(cls, position, speed, heading, turn_radius=None):
        """Build a state from a turning radius; ``None`` or ``inf`` gives linear motion."""
        if turn_radius is None or math.isinf(turn_radius):
            return cls(position, speed, heading, 0.0)
        if turn_radius == 0:
            raise ScenarioError("turning radius must be non-zero")
        return cls(position, speed, heading, speed / turn_radius)

    @property
    def x(self) -> float:
        return self.position[0]

    @property
    def y(self) -> float:
        return self.position[1]

    @property
    def is_linear(self) -> bool:
        return self.turn_rate == 0.0

    @property
    def turning_radius(self) -> float:
        """``v / omega``; ``inf`` for linear motion."""
        if self.is_linear:
            return math.inf
        return self.speed / self.turn_rate

    @property
    def direction(self) -> np.ndarray:
        return np.array([math.sin(self.heading), math.cos(self.heading), 0.0])


@dataclass(frozen=True)
class GeometrySnapshot:
    range: float
    horizontal_range: float
    azimuth: float
    elevation: float
    psi_product: float


@dataclass(frozen=True)
class AngleDeltas:
    """Motion-induced angle changes over a window ``tau``.

    ``d_azimuth``/``d_elevation`` are the small-angle approximations of the
    geometric model (magnitudes); ``exact_d_azimuth``/``exact_d_elevation``
    are signed differences between two exact snapshots.
    """

    d_heading: float
    displacement: float
    d_azimuth: float
    d_elevation: float
    psi_angle: float
    exact_d_azimuth: float
    exact_d_elevation: float


def displaced_xy(x, y, heading, speed, turn_rate, tau):
    """Closed-form position and heading after ``tau`` seconds.

    Works elementwise on numpy arrays.  ``turn_rate`` must be a scalar.  The
    chord ``2 rho sin(d/2)`` is written as ``v tau sinc(d/2)`` so tiny turn
    rates do not overflow ``rho``.
    """
    if turn_rate == 0.0:
        step = speed * tau
        return x + step * np.sin(heading), y + step * np.cos(heading), heading
    d_heading = turn_rate * tau
    chord = speed * tau * np.sinc(d_heading / (2 * np.pi))
    mid = heading + d_heading / 2
    return x + chord * np.sin(mid), y + chord * np.cos(mid), heading + d_heading


def advance(state: TrajectoryState, tau: float) -> TrajectoryState:
    """Return the state ``tau`` seconds later along the circular arc (or line)."""
    if not tau >= 0:
        raise ValueError(f"tau must be non-negative, got {tau!r}")
    if tau == 0:
        return state
    x, y, heading = displaced_xy(state.x, state.y, state.heading, state.speed, state.turn_rate, tau)
    if not x > 0:
        raise ScenarioError(f"UE crossed the array plane after tau={tau:g} s (x_u={x:g})")
    return replace(state, position=(float(x), float(y), 0.0), heading=float(heading))


def snapshot(state: TrajectoryState, array: ArrayConfig) -> GeometrySnapshot:
    x, y = state.x, state.y
    if not x > 0:
        raise ScenarioError(f"x_u must be positive, got {x!r}")
    r_h = math.hypot(x, y)
    r = math.hypot(r_h, array.height)
    return GeometrySnapshot(
        range=r,
        horizontal_range=r_h,
        azimuth=math.atan2(y, x),
        elevation=math.atan2(r_h, array.height),
        psi_product=y / r,
    )


def element_distance(snap: GeometrySnapshot, array: ArrayConfig, m: int) -> float:
    """Distance from element ``m`` to the UE via the centered-array expansion."""
    off = array.offset(m) * array.spacing
    r = snap.range
    return math.sqrt(r * r + off * off - 2 * r * off * snap.psi_product)


def element_distances(snap: GeometrySnapshot, array: ArrayConfig) -> np.ndarray:
    off = array.offsets() * array.spacing
    r = snap.range
    return np.sqrt(r * r + off * off - 2 * r * off * snap.psi_product)


def _psi_angle(p_a, p_b, heading):
    # angle at P_B between P_B->O and P_B->P_A, horizontal plane
    to_origin = -np.asarray(p_b[:2])
    back = np.asarray(p_a[:2]) - np.asarray(p_b[:2])
    if not np.any(back):
        back = -np.array([math.sin(heading), math.cos(heading)])
    cross = to_origin[0] * back[1] - to_origin[1] * back[0]
    return math.atan2(abs(cross), float(to_origin @ back))


def angle_deltas(initial: TrajectoryState, array: ArrayConfig, tau: float) -> AngleDeltas:
    final = advance(initial, tau)
    s0 = snapshot(initial, array)
    s1 = snapshot(final, array)
    d_heading = initial.turn_rate * tau
    if initial.is_linear:
        chord = initial.speed * tau
    else:
        chord = abs(initial.speed * tau * float(np.sinc(d_heading / (2 * math.pi))))
    psi = _psi_angle(initial.position, final.position, initial.heading + d_heading / 2)
    exact_daz = s1.azimuth - s0.azimuth
    exact_del = s1.elevation - s0.elevation
    if initial.is_linear:
        d_az, d_el = exact_daz, exact_del
    else:
        d_az = chord * math.sin(psi) / s0.horizontal_range
        d_el = chord * math.cos(psi) * array.height / (s0.range * s1.range)
    return AngleDeltas(
        d_heading=d_heading,
        displacement=chord,
        d_azimuth=d_az,
        d_elevation=d_el,
        psi_angle=psi,
        exact_d_azimuth=exact_daz,
        exact_d_elevation=exact_del,
    )


def motion_psi_angle(state: TrajectoryState) -> float:
    """Limit ``tau -> 0`` of the P_B angle: between -heading and the UE->O direction."""
    return _psi_angle(state.position, state.position, state.heading)
