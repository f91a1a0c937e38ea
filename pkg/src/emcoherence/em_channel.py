"""Line-of-sight EM channel: amplitude with polarization/aperture losses and the
Fresnel steering vector.

The amplitude is normalized so that source current, impedance and input
voltage cancel::

    beta^2 = 1/(4 pi r^2)                       free-space spreading
           * (h_r^2 + r_h^2 cos^2(heading + phi)) / r^2   polarization mismatch
           * x_u / r                            effective-aperture projection

and is evaluated at the array center (element-independent).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ScenarioError
from .geometry import ArrayConfig, GeometrySnapshot, TrajectoryState, snapshot


@dataclass(frozen=True)
class AmplitudeFactors:
    fspl: float
    polarization: float
    aperture: float

    @property
    def power(self) -> float:
        return self.fspl * self.polarization * self.aperture

    @property
    def amplitude(self) -> float:
        return math.sqrt(self.power)


@dataclass(frozen=True)
class ChannelVector:
    amplitude: float
    phases: np.ndarray
    elements: np.ndarray

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.elements))


def amplitude_terms(x, y, heading, height):
    """Vectorized ``(fspl, polarization, aperture)`` factors for UE coordinates."""
    r_h2 = x * x + y * y
    r2 = r_h2 + height * height
    r = np.sqrt(r2)
    phi = np.arctan2(y, x)
    fspl = 1.0 / (4 * np.pi * r2)
    pol = (height * height + r_h2 * np.cos(heading + phi) ** 2) / r2
    aperture = x / r
    return fspl, pol, aperture


def amplitude_of(x, y, heading, height):
    fspl, pol, aperture = amplitude_terms(x, y, heading, height)
    return np.sqrt(fspl * pol * aperture)


def amplitude_factors(state: TrajectoryState, array: ArrayConfig) -> AmplitudeFactors:
    if not state.x > 0:
        raise ScenarioError(f"x_u must be positive, got {state.x!r}")
    fspl, pol, aperture = amplitude_terms(state.x, state.y, state.heading, array.height)
    return AmplitudeFactors(float(fspl), float(pol), float(aperture))


def amplitude(state: TrajectoryState, array: ArrayConfig) -> float:
    """Channel amplitude ``beta`` at the array center."""
    return amplitude_factors(state, array).amplitude


def steering_phase(psi, r, array: ArrayConfig, far_field_only=False):
    """Per-element phase of the steering vector.

    ``psi`` and ``r`` may be arrays of shape ``S``; the result has shape
    ``S + (N_r,)``.
    """
    off = array.offsets() * array.spacing
    psi = np.asarray(psi, dtype=float)[..., None]
    linear = off * psi
    if far_field_only:
        return -array.wavenumber * linear
    r = np.asarray(r, dtype=float)[..., None]
    quadratic = off * off * (1 - psi * psi) / (2 * r)
    return -array.wavenumber * (linear - quadratic)


def steering_vector(snap: GeometrySnapshot, array: ArrayConfig, far_field_only=False) -> np.ndarray:
    if not snap.range > 0:
        raise ValueError("range must be positive")
    return np.exp(1j * steering_phase(snap.psi_product, snap.range, array, far_field_only))


def channel(state: TrajectoryState, array: ArrayConfig, far_field_only=False) -> ChannelVector:
    snap = snapshot(state, array)
    beta = amplitude(state, array)
    phases = steering_vector(snap, array, far_field_only) * np.exp(1j * array.wavenumber * snap.range)
    return ChannelVector(amplitude=beta, phases=phases, elements=beta * phases)
