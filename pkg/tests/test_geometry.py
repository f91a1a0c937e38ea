import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from emcoherence.errors import ScenarioError
from emcoherence.geometry import (
    ArrayConfig,
    TrajectoryState,
    advance,
    angle_deltas,
    element_distance,
    element_distances,
    snapshot,
)

from conftest import rk4_position


def test_array_config_validation():
    with pytest.raises(ValueError):
        ArrayConfig(0, 0.1, 3, 0.125)
    with pytest.raises(ValueError):
        ArrayConfig(4, -0.1, 3, 0.125)
    a = ArrayConfig(4, 0.0625, 3, 0.125)
    assert a.wavenumber == pytest.approx(2 * math.pi / 0.125)
    assert list(a.offsets()) == [-1.5, -0.5, 0.5, 1.5]


def test_state_rejects_invalid_positions():
    with pytest.raises(ScenarioError):
        TrajectoryState((0.0, 5.0), 1.0, 0.0)
    with pytest.raises(ScenarioError):
        TrajectoryState((10.0, 5.0, 1.0), 1.0, 0.0)
    s = TrajectoryState((10.0, 5.0), 2.0, 0.0, 0.2)
    assert s.position == (10.0, 5.0, 0.0)
    assert s.turning_radius == pytest.approx(10.0)
    assert TrajectoryState.from_radius((10, 0), 2.0, 0.0, None).is_linear


def test_advance_zero_is_identity():
    s = TrajectoryState((100.0, 3.0), 2.0, 0.4, 0.2)
    assert advance(s, 0.0) == s


def test_advance_linear_translation():
    s = advance(TrajectoryState((100.0, 0.0), 2.0, 0.0), 5.0)
    assert s.position == pytest.approx((100.0, 10.0, 0.0), abs=1e-12)
    assert s.heading == 0.0


def test_advance_quarter_turn():
    s0 = TrajectoryState((100.0, 0.0), 2.0, 0.0, 0.2)
    s1 = advance(s0, (math.pi / 0.2) / 2)
    assert s1.position[0] == pytest.approx(110.0, abs=1e-9)
    assert s1.position[1] == pytest.approx(10.0, abs=1e-9)
    assert s1.heading == pytest.approx(math.pi / 2)
    ox, oy = rk4_position(100.0, 0.0, 0.0, 2.0, 0.2, (math.pi / 0.2) / 2)
    assert abs(s1.position[0] - ox) < 1e-9 and abs(s1.position[1] - oy) < 1e-9


def test_advance_rejects_negative_tau_and_crossing():
    s = TrajectoryState((1.0, 0.0), 2.0, -math.pi / 2)
    with pytest.raises(ValueError):
        advance(s, -1.0)
    with pytest.raises(ScenarioError):
        advance(s, 1.0)


@settings(max_examples=60, deadline=None)
@given(
    x=st.floats(100, 500), y=st.floats(-100, 100), v=st.floats(0.1, 10),
    heading=st.floats(0, 2 * math.pi), omega=st.floats(-1, 1), tau=st.floats(0, 5),
)
def test_advance_matches_ode_and_chord_bound(x, y, v, heading, omega, tau):
    s0 = TrajectoryState((x, y), v, heading, omega)
    s1 = advance(s0, tau)
    ox, oy = rk4_position(x, y, heading, v, omega, tau, steps=400)
    assert abs(s1.position[0] - ox) < 1e-9
    assert abs(s1.position[1] - oy) < 1e-9
    chord = math.hypot(s1.position[0] - x, s1.position[1] - y)
    assert chord <= v * tau * (1 + 1e-12) + 1e-12


@settings(max_examples=60, deadline=None)
@given(
    x=st.floats(200, 500), y=st.floats(-100, 100), v=st.floats(0.1, 10),
    heading=st.floats(0, 2 * math.pi), omega=st.floats(-1, 1),
    t1=st.floats(0, 3), t2=st.floats(0, 3),
)
def test_advance_composes(x, y, v, heading, omega, t1, t2):
    s0 = TrajectoryState((x, y), v, heading, omega)
    a = advance(advance(s0, t1), t2)
    b = advance(s0, t1 + t2)
    assert np.allclose(a.position, b.position, rtol=0, atol=1e-9)
    assert abs(a.heading - b.heading) <= 1e-12 * max(1.0, abs(b.heading))


def test_snapshot_on_axis(reference_array):
    snap = snapshot(TrajectoryState((100.0, 0.0), 1.0, 0.0), reference_array)
    assert snap.horizontal_range == 100.0
    assert snap.range == pytest.approx(math.sqrt(10009))
    assert math.sin(snap.elevation) == pytest.approx(100 / math.sqrt(10009))
    assert snap.azimuth == 0.0 and snap.psi_product == 0.0


def test_snapshot_45_degrees(reference_array):
    snap = snapshot(TrajectoryState((100.0, 100.0), 1.0, 0.0), reference_array)
    assert snap.horizontal_range == pytest.approx(141.421356, rel=1e-8)
    assert math.sin(snap.azimuth) == pytest.approx(math.sqrt(0.5))


def test_snapshot_negative_side(reference_array):
    snap = snapshot(TrajectoryState((50.0, -50.0), 1.0, 0.0), reference_array)
    assert snap.psi_product < 0
    assert snap.psi_product == pytest.approx(math.sin(snap.azimuth) * math.sin(snap.elevation), rel=1e-14)


def test_element_distance_special_cases(reference_array):
    single = ArrayConfig(1, 0.0625, 3.0, 0.125)
    snap = snapshot(TrajectoryState((80.0, 20.0), 1.0, 0.0), single)
    assert element_distance(snap, single, 0) == pytest.approx(snap.range, rel=1e-15)
    snap = snapshot(TrajectoryState((80.0, 0.0), 1.0, 0.0), reference_array)
    d = reference_array.spacing
    for m in (0, 10, 63):
        off = reference_array.offset(m) * d
        assert element_distance(snap, reference_array, m) == pytest.approx(math.sqrt(snap.range ** 2 + off ** 2))
    with pytest.raises(IndexError):
        element_distance(snap, reference_array, 64)


def test_element_distance_vs_vector_norm(reference_array):
    ue = np.array([100.0, 20.0, 0.0])
    snap = snapshot(TrajectoryState(tuple(ue), 1.0, 0.0), reference_array)
    direct = np.linalg.norm(reference_array.element_positions() - ue, axis=1)
    np.testing.assert_allclose(element_distances(snap, reference_array), direct, rtol=1e-12, atol=0)
    for m in range(reference_array.n_elements):
        assert element_distance(snap, reference_array, m) == pytest.approx(direct[m], rel=1e-12)


def test_angle_deltas_zero_window(reference_array):
    d = angle_deltas(TrajectoryState((100.0, 0.0), 2.0, 0.0, 0.2), reference_array, 0.0)
    assert d.d_heading == 0 and d.displacement == 0
    assert d.d_azimuth == 0 and d.d_elevation == 0
    assert d.exact_d_azimuth == 0 and d.exact_d_elevation == 0


def test_angle_deltas_linear_motion(reference_array):
    d = angle_deltas(TrajectoryState((100.0, 0.0), 2.0, 0.0), reference_array, 0.5)
    assert d.d_heading == 0.0
    assert d.displacement == pytest.approx(1.0)
    assert d.d_azimuth == d.exact_d_azimuth == pytest.approx(math.atan2(1.0, 100.0))
    assert abs(d.d_elevation) < 1e-5
    assert d.psi_angle == pytest.approx(math.pi / 2 - math.atan2(1.0, 100.0))


def test_angle_deltas_turning_small_angle(reference_array):
    # rho = 10, r_h(0) = 100, heading change 0.2 rad, chord perpendicular to the LoS
    s0 = TrajectoryState((100.0, -1.0), 2.0, -0.1, 0.2)
    d = angle_deltas(s0, reference_array, 1.0)
    assert d.d_heading == pytest.approx(0.2)
    assert d.displacement == pytest.approx(20 * math.sin(0.1))
    assert math.sin(d.psi_angle) == pytest.approx(1.0, abs=1e-3)
    assert 2 * 10 / 100 * math.sin(0.1) == pytest.approx(0.019967, abs=1e-6)
    assert d.d_azimuth == pytest.approx(0.2 * math.sin(0.1), rel=1e-3)
    assert abs(d.d_azimuth - abs(d.exact_d_azimuth)) <= 0.05 * abs(d.exact_d_azimuth)


@settings(max_examples=80, deadline=None)
@given(
    x=st.floats(50, 400), y=st.floats(-100, 100), v=st.floats(0.5, 8),
    heading=st.floats(0, 2 * math.pi), rho=st.floats(1, 40), tau=st.floats(0.01, 4),
)
def test_angle_delta_bounds(x, y, v, heading, rho, tau):
    array = ArrayConfig(64, 0.0625, 3.0, 0.125)
    s0 = TrajectoryState((x, y), v, heading, v / rho)
    try:
        s1 = advance(s0, tau)
    except ScenarioError:
        return
    d = angle_deltas(s0, array, tau)
    r0 = snapshot(s0, array)
    r1 = snapshot(s1, array)
    assert abs(d.d_azimuth) <= 2 * rho / r0.horizontal_range + 1e-15
    assert abs(d.d_elevation) <= 2 * rho * array.height / (r0.range * r1.range) + 1e-15
