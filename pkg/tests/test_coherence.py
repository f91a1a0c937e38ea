import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from emcoherence.closed_form import LinearScenario, coherence_time_linear, correlation_linear_gaussian
from emcoherence.coherence import CoherenceResult, quarter_wavelength_baseline, quarter_wavelength_result, solve_numeric
from emcoherence.correlation import TrialPlan, correlation_source
from emcoherence.errors import NoCrossingError, UnboundedCoherenceError


def test_constant_curve_has_no_crossing():
    with pytest.raises(NoCrossingError) as info:
        solve_numeric(lambda t: 1.0, 0.9, 5.0)
    assert info.value.tau_max == 5.0


def test_gaussian_curve_analytic_inverse():
    res = solve_numeric(lambda t: math.exp(-t * t), 0.9, 5.0, tol=1e-12)
    assert res.t_em == pytest.approx(math.sqrt(math.log(10 / 9)), abs=1e-12)
    assert res.t_em == pytest.approx(0.32459, abs=5e-6)
    lo, hi = res.bracket
    assert math.exp(-lo * lo) >= 0.9 > math.exp(-hi * hi)
    assert res.method == "numeric_exact" and res.threshold == 0.9


def _dip(t):
    # below 0.9 only on (1.0, 1.2), then recovers until 3.0
    if 1.0 < t < 1.2:
        return 0.5
    return 1.0 if t < 3.0 else 0.0


def test_first_crossing_is_returned():
    res = solve_numeric(_dip, 0.9, 10.0, tol=1e-9, max_step=0.1)
    assert res.t_em == pytest.approx(1.0, abs=1e-9)


def test_tolerance_refinement_keeps_the_crossing():
    curve = lambda t: math.exp(-t * t)
    coarse = solve_numeric(curve, 0.9, 5.0, tol=1e-4)
    fine = solve_numeric(curve, 0.9, 5.0, tol=5e-5)
    width = lambda r: r.bracket[1] - r.bracket[0]
    assert width(fine) <= width(coarse) / 2 + 1e-15
    assert coarse.bracket[0] <= fine.t_em <= coarse.bracket[1]


@settings(max_examples=50, deadline=None)
@given(a=st.floats(0.05, 50), zeta=st.floats(0.05, 0.98), tol=st.floats(1e-10, 1e-4))
def test_bracket_holds_crossing(a, zeta, tol):
    curve = lambda t: math.exp(-a * t)
    res = solve_numeric(curve, zeta, 100.0, tol)
    lo, hi = res.bracket
    assert hi - lo <= tol
    assert curve(lo) >= zeta > curve(hi)
    assert res.t_em == pytest.approx(math.log(1 / zeta) / a, abs=tol)


def test_gaussian_source_matches_linear_closed_form():
    s = LinearScenario(100.0, 10.0, 0.9, 64, 0.0, math.pi / 2, math.pi / 2)
    res = solve_numeric(lambda t: correlation_linear_gaussian(t, s), 0.9, 1.0, tol=1e-10)
    assert res.t_em == pytest.approx(coherence_time_linear(s), abs=1e-10)


def test_deadband_lowers_effective_level():
    curve = lambda t: math.exp(-t)
    plain = solve_numeric(curve, 0.9, 10.0, 1e-9)
    banded = solve_numeric(curve, 0.9, 10.0, 1e-9, deadband=0.05)
    assert banded.t_em == pytest.approx(math.log(1 / 0.85), abs=1e-9)
    assert banded.t_em > plain.t_em


def test_invalid_inputs():
    with pytest.raises(ValueError):
        solve_numeric(lambda t: 1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        solve_numeric(lambda t: 1.0, 0.9, 0.0)
    with pytest.raises(ValueError):
        solve_numeric(lambda t: 0.5, 0.9, 1.0)


def test_noisy_source_variance_shrinks_with_trials(reference_array):
    def spread(n):
        values = []
        for seed in range(6):
            src = correlation_source((200.0, 0.0), 2.0, 0.2, reference_array, TrialPlan(n, seed))
            values.append(solve_numeric(src, 0.9, 5.0, 1e-4).t_em)
        return np.var(values)

    assert spread(800) < spread(50)


def test_quarter_wavelength():
    assert quarter_wavelength_baseline(2.0, 0.125) == 0.015625
    assert quarter_wavelength_baseline(6.0, 0.125) == pytest.approx(0.0052083, abs=5e-8)
    assert quarter_wavelength_baseline(2.0, 0.25) == 2 * quarter_wavelength_baseline(2.0, 0.125)
    with pytest.raises(UnboundedCoherenceError):
        quarter_wavelength_baseline(0.0, 0.125)
    assert quarter_wavelength_result(2.0, 0.125).method == "quarter_wavelength"


def test_result_lines():
    lines = CoherenceResult(0.2010289, "closed_turning", 0.9).as_lines()
    assert lines == ["t_em_s=0.2010289", "method=closed_turning", "threshold=0.9"]
    lines = CoherenceResult(0.5, "numeric_exact", 0.9, (0.49, 0.51), 12).as_lines()
    assert "bracket_lo_s=0.49" in lines and "evaluations=12" in lines
