"""Electromagnetic coherence time of mobile line-of-sight channels."""
from .closed_form import (
    LinearScenario,
    TurningScenario,
    coherence_time_linear,
    coherence_time_linear_lower_bound,
    coherence_time_turning,
    correlation_linear_gaussian,
    correlation_turning_closed,
    correlation_turning_region_integral,
    lambert_w_minus1,
)
from .coherence import CoherenceResult, quarter_wavelength_baseline, solve_numeric
from .correlation import (
    CorrelationCurve,
    MonteCarloCorrelation,
    TrialPlan,
    correlation_expected,
    correlation_single,
    correlation_source,
    polarization_ratio,
)
from .em_channel import ChannelVector, amplitude, amplitude_factors, channel, steering_vector
from .errors import (
    ConfigError,
    DomainError,
    EMCoherenceError,
    NoCrossingError,
    ScenarioError,
    UnboundedCoherenceError,
)
from .geometry import (
    AngleDeltas,
    ArrayConfig,
    GeometrySnapshot,
    TrajectoryState,
    advance,
    angle_deltas,
    element_distance,
    snapshot,
)

__version__ = "0.1.0"
