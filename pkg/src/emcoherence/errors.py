"""Exception hierarchy shared by the library and the CLI."""


class EMCoherenceError(Exception):
    """Base class for all library errors."""


class ScenarioError(EMCoherenceError, ValueError):
    """The UE state or trajectory leaves the valid half-space (x_u <= 0) or is malformed."""


class DomainError(EMCoherenceError, ValueError):
    """A closed-form expression was evaluated outside its mathematical domain."""


class UnboundedCoherenceError(DomainError):
    """The motion produces no first-order decorrelation, so the coherence time is infinite."""


class NoCrossingError(EMCoherenceError):
    """The correlation curve never fell below the threshold within the search horizon."""

    def __init__(self, tau_max, threshold):
        self.tau_max = tau_max
        self.threshold = threshold
        super().__init__(f"no crossing of R(tau) < {threshold:g} within tau_max={tau_max:g} s")


class ConfigError(EMCoherenceError, ValueError):
    """Invalid or incomplete scenario configuration. ``path`` names the offending field."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")
