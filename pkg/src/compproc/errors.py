"""Exception hierarchy shared across the package."""


class CompprocError(Exception):
    """Base class for all package-specific errors."""


class ModelValidationError(CompprocError):
    """A model violates one of its parameter hypotheses."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class AbsorbingStateError(CompprocError):
    """The chain has zero total rate at the current state."""


class StateOverflowError(CompprocError):
    """A coordinate would leave the signed 64-bit range."""


class GeneratorDomainError(CompprocError):
    """A test function is not finite at a state the generator needs."""

    def __init__(self, state, message=None):
        self.state = tuple(state)
        super().__init__(message or f"test function not finite at state {self.state}")


class TrajectoryTooShortError(CompprocError):
    """Not enough post-burn-in events for a classification."""


class ConfigError(CompprocError):
    """Malformed or inconsistent run configuration."""
