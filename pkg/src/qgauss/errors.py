"""Exception hierarchy shared by every qgauss module."""


class QGaussError(Exception):
    """Base class for all qgauss errors."""


class InvalidArgumentError(QGaussError, ValueError):
    """An argument is outside the documented domain."""


class GridMismatchError(QGaussError, ValueError):
    """Two fields that must share a grid do not."""


class NonFiniteFieldError(QGaussError, ValueError):
    """A field contains NaN or infinite samples."""


class NormalizationError(QGaussError, ValueError):
    """A density or wave function is not normalized within tolerance."""


class DegenerateStateError(QGaussError):
    """The density is too small everywhere to define flow variables."""


class MissingPhaseError(QGaussError):
    """An operation needs the phase field S but the state carries none."""


class DegenerateMetricError(QGaussError):
    """A surface parametrization is not regular at the requested point."""


class ConstraintViolationError(QGaussError):
    """A surface-adapted state carries a non-zero normal velocity."""


class TooFewSamplesError(QGaussError):
    """A trajectory has too few samples for the requested diagnostic."""


class SolverError(QGaussError):
    """Base class for failures raised while time stepping."""


class StabilityViolationError(SolverError):
    """The time step exceeds the explicit stability bound."""


class BlowUpError(SolverError):
    """A field left the admissible range during a run."""


class CausticError(SolverError):
    """The flow is approaching a node with diverging velocity."""


class LinearSolveError(SolverError):
    """An implicit step could not be solved."""


class ConfigError(QGaussError):
    """Base class for scenario configuration problems."""


class ConfigParseError(ConfigError):
    """The scenario file is not well-formed."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class ConfigValidationError(ConfigError):
    """A scenario value is missing, unknown or out of range."""

    def __init__(
        self, message: str, key: str | None = None, suggestion: str | None = None
    ) -> None:
        self.key = key
        self.suggestion = suggestion
        text = message
        if suggestion:
            text += f" (did you mean '{suggestion}'?)"
        super().__init__(text)
