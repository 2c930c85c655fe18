"""Exception hierarchy shared across the package."""


class SpinChargeError(Exception):
    """Base class for all package errors."""


class LatticeError(SpinChargeError):
    """Invalid lattice construction (bad size, index out of range, self-loop)."""


class EdgeListParseError(LatticeError):
    """Malformed edge-list input; carries the offending line number."""

    def __init__(self, message, line_no=None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class ScheduleError(SpinChargeError):
    """Schedule domain violation (t outside [0, tau], bad parameters)."""


class InterpolationError(ScheduleError):
    """Energy table undefined at the requested schedule point."""


class CapacityError(SpinChargeError):
    """Requested system size exceeds the configured cap."""


class IntegratorError(SpinChargeError):
    """Propagation failed a conservation or positivity check."""


class InsufficientDataError(SpinChargeError):
    """Not enough points for the requested fit."""


class ConfigError(SpinChargeError):
    """Invalid or inconsistent experiment configuration."""
