"""Error types raised by the services; the command layer maps them to exit codes."""


class MEResponseError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class DomainError(MEResponseError, ValueError):
    """An input lies outside the domain of an operation."""

    exit_code = 2


class ConfigError(MEResponseError):
    """A sweep or command configuration is malformed."""

    exit_code = 2


class PoleError(MEResponseError, ArithmeticError):
    """A real frequency hit an undamped resonance."""

    exit_code = 3

    def __init__(self, omega, resonance):
        self.omega = omega
        self.resonance = resonance
        super().__init__(
            f"frequency {omega!r} rad/s lies on the undamped resonance at {resonance!r} rad/s"
        )


class ValidationFailure(MEResponseError):
    """One or more oracle comparisons exceeded their tolerance."""

    exit_code = 1

    def __init__(self, failed):
        self.failed = list(failed)
        super().__init__("failed checks: " + ", ".join(self.failed))
