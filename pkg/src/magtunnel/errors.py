"""Exception hierarchy.

Domain failures (no well, no resonance, no periodic orbit) are distinct from
bad input so the CLI can map them to separate exit codes.
"""


class MagTunnelError(Exception):
    """Base class for all package errors."""


class DomainError(MagTunnelError, ValueError):
    """An argument lies outside the domain of the operation."""


class NoWell(MagTunnelError):
    """The effective potential does not form a well; no instanton exists."""


class DivergentIntegral(MagTunnelError):
    """A cycle integral diverges (translation and period at zero field)."""


class AccuracyNotReached(MagTunnelError):
    """Quadrature exhausted its maximum order before meeting the tolerance."""

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class NoPeriodicOrbit(MagTunnelError):
    """The half-cycle turning event was not found within the time limit."""


class IntegratorFailure(MagTunnelError):
    """The integrated orbit left the energy shell beyond tolerance."""


class NoResonance(MagTunnelError):
    """No sign change of f1 - f2 in the scanned parameter range."""

    def __init__(self, message, p_range=None):
        super().__init__(message)
        self.p_range = p_range
