"""Exception hierarchy.

Validation problems (bad parameters, bad configuration) derive from
``ValueError``; numerical guards that trip on otherwise valid input derive from
:class:`NumericalGuardError`.  The CLI maps the two families to different exit
codes.
"""


class GiantAtomError(Exception):
    """Base class for all package errors."""


class ValidationError(GiantAtomError, ValueError):
    """A parameter or configuration value violates its invariant."""


class DomainError(ValidationError):
    """Wave vector outside the open interval (0, pi)."""


class OutOfBandError(ValidationError):
    """Energy at or outside the band edges of the waveguide."""


class RangeError(ValidationError):
    """A requested sweep or integration range is not covered."""


class ConfigError(ValidationError):
    """Malformed or unknown configuration entry."""


class NumericalGuardError(GiantAtomError, ArithmeticError):
    """A numerical safety guard refused to produce a number."""


class IndeterminatePointError(NumericalGuardError):
    """The closed-form reflection rate is 0/0 at this point; take a limit."""


class NearBoundStateError(NumericalGuardError):
    """The scattering linear system is (numerically) singular."""

    def __init__(self, message, energy=None, condition=None):
        super().__init__(message)
        self.energy = energy
        self.condition = condition


class DispersiveRegimeError(NumericalGuardError):
    """Schrieffer-Wolff construction requested at atom-phonon resonance."""


class PerturbativeValidityError(NumericalGuardError):
    """Schrieffer-Wolff small parameter too large for a second-order model."""


class InconclusiveRunError(NumericalGuardError):
    """A wavepacket reached the chain ends before leaving the scatterer."""

    def __init__(self, message, time_reached=None):
        super().__init__(message)
        self.time_reached = time_reached
