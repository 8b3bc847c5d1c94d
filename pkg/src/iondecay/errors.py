"""Exception hierarchy shared by all iondecay modules.

Every domain error derives from IonDecayError so callers (and the command
line front end) can distinguish bad input from genuine bugs.
"""


class IonDecayError(Exception):
    """Base class for all errors raised by this package."""


class InvalidState(IonDecayError):
    """State amplitudes are non-finite or not normalized."""


class InvalidCoherenceFactor(IonDecayError):
    """Coherence factor magnitude exceeds 1 beyond tolerance."""


class NotInSubspace(IonDecayError):
    """Four-level state has (numerically) no weight in the protected pair."""


class UnsupportedAnalytic(IonDecayError):
    """No closed-form coherence factor exists for this distribution."""


class ResolutionError(IonDecayError):
    """Quadrature grid too coarse to resolve the phase oscillation."""


class GridError(IonDecayError):
    """Requested times do not sit on the simulation step grid."""


class FockOverflow(IonDecayError):
    """Population reached the top Fock level; the truncation is unsound."""


class NonPositiveVisibility(IonDecayError):
    """Log transform applied to a visibility value <= 0."""


class DegenerateDesign(IonDecayError):
    """Too few (or insufficiently distinct) points to determine a fit."""


class RangeError(IonDecayError):
    """Data value outside its permitted range."""


class ParseError(IonDecayError):
    """Malformed input file."""


class OrderError(IonDecayError):
    """Time column not strictly increasing."""


class ConfigError(IonDecayError):
    """Inconsistent or unusable command configuration."""
