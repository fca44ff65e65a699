"""Typed errors raised across the library."""


class PointerLabError(Exception):
    """Base class for all pointerlab errors."""


class DegenerateWeightSum(PointerLabError):
    """Weight sum too close to zero for the collapse centre to be defined."""


class UnreachableFinalState(PointerLabError):
    """Conditioning on a final state whose arrival probability vanishes."""


class IllConditionedPostselection(PointerLabError):
    """Post-selection denominator below threshold; the conditional shift diverges."""


class NegativeWeight(PointerLabError):
    """Trial samplers need non-negative weights; a table with negative entries
    cannot drive one."""


class EnvelopeFailure(PointerLabError):
    """Rejection-sampling envelope violated.  Indicates a bug, not bad input."""


class SupportMismatch(PointerLabError):
    """Histogram and reference density have incompatible supports."""


class DomainError(PointerLabError, ValueError):
    """Parameter outside the mathematical domain of a closed-form expression."""


class ParseError(PointerLabError):
    """Scenario file could not be parsed."""


class ValidationError(PointerLabError):
    """Scenario file parsed but violates an invariant."""


class ExecutionError(PointerLabError):
    """An experiment failed while running."""
