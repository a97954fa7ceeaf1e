"""Exception types shared across the toolkit."""


class ExtShiftError(Exception):
    """Base class for all toolkit-specific failures."""


class ParseError(ExtShiftError):
    """A complex or ideal file could not be parsed."""


class GenericityFailure(ExtShiftError):
    """Independent random coordinate changes disagreed.

    Raising the trial count or the prime usually resolves this; the
    alternative (silently picking one result) is never taken.
    """


class ShiftMismatch(ExtShiftError):
    """The two independent shifting routes produced different complexes."""


class NotShifted(ExtShiftError):
    """An operation that requires a shifted complex received an unshifted one."""


class StabilityViolation(ExtShiftError):
    """A closed-form invariant was requested for an ideal lacking the needed
    stability property."""


class ConsistencyFailure(ExtShiftError):
    """Two internal computation routes for the same quantity disagreed."""


class VerificationFailure(ExtShiftError):
    """A mathematical identity or inequality that must hold was violated."""


class ParameterInfeasible(ExtShiftError):
    """The requested parameters admit no valid construction."""


class SizeLimit(ExtShiftError):
    """A computation was refused because it exceeds the configured cost guard."""


class DependentSequence(ExtShiftError):
    """A sequence of linear forms that must be independent is dependent."""
