"""Exception hierarchy for the wfst library."""


class WfstError(Exception):
    """Base class for all errors raised by this library."""


class SemiringMismatchError(WfstError):
    """Two weights (or FSTs) from incompatible semirings were combined."""


class UnsupportedOperationError(WfstError):
    """The semiring does not support the requested operation."""


class DivisionByZeroError(WfstError):
    """Semiring division by the additive identity."""


class InvalidStateError(WfstError):
    """A state id that does not exist in the FST."""


class InvalidLabelError(WfstError):
    """A label that cannot be converted to a valid arc label."""


class InvalidWeightError(WfstError):
    """A weight that is not a member of the required semiring."""


class ConvergenceError(WfstError):
    """Cyclic weight relaxation failed to converge within the sweep cap."""


class DeterminizationLimitError(WfstError):
    """Subset construction exceeded the state-expansion cap."""


class NoAcceptingPathError(WfstError):
    """The FST accepts nothing, so no path can be returned."""


class SamplingError(WfstError):
    """Random path sampling hit a dead end or an invalid sampling weight."""


class CycleLimitError(WfstError):
    """A path-walking operation exceeded its step cap on a cyclic machine."""


class FstParseError(WfstError):
    """Malformed FST text document."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
