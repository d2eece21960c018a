"""Exception hierarchy shared by all cpbox modules."""


class CpboxError(Exception):
    """Base class for all cpbox errors."""


class InvalidParameterError(CpboxError, ValueError):
    """A physical or configuration parameter is out of its valid range."""


class DimensionMismatchError(CpboxError, ValueError):
    """Matrix or vector dimensions are inconsistent."""


class TruncationTooSmallError(CpboxError, ValueError):
    """The Fock-space cutoff leaves more probability mass in the tail than allowed."""


class NumericalError(CpboxError, RuntimeError):
    """A numerical procedure failed to meet its accuracy or sanity requirements."""


class StepSizeUnderflowError(NumericalError):
    """The adaptive integrator shrank its step below the representable limit."""


class PositivityError(NumericalError):
    """A density matrix developed a significantly negative eigenvalue."""
