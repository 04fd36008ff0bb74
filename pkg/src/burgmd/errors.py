"""Exception hierarchy for burgmd."""


class BurgMDError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgumentError(BurgMDError, ValueError):
    pass


class DecompositionError(BurgMDError, ArithmeticError):
    """The eigensolver failed to converge."""


class ConvergenceError(BurgMDError, ArithmeticError):
    """An iterative subroutine hit its iteration cap."""


class SingularLikelihoodError(BurgMDError, ArithmeticError):
    """Some measurement probability tr(A rho) is (numerically) zero.

    ``index`` is the position of the offending entry in the dataset, or
    ``None`` when a single operator was evaluated.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class NumericDegeneracyError(BurgMDError, ArithmeticError):
    pass


class ModelViolationError(BurgMDError, ValueError):
    """A probability computed from the model falls outside [0, 1]."""


class DatasetFormatError(BurgMDError, ValueError):
    """Malformed dataset file. ``line``/``offset`` locate JSON syntax errors."""

    def __init__(self, message, line=None, offset=None):
        if line is not None:
            message = f"{message} (line {line}, column {offset})"
        super().__init__(message)
        self.line = line
        self.offset = offset


class UnsupportedVersionError(DatasetFormatError):
    pass
