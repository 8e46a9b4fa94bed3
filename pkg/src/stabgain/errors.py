"""Exception hierarchy shared by every stage of the pipeline."""


class StabgainError(Exception):
    """Base class for all package errors."""


class ValidationError(StabgainError, ValueError):
    """Input data or arguments violate a precondition."""


class OutOfRange(ValidationError):
    pass


class NonFinite(ValidationError):
    pass


class MissingField(ValidationError):
    pass


class DuplicateKey(ValidationError):
    pass


class EmptyDataset(ValidationError):
    pass


class NegativeBarrier(ValidationError):
    pass


class DenominatorBelowOne(ValidationError):
    pass


class InvalidCoefficients(ValidationError):
    pass


class EmptySample(ValidationError):
    pass


class LengthMismatch(ValidationError):
    pass


class TooFewObservations(ValidationError):
    pass


class ZeroVariance(ValidationError):
    pass


class AllZeroDifferences(ValidationError):
    pass


class EmptyLevels(ValidationError):
    pass


class SingleModel(ValidationError):
    pass


class InvalidBounds(ValidationError):
    pass


class InvalidSpec(ValidationError):
    pass


class MissingColumn(ValidationError):
    def __init__(self, name: str):
        super().__init__(f"missing column: {name}")
        self.name = name


class EmptyFile(ValidationError):
    pass


class MalformedRow(ValidationError):
    """A data row failed to parse or validate; ``line`` is 1-based."""

    def __init__(self, line: int, cause: Exception):
        super().__init__(f"line {line}: {cause}")
        self.line = line
        self.cause = cause


class IncompleteInputs(ValidationError):
    pass


class NonConvergence(StabgainError, ArithmeticError):
    """An iterative numerical routine hit its iteration cap."""
