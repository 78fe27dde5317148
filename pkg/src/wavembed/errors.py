"""Exception types shared across the package."""


class ShapeError(ValueError):
    """Operand shapes are incompatible for the requested operation."""


class DegenerateInputError(ValueError):
    """Input is structurally valid but degenerate (empty, all-zero, too short)."""


class SingularityError(ValueError):
    """A closed form is undefined for these parameters (vanishing denominator)."""


class InconclusiveWitnessError(RuntimeError):
    """A witness could not be recovered from finite differences of the function."""


class PreconditionError(ValueError):
    """A documented call precondition was violated."""


class ContractError(RuntimeError):
    """An object was used outside its documented lifecycle (e.g. stale cache)."""


class DivergenceError(RuntimeError):
    """Training produced a non-finite loss."""

    def __init__(self, message: str, epoch: int | None = None):
        super().__init__(message)
        self.epoch = epoch


class ConfigError(ValueError):
    """Invalid or unknown configuration values."""


class ParseError(ValueError):
    """Malformed input file."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class VocabularyError(IndexError):
    """Token index outside the vocabulary."""
