"""Exceptions raised by the library and the exit codes the CLI maps them to."""


class BSRootsError(ValueError):
    """Base class for all errors raised by this package."""

    exit_code = 1


class ValidationError(BSRootsError):
    """Input could not be parsed or does not satisfy its schema."""

    exit_code = 1


class PreconditionError(BSRootsError):
    """A mathematical precondition of the requested computation is unmet."""

    exit_code = 2


class InexactDivisionError(BSRootsError, ArithmeticError):
    """Exact division of fractional-exponent polynomials left a remainder."""

    exit_code = 2


class IndeterminateError(BSRootsError):
    """The combinatorial data does not decide the answer.

    Carries every admissible candidate so callers can report them.
    """

    exit_code = 3

    def __init__(self, message: str, candidates: dict | None = None) -> None:
        super().__init__(message)
        self.candidates = candidates or {}
