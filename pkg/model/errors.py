"""
Exceptions raised by the numeric layer.

Each exception carries the `HTTPStatus` the scenario engine answers with when
it catches it, so the same error surfaces as a 4xx on the HTTP API and as an
exit code on the CLI.
"""

from http import HTTPStatus


class LabError(Exception):
    """ Base class of every error raised by the verification lab """
    status = HTTPStatus.UNPROCESSABLE_ENTITY

    def record(self) -> dict:
        """
        Structured failure record used by reports.

        Returns:
            dict: error type name and message.
        """
        return {"error": str(self), "type": type(self).__name__}


class InvalidArgumentError(LabError, ValueError):
    """ A precondition on an argument does not hold """
    status = HTTPStatus.BAD_REQUEST


class ConfigurationError(InvalidArgumentError):
    """ A scenario configuration is malformed """


class InvalidSpaceError(InvalidArgumentError):
    """ A model space has a nonpositive density or broken periodicity """


class UnsupportedError(InvalidArgumentError):
    """ The requested space/boundary combination is not supported """


class DomainError(LabError, ArithmeticError):
    """ A jet primitive was applied outside its domain """


class SingularPointError(LabError):
    """ The chart metric is singular at the evaluation point """


class DegenerateGradientError(LabError):
    """ |∇u|² is below the degenerate-gradient threshold """


class BracketError(LabError):
    """ The shooting method could not bracket the first eigenvalue """


class NotApplicableError(LabError):
    """ A bound is evaluated outside the hypotheses of its theorem """


class OutputError(InvalidArgumentError):
    """ A report cannot be written to the requested path """


class NumericalFailureError(LabError):
    """
    An exception from numpy, scipy or Python itself escaped a runner. The
    record keeps the original exception's type name.
    """
    def __init__(self, message: str, cause_type: str):
        super().__init__(message)
        self.cause_type = cause_type

    @classmethod
    def wrap(cls, err: Exception) -> "NumericalFailureError":
        failure = cls(str(err), type(err).__name__)
        failure.__cause__ = err
        return failure

    def record(self) -> dict:
        return {"error": str(self), "type": self.cause_type}
