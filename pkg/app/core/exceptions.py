import enum
from typing import Any, Dict, Optional


class ExitCode(enum.IntEnum):
    OK = 0
    INTERNAL = 1
    INPUT_ERROR = 2
    PRECONDITION = 3
    RESOURCE_LIMIT = 4


class AnalysisError(Exception):
    """Base error for the engine; carries the process exit code and a detail message"""

    default_exit_code: ExitCode = ExitCode.INTERNAL

    def __init__(
        self,
        detail: str,
        exit_code: Optional[ExitCode] = None,
        diagnostics: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(detail)
        self.detail = detail
        self.exit_code = exit_code if exit_code is not None else self.default_exit_code
        self.diagnostics = diagnostics or {}

    @property
    def kind(self) -> str:
        return type(self).__name__.removesuffix("Error")


# ============ POLYNOMIAL ERRORS ============

class PolynomialSyntaxError(AnalysisError):
    default_exit_code = ExitCode.INPUT_ERROR

    def __init__(self, detail: str, position: int, text: str = ""):
        super().__init__(f"{detail} at position {position}", diagnostics={"position": position, "text": text})
        self.position = position


class UndeclaredVariableError(AnalysisError):
    default_exit_code = ExitCode.INPUT_ERROR


class NegativeExponentError(PolynomialSyntaxError):
    pass


class VariableMismatchError(AnalysisError):
    default_exit_code = ExitCode.INPUT_ERROR


class DivisionByZeroError(AnalysisError):
    default_exit_code = ExitCode.INPUT_ERROR


class NotDivisibleError(AnalysisError):
    """Signal raised by exact division when the divisor does not divide"""

    default_exit_code = ExitCode.INTERNAL


class ZeroPolynomialError(AnalysisError):
    default_exit_code = ExitCode.INPUT_ERROR


class ConstantDivisorError(AnalysisError):
    default_exit_code = ExitCode.INPUT_ERROR


class NotUnivariateError(AnalysisError):
    default_exit_code = ExitCode.INPUT_ERROR


# ============ MODEL ERRORS ============

class ZeroDiscriminantError(AnalysisError):
    default_exit_code = ExitCode.INPUT_ERROR


class MalformedTripleError(AnalysisError):
    default_exit_code = ExitCode.PRECONDITION


class NotIsolatedError(AnalysisError):
    default_exit_code = ExitCode.PRECONDITION


class RestrictedDeltaZeroError(AnalysisError):
    default_exit_code = ExitCode.PRECONDITION


class InconsistentConfigurationError(AnalysisError):
    default_exit_code = ExitCode.PRECONDITION


# ============ JOB ERRORS ============

class JobInputError(AnalysisError):
    default_exit_code = ExitCode.INPUT_ERROR


class SelfTestFailure(AnalysisError):
    default_exit_code = ExitCode.INTERNAL
