"""
Error types and failure bookkeeping for the quantum ridge-regression simulator.
"""
import functools
import json
from typing import Any, Callable, Dict, Optional

from qridge.utils.logging_config import get_logger, log_exception

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2


class QRidgeError(Exception):
    """Base class for every error raised by qridge."""
    exit_code = EXIT_NUMERICAL

    def to_dict(self) -> Dict[str, Any]:
        return {
            "type": self.__class__.__name__,
            "message": str(self),
            "exit_code": self.exit_code,
        }


# Usage / configuration errors

class ConfigurationError(QRidgeError):
    """Invalid configuration value."""
    exit_code = EXIT_USAGE


class DimensionError(QRidgeError, ValueError):
    """Operand shapes do not agree."""
    exit_code = EXIT_USAGE


class LayoutError(QRidgeError, ValueError):
    """Unknown register, name collision, layout mismatch or qubit budget exceeded."""
    exit_code = EXIT_USAGE


class DatasetError(QRidgeError):
    """CSV ingestion failure, located by row/column when possible."""
    exit_code = EXIT_USAGE

    def __init__(
        self, message: str, row: Optional[int] = None, column: Optional[str] = None
    ):
        location = ""
        if row is not None:
            location += f"row {row}"
        if column is not None:
            location += f"{', ' if location else ''}column '{column}'"
        super().__init__(f"{message} ({location})" if location else message)
        self.row = row
        self.column = column


class ReportWriteError(QRidgeError, OSError):
    """Report could not be written."""
    exit_code = EXIT_USAGE

    def __init__(self, path: str, reason: str):
        super().__init__(f"cannot write report to {path}: {reason}")
        self.path = path


# Numerical pipeline errors

class NumericalError(QRidgeError):
    """Numerical failure inside a pipeline."""
    exit_code = EXIT_NUMERICAL


class ZeroMatrixError(NumericalError):
    pass


class IllConditionedError(NumericalError):
    pass


class NormalizationError(NumericalError, ValueError):
    pass


class NotUnitaryError(NumericalError):
    pass


class PhaseWraparoundError(NumericalError):
    pass


class ClockRegisterError(NumericalError):
    """Clock register missing, not initialised, or left entangled."""


class PostSelectionError(NumericalError):
    pass


class RotationSaturationError(NumericalError):
    pass


class ConsistencyError(NumericalError):
    """A diagnostic identity between two computed quantities failed."""


class TuneFailure(NumericalError):
    """Every candidate on the alpha grid failed."""

    def __init__(self, message: str, failures: Dict[str, str]):
        super().__init__(message)
        self.failures = dict(failures)


class FailureLedger:
    """Counts failures per key and keeps the last message for each."""

    def __init__(self):
        self.error_counts: Dict[str, int] = {}
        self.last_errors: Dict[str, str] = {}

    def record(self, key: str, error: Exception):
        """
        Record a failure.

        Args:
            key: Identifier of the failing unit of work
            error: The exception that occurred
        """
        self.error_counts[key] = self.error_counts.get(key, 0) + 1
        self.last_errors[key] = f"{error.__class__.__name__}: {error}"
        logger.warning(f"Failure recorded for {key}: {error}")

    def failed_keys(self):
        return [key for key, count in self.error_counts.items() if count > 0]

    def summary(self) -> Dict[str, str]:
        return {key: self.last_errors[key] for key in self.failed_keys()}

    def __len__(self):
        return len(self.failed_keys())


def error_payload(error: Exception) -> Dict[str, Any]:
    """Machine-readable error object for reports and stdout."""
    if isinstance(error, QRidgeError):
        body = error.to_dict()
    else:
        body = {
            "type": error.__class__.__name__,
            "message": str(error),
            "exit_code": EXIT_NUMERICAL,
        }
    return {"error": body}


def exit_on_error(emit: Optional[Callable[[Dict[str, Any]], None]] = None):
    """
    Decorator for CLI handlers: maps exceptions to exit codes.

    The wrapped handler returns an exit code. On QRidgeError the error object is
    handed to `emit` (printed as JSON when emit is None) and the error's exit code
    is returned; any other exception is logged with traceback and returns 1.
    """
    def decorator(func: Callable[..., int]) -> Callable[..., int]:
        @functools.wraps(func)
        def wrapper(*args, **kwargs) -> int:
            try:
                return func(*args, **kwargs)
            except QRidgeError as e:
                logger.error(f"{func.__name__} failed: {e.__class__.__name__}: {e}")
                payload = error_payload(e)
                exit_code = e.exit_code
            except Exception as e:
                log_exception(logger, f"Unhandled error in {func.__name__}: {e}")
                payload = error_payload(e)
                exit_code = EXIT_NUMERICAL
            if emit is not None:
                emit(payload)
            else:
                print(json.dumps(payload, sort_keys=True))
            return exit_code
        return wrapper
    return decorator
