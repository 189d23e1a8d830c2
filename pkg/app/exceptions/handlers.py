import logging
from traceback import format_exc

from app.exceptions.config_validation_error import ConfigValidationError
from app.exceptions.output_error import OutputError
from app.exceptions.usage_error import UsageError

logger = logging.getLogger(__name__)


class ExitCode:
    """Process exit codes of the command-line tool."""

    OK = 0
    VALIDATION_FAILED = 1
    USAGE = 2
    IO = 3


def exit_code_for(exc: BaseException) -> int:
    """Map an exception raised by a command to the process exit code."""
    if isinstance(exc, ConfigValidationError):
        logger.error(f"Invalid configuration: {exc}")
        return ExitCode.USAGE
    if isinstance(exc, UsageError):
        logger.error(f"Usage error: {exc}")
        return ExitCode.USAGE
    if isinstance(exc, (OutputError, OSError)):
        logger.error(f"I/O error: {exc}")
        return ExitCode.IO

    logger.error(f"Unhandled error: {exc}\n{format_exc()}")
    return ExitCode.VALIDATION_FAILED
