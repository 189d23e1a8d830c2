from app.exceptions.config_validation_error import ConfigValidationError
from app.exceptions.output_error import OutputError
from app.exceptions.usage_error import UsageError

__all__ = [
    "ConfigValidationError",
    "OutputError",
    "UsageError",
]
