import logging
from typing import Optional
from app.config import get_settings

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


class LoggingConfig:
    _instance: Optional["LoggingConfig"] = None
    _initialized: bool = False

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if not self._initialized:
            self._settings = get_settings()
            self._configure_logging()
            self._initialized = True

    def _configure_logging(self):
        """Configure logging based on settings."""
        log_level = getattr(logging, self._settings.log_level.upper(), logging.INFO)

        root_logger = logging.getLogger()
        root_logger.setLevel(log_level)

        # Always ensure root logger has a handler
        if not root_logger.handlers:
            handler = logging.StreamHandler()
            handler.setFormatter(logging.Formatter(LOG_FORMAT))
            root_logger.addHandler(handler)

        loggers = {
            "app": log_level,
            self._settings.app_name: log_level,
            # Set third-party loggers to higher levels
            "numpy": logging.WARNING,
            "scipy": logging.WARNING,
            "matplotlib": logging.WARNING,
            "faker": logging.WARNING,
        }

        for logger_name, level in loggers.items():
            logger = logging.getLogger(logger_name)
            logger.setLevel(level)
            logger.propagate = True

    def set_level(self, level: str) -> None:
        """Override the application log level (e.g. from a --verbose flag)."""
        numeric = getattr(logging, level.upper(), logging.INFO)
        logging.getLogger().setLevel(numeric)
        for name in ("app", self._settings.app_name):
            logging.getLogger(name).setLevel(numeric)

    def get_logger(self, name: str) -> logging.Logger:
        """Get a logger instance with the given name."""
        return logging.getLogger(name)


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """Get a logger instance with the given name, the application logger by default."""
    return LoggingConfig().get_logger(name or get_settings().app_name)
