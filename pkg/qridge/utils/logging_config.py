"""
Centralized logging configuration for the quantum ridge-regression simulator.
"""
import logging
import logging.handlers
import os
import sys
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

DEFAULT_LOG_LEVEL = "WARNING"
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


class QRidgeLogger:
    """Centralized logger configuration for the qridge package."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def setup_logging(self,
                      log_level: Optional[str] = None,
                      log_to_file: Optional[bool] = None,
                      log_to_console: bool = True,
                      log_dir: str = "logs",
                      max_file_size: int = 10 * 1024 * 1024,  # 10MB
                      backup_count: int = 5):
        """
        Setup centralized logging configuration.

        Unset arguments fall back to QRIDGE_LOG_LEVEL / QRIDGE_LOG_FILE from the
        environment (a .env file in the working directory is honoured).

        Args:
            log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
            log_to_file: Whether to log to a rotating file under log_dir
            log_to_console: Whether to log to stderr
            log_dir: Directory for the log file
            max_file_size: Maximum size of log file before rotation
            backup_count: Number of backup files to keep
        """
        load_dotenv()
        if log_level is None:
            log_level = os.getenv("QRIDGE_LOG_LEVEL", DEFAULT_LOG_LEVEL)
        if log_to_file is None:
            flag = os.getenv("QRIDGE_LOG_FILE", "0").strip().lower()
            log_to_file = flag in ("1", "true", "yes")

        level = getattr(logging, log_level.upper(), None)
        if not isinstance(level, int):
            raise ValueError(f"Unknown log level: {log_level}")

        root_logger = logging.getLogger()
        root_logger.setLevel(level)
        root_logger.handlers.clear()

        formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)

        # stderr keeps stdout free for reports
        if log_to_console:
            console_handler = logging.StreamHandler(sys.stderr)
            console_handler.setLevel(level)
            console_handler.setFormatter(formatter)
            root_logger.addHandler(console_handler)

        if log_to_file:
            log_path = Path(log_dir)
            log_path.mkdir(parents=True, exist_ok=True)
            file_handler = logging.handlers.RotatingFileHandler(
                log_path / "qridge.log",
                maxBytes=max_file_size,
                backupCount=backup_count,
                encoding='utf-8'
            )
            file_handler.setLevel(level)
            file_handler.setFormatter(formatter)
            root_logger.addHandler(file_handler)

        logging.getLogger(__name__).debug(
            "qridge logging initialized "
            f"(level={log_level.upper()}, file={log_to_file})"
        )

    @staticmethod
    def get_logger(name: str) -> logging.Logger:
        """
        Get a logger instance for the specified name.

        Args:
            name: Logger name (usually __name__)

        Returns:
            Logger instance
        """
        return logging.getLogger(name)

    @staticmethod
    def log_exception(logger: logging.Logger, message: str, exc_info: bool = True):
        """
        Log an exception with full traceback.

        Args:
            logger: Logger instance
            message: Error message
            exc_info: Whether to include exception info
        """
        logger.error(message, exc_info=exc_info)

    @staticmethod
    def log_pipeline_step(
        logger: logging.Logger, pipeline: str, step: str, details: str = ""
    ):
        """
        Log a circuit stage of one of the pipelines.

        Args:
            logger: Logger instance
            pipeline: Pipeline name (predict, fitted-state, ...)
            step: Stage name (encode, phase-estimation, rotation, ...)
            details: Additional details
        """
        logger.debug(f"[{pipeline}] {step}: {details}")


# Convenience functions for easy import
def setup_logging(**kwargs):
    """Setup logging with optional parameters."""
    QRidgeLogger().setup_logging(**kwargs)


def get_logger(name: str) -> logging.Logger:
    """Get a logger instance."""
    return QRidgeLogger.get_logger(name)


def log_exception(logger: logging.Logger, message: str, exc_info: bool = True):
    QRidgeLogger.log_exception(logger, message, exc_info)


def log_pipeline_step(
    logger: logging.Logger, pipeline: str, step: str, details: str = ""
):
    QRidgeLogger.log_pipeline_step(logger, pipeline, step, details)
