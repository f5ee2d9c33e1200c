"""
Logging configuration for the ground-state bound solver

Console records go to stderr; stdout is reserved for JSON/CSV results.
"""

import logging
import os
import sys
from logging.handlers import RotatingFileHandler
from typing import Callable, Optional

# Modules whose records also go to the solver log file
SOLVER_LOGGERS = ("general_solver", "boundary_oracle", "existence_scanner", "root_finding")

LOG_FILE = "gup_bound.log"
SOLVER_LOG_FILE = "solver_operations.log"
LOG_MAX_BYTES = 10 * 1024 * 1024
LOG_BACKUP_COUNT = 5

DETAILED_FORMAT = "%(asctime)s | %(levelname)-8s | %(name)-20s | %(message)s"
SIMPLE_FORMAT = "%(levelname)-8s | %(message)s"


def is_solver_record(record: logging.LogRecord) -> bool:
    return record.name.rsplit(".", 1)[-1] in SOLVER_LOGGERS


def _rotating_handler(path: str, formatter: logging.Formatter,
                      record_filter: Optional[Callable[[logging.LogRecord], bool]] = None) -> RotatingFileHandler:
    handler = RotatingFileHandler(path, maxBytes=LOG_MAX_BYTES, backupCount=LOG_BACKUP_COUNT)
    handler.setLevel(logging.DEBUG)
    handler.setFormatter(formatter)
    if record_filter is not None:
        handler.addFilter(record_filter)
    return handler


def setup_logging(log_level: str = "WARNING", log_to_file: bool = False, log_dir: str = "logs"):
    """
    Setup logging configuration

    Args:
        log_level: Console level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_to_file: Also write the main log and the solver log under log_dir
        log_dir: Directory for log files

    Returns:
        The configured root logger
    """
    numeric_level = getattr(logging, log_level.upper(), logging.WARNING)

    root_logger = logging.getLogger()
    root_logger.handlers.clear()

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(numeric_level)
    console_handler.setFormatter(logging.Formatter(SIMPLE_FORMAT))
    root_logger.addHandler(console_handler)

    if log_to_file:
        os.makedirs(log_dir, exist_ok=True)
        detailed = logging.Formatter(DETAILED_FORMAT, datefmt="%Y-%m-%d %H:%M:%S")
        root_logger.addHandler(_rotating_handler(os.path.join(log_dir, LOG_FILE), detailed))
        # Root brackets, grid refinements and scan progress
        root_logger.addHandler(
            _rotating_handler(os.path.join(log_dir, SOLVER_LOG_FILE), detailed, is_solver_record))
        root_logger.setLevel(logging.DEBUG)
    else:
        root_logger.setLevel(numeric_level)

    return root_logger


def get_logger(name: str) -> logging.Logger:
    """Logger for a module (usually called with __name__)"""
    return logging.getLogger(name)


# Initialize logging on import
# Can be overridden by setting environment variables LOG_LEVEL / LOG_TO_FILE
log_level = os.getenv("LOG_LEVEL", "WARNING")
log_to_file = os.getenv("LOG_TO_FILE", "false").lower() == "true"
setup_logging(log_level=log_level, log_to_file=log_to_file)
