"""
Logging configuration for netdecode
"""
import sys
from pathlib import Path
from typing import Optional

from loguru import logger

from netdecode.core.config import settings


def setup_logging(
    log_level: Optional[str] = None,
    log_file: Optional[str] = None,
    log_format: Optional[str] = None
) -> None:
    """Setup toolkit logging"""

    # Use settings if not provided
    log_level = (log_level or settings.log_level).upper()
    log_file = log_file or settings.log_file
    log_format = log_format or settings.log_format

    logger.remove()
    logger.add(sys.stderr, level=log_level, format=log_format)

    if log_file:
        # Create logs directory if it doesn't exist
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        logger.add(str(log_path), level=log_level, format=log_format, encoding="utf-8")


def get_logger(name: str):
    """Get logger instance bound to a module name"""
    return logger.bind(name=name)

