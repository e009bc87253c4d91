import os
import logging
import sys
from typing import Optional
from .. import config
from logging.handlers import RotatingFileHandler


def setup_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> None:
    """Set up logging configuration.

    Reports are written to stdout, so the console handler logs to stderr.

    Args:
        level: Level name overriding LOG_LEVEL.
        log_file: Path overriding LOG_FILE; empty disables the rotating file handler.
    """
    level_name = (level or config.LOG_LEVEL).upper()
    log_level = getattr(logging, level_name, logging.INFO)
    log_file = config.LOG_FILE if log_file is None else log_file

    handlers = [logging.StreamHandler(sys.stderr)]

    if log_file:
        # Create logs directory if it doesn't exist
        log_dir = os.path.dirname(log_file)
        if log_dir and not os.path.exists(log_dir):
            os.makedirs(log_dir, exist_ok=True)

        max_log_size = config.LOG_MAX_SIZE_MB * 1024 * 1024  # Convert MB to bytes
        handlers.append(
            RotatingFileHandler(
                log_file,
                maxBytes=max_log_size,
                backupCount=config.LOG_BACKUP_COUNT
            )
        )

    logging.basicConfig(
        level=log_level,
        format=config.LOG_FORMAT,
        handlers=handlers,
        force=True
    )

    # Chatty third-party loggers stay at WARNING unless debugging
    if not config.DEBUG:
        logging.getLogger("urllib3").setLevel(logging.WARNING)

    logging.debug(f"Logging initialised at {level_name}")
