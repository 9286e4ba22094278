"""
Utilities for logging.
"""

import os
import logging
from logging.handlers import RotatingFileHandler

def setup_logger(name="nilcover", log_dir="logs", level=logging.INFO):
    """
    Setup logger with rotating file handler and console handler.

    The console handler writes to stderr so that stdout stays reserved for
    the JSON envelope printed by the CLI.

    Args:
        name (str): Logger name
        log_dir (str): Directory to store log files (None disables file logging)
        level (int): Logging level

    Returns:
        logging.Logger: Configured logger
    """
    # Create logger
    logger = logging.getLogger(name)
    logger.setLevel(level)

    # Already configured by an earlier import
    if logger.handlers:
        return logger

    # Create formatter
    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    # Create console handler
    console_handler = logging.StreamHandler()
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_dir is None:
        return logger

    # Create logs directory if it doesn't exist
    try:
        os.makedirs(log_dir, exist_ok=True)
    except OSError as e:
        logger.warning(f"Cannot create log directory {log_dir}: {e}; file logging disabled")
        return logger

    # Create file handler
    file_handler = RotatingFileHandler(
        os.path.join(log_dir, f"{name}.log"),
        maxBytes=10*1024*1024,  # 10MB
        backupCount=5
    )
    file_handler.setLevel(level)
    file_handler.setFormatter(formatter)
    logger.addHandler(file_handler)

    return logger

def set_level(level):
    """
    Change the level of the shared logger and all of its handlers.

    Args:
        level (int | str): Logging level, e.g. logging.DEBUG or "DEBUG"
    """
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
    logger.setLevel(level)
    for handler in logger.handlers:
        handler.setLevel(level)

# Create default logger
logger = setup_logger(log_dir=os.environ.get("NILCOVER_LOG_DIR", "logs"))
