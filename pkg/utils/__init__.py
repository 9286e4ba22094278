"""
Make sure the utils package is importable.
"""

from utils.logger import logger, setup_logger, set_level
from utils.config import Config

__all__ = ['logger', 'setup_logger', 'set_level', 'Config']
