"""
Configuration utilities.
"""

import os
import json
from typing import Dict, Any, Optional
from utils.logger import logger

class Config:
    """
    Handles configuration loading and saving.
    """
    DEFAULT_CONFIG = {
        "max_basis": 10000,
        "max_class": 6,
        "max_order": 1024,
        "search_max_order": 64,
        "associativity_exhaustive_limit": 64,
        "workers": 0,
        "golden_file": os.path.join("data", "goldens.json"),
        "log_level": "INFO"
    }

    def __init__(self, config_file: str = "config.json"):
        """
        Initialize configuration.

        Args:
            config_file (str): Path to configuration file
        """
        self.config_file = config_file
        self.config = self._load_config()

    def _load_config(self) -> Dict[str, Any]:
        """
        Load configuration from file or create default.

        Values missing from the file fall back to DEFAULT_CONFIG.

        Returns:
            Dict[str, Any]: Configuration dictionary
        """
        config = self.DEFAULT_CONFIG.copy()
        if os.path.exists(self.config_file):
            try:
                with open(self.config_file, 'r') as f:
                    loaded = json.load(f)
                if not isinstance(loaded, dict):
                    raise ValueError("top-level JSON value must be an object")
                config.update(loaded)
                logger.debug(f"Configuration loaded from {self.config_file}")
            except Exception as e:
                logger.error(f"Error loading configuration: {e}")
                logger.info("Using default configuration")
        else:
            logger.debug(f"Configuration file {self.config_file} not found, using defaults")
        return config

    def get(self, key: str, default: Optional[Any] = None) -> Any:
        """
        Get configuration value.

        Args:
            key (str): Configuration key
            default (Any, optional): Default value if key not found

        Returns:
            Any: Configuration value
        """
        return self.config.get(key, default)

    def get_int(self, key: str) -> int:
        """
        Get an integer configuration value, falling back to the default on bad input.

        Args:
            key (str): Configuration key

        Returns:
            int: Configuration value
        """
        value = self.config.get(key, self.DEFAULT_CONFIG.get(key))
        try:
            return int(value)
        except (TypeError, ValueError):
            logger.warning(f"Invalid integer for {key}: {value!r}; using default")
            return int(self.DEFAULT_CONFIG[key])

    def update(self, config_dict: Dict[str, Any]) -> None:
        """
        Update multiple configuration values.

        Args:
            config_dict (Dict[str, Any]): Dictionary of configuration values
        """
        self.config.update(config_dict)
