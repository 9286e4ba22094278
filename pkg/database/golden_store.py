"""
JSON store of regression goldens for exhaustive search certificates.
"""

import json
import os
from typing import Any, Dict, Optional

from utils.logger import logger

GOLDEN_FIELDS = ("examined", "consistent", "passing")


def golden_key(r: int, s: int, c: int, p: int) -> str:
    return f"{r}-{s}-{c}-{p}"


class GoldenStore:
    """
    Saves and loads search certificates keyed by `r-s-c-p`.

    Only the count fields are stored; timings and witnesses are not part of
    a golden.
    """

    def __init__(self, golden_file: str = os.path.join("data", "goldens.json")):
        """
        Args:
            golden_file (str): Path of the JSON file
        """
        self.golden_file = golden_file
        self.goldens: Dict[str, Dict[str, int]] = {}
        self._repair_corrupted_file()
        self._load()

    def _repair_corrupted_file(self) -> None:
        """Back up an unreadable golden file and start from an empty store."""
        if not os.path.exists(self.golden_file):
            return
        try:
            with open(self.golden_file, "r") as f:
                data = json.load(f)
            if not isinstance(data, dict):
                raise ValueError("top-level JSON value must be an object")
        except Exception as e:
            logger.error(f"Corrupted golden file detected: {self.golden_file}. Error: {e}")
            backup_path = self.golden_file + ".bak"
            try:
                os.replace(self.golden_file, backup_path)
                logger.info(f"Backed up corrupted file to {backup_path}")
            except Exception as backup_error:
                logger.error(f"Failed to backup corrupted file {self.golden_file}: {backup_error}")
            self.goldens = {}
            self.save()

    def _load(self) -> None:
        if os.path.exists(self.golden_file):
            try:
                with open(self.golden_file, "r") as f:
                    self.goldens = json.load(f)
                logger.debug(f"Loaded {len(self.goldens)} goldens from {self.golden_file}")
            except Exception as e:
                logger.error(f"Error loading goldens: {e}")
                self.goldens = {}

    def save(self) -> bool:
        """
        Write the store to disk.

        Returns:
            bool: True if saved successfully, False otherwise
        """
        try:
            directory = os.path.dirname(os.path.abspath(self.golden_file))
            os.makedirs(directory, exist_ok=True)
            with open(self.golden_file, "w") as f:
                json.dump(self.goldens, f, indent=4, sort_keys=True)
            return True
        except Exception as e:
            logger.error(f"Error saving goldens: {e}")
            return False

    def record(self, key: str, certificate: Dict[str, Any]) -> bool:
        """
        Store the count fields of a certificate under key.

        Returns:
            bool: True if saved successfully
        """
        self.goldens[key] = {name: int(certificate[name]) for name in GOLDEN_FIELDS}
        logger.info(f"Recorded golden {key}: {self.goldens[key]}")
        return self.save()

    def lookup(self, key: str) -> Optional[Dict[str, int]]:
        return self.goldens.get(key)

    def compare(self, key: str, certificate: Dict[str, Any]) -> bool:
        """
        Check a certificate against the recorded golden.

        Returns:
            bool: True iff a golden exists and every count matches
        """
        golden = self.lookup(key)
        if golden is None:
            return False
        mismatched = [name for name in GOLDEN_FIELDS if golden.get(name) != certificate.get(name)]
        if mismatched:
            logger.warning(f"Golden {key} mismatch on {mismatched}: recorded {golden}")
        return not mismatched
