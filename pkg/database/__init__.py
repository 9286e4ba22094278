"""
Database package initialization.
"""

from database.golden_store import GoldenStore

__all__ = ['GoldenStore']
