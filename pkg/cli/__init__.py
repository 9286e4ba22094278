"""
Command-line package initialization.
"""

from cli.app import build_parser, dispatch

__all__ = ['build_parser', 'dispatch']
