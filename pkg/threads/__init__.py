"""
Threads package initialization.
"""

from threads.sweep_thread import SweepRunner, resolve_workers

__all__ = ['SweepRunner', 'resolve_workers']
