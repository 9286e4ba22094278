"""
Core package initialization.
"""

from core.hall import HallBasis, generate_hall_basis, witt_count
from core.collect import NilElement, make_context
from core.lattice import AbelianType, quotient_invariants
from core.baer import BaerInput, baer_engine, baer_formula

__all__ = ['HallBasis', 'generate_hall_basis', 'witt_count', 'NilElement', 'make_context',
           'AbelianType', 'quotient_invariants', 'BaerInput', 'baer_engine', 'baer_formula']
