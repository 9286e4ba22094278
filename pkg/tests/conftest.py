import os
import sys

import numpy as np
import pytest

# Make sure the project root is on PYTHONPATH (same idiom as main.py)
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core.collect import make_context
from core.fingroup import FiniteGroup, cyclic_group, direct_product, materialize
from presentations import d4_pcp, q8_pcp


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def ctx22():
    return make_context(2, 2)


@pytest.fixture(scope="session")
def ctx23():
    return make_context(2, 3)


@pytest.fixture(scope="session")
def ctx24():
    return make_context(2, 4)


@pytest.fixture(scope="session")
def ctx33():
    return make_context(3, 3)


@pytest.fixture(scope="session")
def d4() -> FiniteGroup:
    return materialize(d4_pcp())


@pytest.fixture(scope="session")
def q8() -> FiniteGroup:
    return materialize(q8_pcp())


@pytest.fixture(scope="session")
def klein() -> FiniteGroup:
    return direct_product(cyclic_group(2), cyclic_group(2))


@pytest.fixture(scope="session")
def z4() -> FiniteGroup:
    return cyclic_group(4)
