import numpy as np
import pytest

from core.errors import InvalidArgumentError
from core.lattice import (AbelianType, IntMatrix, hermite_normal_form, invariants_of_cyclic_sum,
                          quotient_invariants, smith_normal_form)
from oracles import exact_det, exact_rank, residue_count


@pytest.mark.parametrize("rows, expected", [
    ([[2, 0], [0, 3]], (1, 6)),
    ([[4, 0], [0, 6]], (2, 12)),
    ([[0, 0], [0, 0]], (0, 0)),
    ([[4], [6]], (2,)),
    ([[2, 4, 4], [-6, 6, 12], [10, -4, -16]], (2, 6, 12)),
])
def test_smith_examples(rows, expected):
    assert smith_normal_form(rows) == expected


def test_quotient_examples():
    assert quotient_invariants(1, [[4], [6]]) == AbelianType((2,), 0)
    assert quotient_invariants(2, [[2, 0], [0, 2]]) == AbelianType((2, 2), 0)
    assert quotient_invariants(2, []) == AbelianType((), 2)
    assert quotient_invariants(3, [[1, 0, 0]]) == AbelianType((), 2)
    assert quotient_invariants(0, []).is_trivial


def test_quotient_rejects_ragged_rows():
    with pytest.raises(InvalidArgumentError):
        quotient_invariants(2, [[1, 2, 3]])


def test_hermite_example():
    assert hermite_normal_form([[2, 4], [0, 3]]) == ((2, 1), (0, 3))
    assert hermite_normal_form([[0, 0], [0, 0]]) == ()


def test_abelian_type_rendering():
    assert str(AbelianType((2, 2), 0)) == "Z_2 + Z_2"
    assert str(AbelianType((3,), 2)) == "Z_3 + Z^2"
    assert str(AbelianType()) == "1"
    assert AbelianType((2, 6)).order() == 12
    assert AbelianType((2,), 1).order() is None


def test_abelian_type_checks_chain():
    with pytest.raises(InvalidArgumentError):
        AbelianType((2, 3))
    with pytest.raises(InvalidArgumentError):
        AbelianType((1,))


def test_int_matrix_shape():
    with pytest.raises(InvalidArgumentError):
        IntMatrix(1, 2, ((1,),))
    assert IntMatrix.from_rows([[1, 2], [3, 4]]).cols == 2


def test_cyclic_sum():
    assert invariants_of_cyclic_sum([4, 6]).invariants == (2, 12)
    assert invariants_of_cyclic_sum([3, 5]).invariants == (15,)


def _random_matrix(rng, max_size=3, bound=6):
    rows = int(rng.integers(1, max_size + 1))
    cols = int(rng.integers(1, max_size + 1))
    return rng.integers(-bound, bound + 1, size=(rows, cols)).tolist()


def test_divisibility_chain_and_det(rng):
    for _ in range(300):
        n = int(rng.integers(1, 4))
        M = rng.integers(-6, 7, size=(n, n)).tolist()
        diagonal = smith_normal_form(M)
        assert all(d >= 0 for d in diagonal)
        for a, b in zip(diagonal, diagonal[1:]):
            assert (b == 0) if a == 0 else b % a == 0
        product = 1
        for d in diagonal:
            product *= d
        assert product == abs(exact_det(M))


def test_zero_count_is_corank(rng):
    for _ in range(200):
        M = _random_matrix(rng)
        diagonal = smith_normal_form(M)
        assert sum(1 for d in diagonal if d) == exact_rank(M)


def test_unimodular_row_operations(rng):
    for _ in range(200):
        M = _random_matrix(rng)
        n = len(M[0])
        base = quotient_invariants(n, M)
        permuted = list(reversed(M))
        negated = [[-x for x in M[0]]] + M[1:]
        if len(M) > 1:
            added = [M[0], [a + b for a, b in zip(M[0], M[1])]] + M[2:]
        else:
            added = M
        assert quotient_invariants(n, permuted) == base
        assert quotient_invariants(n, negated) == base
        assert quotient_invariants(n, added) == base


def test_quotient_order_matches_residue_enumeration(rng):
    for _ in range(500):
        n = int(rng.integers(1, 4))
        M = rng.integers(-6, 7, size=(n, n)).tolist()
        q = quotient_invariants(n, M)
        expected = residue_count(M)
        if expected is None:
            assert q.free_rank > 0
        else:
            assert q.order() == expected


def test_object_arrays_keep_exact_integers():
    big = 2 ** 70
    assert smith_normal_form([[big, 0], [0, big * 3]]) == (big, big * 3)
    assert isinstance(smith_normal_form(np.array([[6]], dtype=object))[0], int)
