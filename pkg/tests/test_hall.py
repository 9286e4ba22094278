import pytest

from core.errors import InvalidArgumentError, ResourceGuardError
from core.hall import (BasicCommutator, bracket_notation, generate_hall_basis, is_basic,
                       moebius, parse_bracket, witt_count, witt_table)


def test_witt_spot_values():
    assert [witt_count(2, w) for w in range(1, 7)] == [2, 1, 2, 3, 6, 9]
    assert [witt_count(3, w) for w in range(1, 5)] == [3, 3, 8, 18]
    assert [witt_count(1, w) for w in range(1, 5)] == [1, 0, 0, 0]


def test_witt_rejects_zero():
    with pytest.raises(InvalidArgumentError):
        witt_count(0, 3)
    with pytest.raises(InvalidArgumentError):
        witt_count(2, 0)


@pytest.mark.parametrize("m, expected", [(1, 1), (2, -1), (4, 0), (6, 1), (30, -1), (12, 0)])
def test_moebius(m, expected):
    assert moebius(m) == expected


@pytest.mark.parametrize("k", [1, 2, 3])
def test_block_sizes_match_witt(k):
    basis = generate_hall_basis(k, 10)
    assert basis.block_sizes() == [witt_count(k, w) for w in range(1, 11)]


def test_two_letter_weight_three_order():
    basis = generate_hall_basis(2, 3)
    assert [str(b) for b in basis] == ["x1", "x2", "[x2,x1]", "[[x2,x1],x1]", "[[x2,x1],x2]"]
    assert basis.weights == (1, 1, 2, 3, 3)


def test_order_is_deterministic():
    first = [b.key for b in generate_hall_basis(3, 5)]
    second = [b.key for b in generate_hall_basis(3, 5)]
    assert first == second


def test_every_item_is_basic_and_weights_sorted():
    basis = generate_hall_basis(3, 5)
    assert all(is_basic(b, basis) for b in basis)
    assert list(basis.weights) == sorted(basis.weights)
    for index, b in enumerate(basis):
        if not b.is_leaf:
            assert basis.pair_index(basis.left_index[index], basis.right_index[index]) == index
            assert b.weight == b.left.weight + b.right.weight


def test_basis_cap_fails_fast():
    with pytest.raises(ResourceGuardError):
        generate_hall_basis(3, 12, max_items=100)


def test_invalid_arguments():
    with pytest.raises(InvalidArgumentError):
        generate_hall_basis(0, 3)
    with pytest.raises(InvalidArgumentError):
        BasicCommutator.leaf(0)


def test_parse_bracket():
    basis = generate_hall_basis(2, 3)
    parsed = parse_bracket("[[x2,x1],x1]", basis)
    assert basis.index_of(parsed) == 3
    assert bracket_notation(parsed) == "[[x2,x1],x1]"


@pytest.mark.parametrize("text", ["[x1,x2]", "[x2,x1", "[x2;x1]", "[[x2,x1],x1] x1"])
def test_parse_bracket_rejects(text):
    with pytest.raises(InvalidArgumentError):
        parse_bracket(text, generate_hall_basis(2, 3))


def test_block_ranges():
    basis = generate_hall_basis(2, 4)
    assert list(basis.block(1)) == [0, 1]
    assert list(basis.block(2)) == [2]
    assert len(basis.block(4)) == 3
    assert len(basis.block(5)) == 0


def test_witt_table():
    assert witt_table(2, 3) == [{"weight": 1, "count": 2}, {"weight": 2, "count": 1},
                                {"weight": 3, "count": 2}]
