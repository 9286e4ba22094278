"""
Hall basis of basic commutators and the Witt count.

Basic commutators are generated weight by weight. Within a weight the order
is lexicographic on a prefix serialization of the tree, so the whole order
extends the weight order and is identical across runs.
"""

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Tuple

from sympy import divisors, factorint

from core.errors import InvalidArgumentError, ResourceGuardError
from utils.logger import logger

DEFAULT_MAX_BASIS = 10000


@dataclass(frozen=True)
class BasicCommutator:
    """
    A leaf x_i or a bracket [left, right] of two basic commutators.

    Leaves carry a 1-based letter index and no children; brackets carry
    letter 0. Instances are immutable and hashable.
    """
    letter: int = 0
    left: Optional["BasicCommutator"] = None
    right: Optional["BasicCommutator"] = None
    weight: int = field(default=1, compare=False)

    @classmethod
    def leaf(cls, letter: int) -> "BasicCommutator":
        if letter < 1:
            raise InvalidArgumentError(f"letter index must be >= 1, got {letter}")
        return cls(letter=letter)

    @classmethod
    def bracket(cls, left: "BasicCommutator", right: "BasicCommutator") -> "BasicCommutator":
        return cls(left=left, right=right, weight=left.weight + right.weight)

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    @cached_property
    def key(self) -> Tuple[int, ...]:
        """Prefix serialization: leaf -> (i,), bracket -> (0,) + key(left) + key(right)."""
        if self.is_leaf:
            return (self.letter,)
        return (0,) + self.left.key + self.right.key

    def letters(self) -> List[int]:
        """Leaf letters from left to right."""
        if self.is_leaf:
            return [self.letter]
        return self.left.letters() + self.right.letters()

    def __str__(self) -> str:
        return bracket_notation(self)


def bracket_notation(b: BasicCommutator) -> str:
    """Render a commutator as `[[x2,x1],x1]`."""
    if b.is_leaf:
        return f"x{b.letter}"
    return f"[{bracket_notation(b.left)},{bracket_notation(b.right)}]"


class HallBasis:
    """
    Ordered Hall basis on `letters` letters up to weight `max_weight`.

    Attributes:
        letters (int): Number of free generators k
        max_weight (int): Weight bound w
        items (Tuple[BasicCommutator, ...]): Basis in the fixed total order
        weights (Tuple[int, ...]): Weight of each item
    """

    def __init__(self, letters: int, max_weight: int, items: List[BasicCommutator]):
        self.letters = letters
        self.max_weight = max_weight
        self.items: Tuple[BasicCommutator, ...] = tuple(items)
        self.weights: Tuple[int, ...] = tuple(b.weight for b in self.items)
        self._position: Dict[BasicCommutator, int] = {b: i for i, b in enumerate(self.items)}

        # block boundaries: items of weight m occupy [start[m], start[m+1])
        self._start: Dict[int, int] = {}
        for m in range(1, max_weight + 2):
            self._start[m] = next((i for i, wt in enumerate(self.weights) if wt >= m), len(self.items))

        # child positions for brackets, -1 for leaves
        self.left_index: Tuple[int, ...] = tuple(
            -1 if b.is_leaf else self._position[b.left] for b in self.items)
        self.right_index: Tuple[int, ...] = tuple(
            -1 if b.is_leaf else self._position[b.right] for b in self.items)
        self._pair: Dict[Tuple[int, int], int] = {
            (self.left_index[i], self.right_index[i]): i
            for i, b in enumerate(self.items) if not b.is_leaf
        }

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, index: int) -> BasicCommutator:
        return self.items[index]

    def index_of(self, b: BasicCommutator) -> int:
        """
        Position of a basic commutator in the basis.

        Raises:
            KeyError: If b is not in this basis
        """
        return self._position[b]

    def pair_index(self, u: int, v: int) -> Optional[int]:
        """Position of the bracket [items[u], items[v]] if it is a basis item."""
        return self._pair.get((u, v))

    def block(self, m: int) -> range:
        """Index range of the weight-m items."""
        if m < 1 or m > self.max_weight:
            return range(0)
        return range(self._start[m], self._start[m + 1])

    def block_sizes(self) -> List[int]:
        return [len(self.block(m)) for m in range(1, self.max_weight + 1)]

    def is_basic(self, b: BasicCommutator) -> bool:
        """Structural Hall-condition check against this basis' order."""
        return is_basic(b, self)


def is_basic(b: BasicCommutator, basis: HallBasis) -> bool:
    """
    Check recursively that b satisfies the Hall condition in basis' order.

    [u, v] is basic iff u and v are basic, u > v, and if u = [p, q] then q <= v.
    """
    if b.is_leaf:
        return 1 <= b.letter <= basis.letters
    if not (is_basic(b.left, basis) and is_basic(b.right, basis)):
        return False
    try:
        u = basis.index_of(b.left)
        v = basis.index_of(b.right)
    except KeyError:
        return False
    if u <= v:
        return False
    if not b.left.is_leaf and basis.index_of(b.left.right) > v:
        return False
    return True


def moebius(m: int) -> int:
    """
    Moebius function.

    Args:
        m (int): Positive integer

    Returns:
        int: 0 if m has a square factor, otherwise (-1)^(number of prime factors)
    """
    if m < 1:
        raise InvalidArgumentError(f"moebius is defined for m >= 1, got {m}")
    factors = factorint(m)
    if any(e > 1 for e in factors.values()):
        return 0
    return -1 if len(factors) % 2 else 1


def witt_count(k: int, w: int) -> int:
    """
    Number of basic commutators of weight w on k letters.

    Computed as (1/w) * sum over m | w of moebius(m) * k^(w/m).

    Args:
        k (int): Letter count, >= 1
        w (int): Weight, >= 1

    Returns:
        int: Rank of the weight-w lower central quotient of the free group of rank k
    """
    if k < 1 or w < 1:
        raise InvalidArgumentError(f"witt_count needs k >= 1 and w >= 1, got k={k}, w={w}")
    total = sum(moebius(m) * k ** (w // m) for m in divisors(w))
    return total // w


def witt_table(k: int, w: int) -> List[Dict[str, int]]:
    """Rows {"weight": m, "count": witt_count(k, m)} for m = 1..w."""
    return [{"weight": m, "count": witt_count(k, m)} for m in range(1, w + 1)]


def generate_hall_basis(k: int, w: int, max_items: int = DEFAULT_MAX_BASIS) -> HallBasis:
    """
    Generate every basic commutator of weight <= w on k letters.

    Args:
        k (int): Letter count, >= 1
        w (int): Weight bound, >= 1
        max_items (int): Cap on the total basis size

    Returns:
        HallBasis: The ordered basis

    Raises:
        InvalidArgumentError: If k or w is below 1
        ResourceGuardError: If the basis would exceed max_items
    """
    if k < 1 or w < 1:
        raise InvalidArgumentError(f"Hall basis needs k >= 1 and w >= 1, got k={k}, w={w}")

    # fail fast before enumerating anything too large
    expected = sum(witt_count(k, m) for m in range(1, w + 1))
    if expected > max_items:
        raise ResourceGuardError(
            f"Hall basis for k={k}, w={w} has {expected} items, cap is {max_items}")

    blocks: Dict[int, List[BasicCommutator]] = {1: [BasicCommutator.leaf(i) for i in range(1, k + 1)]}
    rank: Dict[BasicCommutator, int] = {b: i for i, b in enumerate(blocks[1])}
    next_rank = len(blocks[1])

    for m in range(2, w + 1):
        candidates: List[BasicCommutator] = []
        # u > v forces weight(u) >= weight(v)
        for a in range((m + 1) // 2, m):
            for u in blocks[a]:
                for v in blocks[m - a]:
                    if rank[u] <= rank[v]:
                        continue
                    if not u.is_leaf and rank[u.right] > rank[v]:
                        continue
                    candidates.append(BasicCommutator.bracket(u, v))
        candidates.sort(key=lambda b: b.key)
        for b in candidates:
            rank[b] = next_rank
            next_rank += 1
        blocks[m] = candidates

    items = [b for m in range(1, w + 1) for b in blocks[m]]
    logger.debug(f"Hall basis k={k}, w={w}: {len(items)} items")
    return HallBasis(k, w, items)


_TOKEN = re.compile(r"\s*(\[|\]|,|x\d+)")


def parse_bracket(text: str, basis: HallBasis) -> BasicCommutator:
    """
    Parse `[[x2,x1],x1]` into a basic commutator of the given basis.

    Raises:
        InvalidArgumentError: On malformed text or a bracket that is not basic
    """
    tokens: List[str] = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match:
            raise InvalidArgumentError(f"unexpected character at {pos} in {text!r}")
        tokens.append(match.group(1))
        pos = match.end()

    def parse(i: int) -> Tuple[BasicCommutator, int]:
        if i >= len(tokens):
            raise InvalidArgumentError(f"truncated bracket {text!r}")
        tok = tokens[i]
        if tok.startswith("x"):
            return BasicCommutator.leaf(int(tok[1:])), i + 1
        if tok != "[":
            raise InvalidArgumentError(f"unexpected token {tok!r} in {text!r}")
        left, i = parse(i + 1)
        if i >= len(tokens) or tokens[i] != ",":
            raise InvalidArgumentError(f"expected ',' in {text!r}")
        right, i = parse(i + 1)
        if i >= len(tokens) or tokens[i] != "]":
            raise InvalidArgumentError(f"expected ']' in {text!r}")
        return BasicCommutator.bracket(left, right), i + 1

    result, end = parse(0)
    if end != len(tokens):
        raise InvalidArgumentError(f"trailing tokens in {text!r}")
    if not is_basic(result, basis):
        raise InvalidArgumentError(f"{text} is not a basic commutator of this basis")
    return result
