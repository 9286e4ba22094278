"""
Normal-form arithmetic in the free nilpotent group F/gamma_{w+1}(F) by
collection over the Hall basis.

An element is the exponent vector (e_1, ..., e_N) of the normal form
b_1^e_1 ... b_N^e_N, where b_1 < ... < b_N is the Hall basis of weight <= w.
Multiplication collects from the left: to append b_j^e to an element u*v
(u on generators <= j, v on generators > j) we rewrite

    u v b_j^e = (u b_j^e) (v^(b_j^e))

and conjugation of v is done generator by generator through the relation
b_l^(b_j) = b_l [b_l, b_j]. Every commutator created has larger weight than
its factors, so the recursion only ever moves to higher generators.

The same engine, with power relations instead of free exponents, collects
in power-commutator presentations (see core.pcp).
"""

import threading
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from core.errors import (ContextMismatchError, EngineInvariantError,
                         InvalidArgumentError, NotInLayerError)
from core.hall import DEFAULT_MAX_BASIS, HallBasis, generate_hall_basis
from utils.logger import logger

Vector = Tuple[int, ...]


class Collector:
    """
    Collection from the left over a polycyclic generating sequence b_0 .. b_{size-1}.

    Subclasses supply the conjugation images b_l^(b_j^e), the commuting
    test and, for finite presentations, the power reduction.
    Generators with index >= central_start are central and are never
    conjugated.
    """

    # images for exponents other than +-2^k are dropped once this many pile up
    scratch_limit = 1 << 14

    def __init__(self, size: int, central_start: Optional[int] = None):
        self.size = size
        self.central_start = size if central_start is None else central_start
        self._images: Dict[Tuple[int, int, int], Vector] = {}
        self._scratch: Dict[Tuple[int, int, int], Vector] = {}
        self._lock = threading.Lock()

    # -- hooks ---------------------------------------------------------
    def _commutes(self, l: int, j: int) -> bool:
        raise NotImplementedError

    def _compute_image(self, l: int, j: int, e: int) -> Vector:
        raise NotImplementedError

    def _reduce(self, res: List[int], j: int) -> Optional[Vector]:
        """Normalize res[j] in place; return a word to multiply in right after b_j."""
        return None

    # -- helpers -------------------------------------------------------
    def identity_vector(self) -> Vector:
        return (0,) * self.size

    def unit_vector(self, index: int, exponent: int = 1) -> Vector:
        vec = [0] * self.size
        vec[index] = exponent
        return tuple(vec)

    def _image(self, l: int, j: int, e: int) -> Vector:
        """
        Memoized b_l^(b_j^e), written once under the lock. Images for
        e = +-2^k are kept; others live in a scratch memo that is cleared
        when it reaches scratch_limit.
        """
        key = (l, j, e)
        cached = self._images.get(key)
        if cached is None:
            cached = self._scratch.get(key)
        if cached is not None:
            return cached
        image = self._compute_image(l, j, e)
        with self._lock:
            if _is_power_of_two(abs(e)):
                return self._images.setdefault(key, image)
            if len(self._scratch) >= self.scratch_limit:
                self._scratch.clear()
            return self._scratch.setdefault(key, image)

    def memo_sizes(self) -> Tuple[int, int]:
        """(kept images, scratch images)."""
        return len(self._images), len(self._scratch)

    # -- collection ----------------------------------------------------
    def _mul_gen(self, res: List[int], j: int, e: int) -> None:
        """res <- res * b_j^e, in place."""
        if e == 0:
            return
        if j >= self.central_start:
            res[j] += e
            return

        # leftmost out-of-order position is j itself: everything to the right moves past b_j^e
        tail = [(l, res[l]) for l in range(j + 1, self.central_start) if res[l]]
        commuting = all(self._commutes(l, j) for l, _ in tail)
        for l, _ in tail:
            res[l] = 0
        res[j] += e
        overflow = self._reduce(res, j)
        if overflow is not None:
            self._collect_into(res, overflow)
        for l, a in tail:
            image = self.unit_vector(l) if commuting else self._image(l, j, e)
            self._collect_into(res, self.power_vector(image, a))

    def _collect_into(self, res: List[int], y: Sequence[int]) -> None:
        """res <- res * y, in place."""
        for m, e in enumerate(y):
            if e:
                self._mul_gen(res, m, e)

    def multiply_vectors(self, x: Sequence[int], y: Sequence[int]) -> Vector:
        res = list(x)
        self._collect_into(res, y)
        return tuple(res)

    def power_vector(self, x: Sequence[int], n: int) -> Vector:
        """x^n for n >= 0 by repeated squaring."""
        if n < 0:
            raise InvalidArgumentError("negative power needs an inverse; use the group API")
        nonzero = [m for m, e in enumerate(x) if e]
        if n == 0 or not nonzero:
            return self.identity_vector()
        if n == 1:
            return tuple(x)
        result = self.identity_vector()
        base = tuple(x)
        while n:
            if n & 1:
                result = self.multiply_vectors(result, base)
            n >>= 1
            if n:
                base = self.multiply_vectors(base, base)
        return result


class NilGroupCtx(Collector):
    """
    Free nilpotent group of rank k and class w with its Hall basis.

    The structure table [b_j, b_i] (j > i) is filled lazily and memoized.
    Entries are write-once, so concurrent lookups are safe.

    Attributes:
        letters (int): Rank k
        nil_class (int): Class w
        basis (HallBasis): Hall basis of weight <= w
    """

    def __init__(self, letters: int, nil_class: int, basis: HallBasis):
        self.letters = letters
        self.nil_class = nil_class
        self.basis = basis
        self.weights = basis.weights
        # top-weight generators are central
        super().__init__(len(basis), basis.block(nil_class).start)
        self._table: Dict[Tuple[int, int], Vector] = {}

    def __repr__(self) -> str:
        return f"NilGroupCtx(letters={self.letters}, nil_class={self.nil_class}, size={self.size})"

    # -- structure table -----------------------------------------------
    def _commutes(self, l: int, j: int) -> bool:
        return self.weights[l] + self.weights[j] > self.nil_class

    def structure_entry(self, j: int, i: int) -> Vector:
        """
        Normal form of [b_j, b_i] for j > i.

        A bracket satisfying the Hall condition is itself a basis item.
        Otherwise b_j = [p, q] with q > b_i and

            b_j^(b_i) = [p^(b_i), q^(b_i)] = [p [p, b_i], q [q, b_i]]

        whose right-hand side only needs table entries with a larger second
        index, so the recursion terminates.
        """
        if j <= i:
            raise InvalidArgumentError(f"structure entry needs j > i, got ({j}, {i})")
        key = (j, i)
        cached = self._table.get(key)
        if cached is not None:
            return cached

        if self._commutes(j, i):
            entry = self.identity_vector()
        else:
            pos = self.basis.pair_index(j, i)
            if pos is not None:
                entry = self.unit_vector(pos)
            else:
                p, q = self.basis.left_index[j], self.basis.right_index[j]
                p_conj = _add(self.unit_vector(p), self.structure_entry(p, i))
                q_conj = _add(self.unit_vector(q), self.structure_entry(q, i))
                conjugated = self._commutator_vectors(p_conj, q_conj)
                entry = self.multiply_vectors(self.unit_vector(j, -1), conjugated)
                floor = self.weights[j] + self.weights[i]
                if any(entry[m] for m in range(self.size) if self.weights[m] < floor):
                    raise EngineInvariantError(
                        f"[b{j}, b{i}] collected below weight {floor}: {entry}")

        with self._lock:
            return self._table.setdefault(key, entry)

    def _compute_image(self, l: int, j: int, e: int) -> Vector:
        """b_l^(b_j^e) for l > j and any nonzero e."""
        if self._commutes(l, j):
            return self.unit_vector(l)
        if e == 1:
            # b_l^(b_j) = b_l [b_l, b_j]; the entry lives on generators > l
            return _add(self.unit_vector(l), self.structure_entry(l, j))
        if e == -1:
            # psi(b_l) = b_l * psi([b_l, b_j])^-1 where psi is conjugation by b_j^-1
            entry = self.structure_entry(l, j)
            return self.multiply_vectors(
                self.unit_vector(l), self.inverse_vector(self._apply(j, -1, entry)))
        half = e // 2 if e > 0 else -((-e) // 2)
        return self._apply(j, e - half, self._image(l, j, half))

    def _apply(self, j: int, e: int, x: Sequence[int]) -> Vector:
        """Conjugate an element supported on generators > j by b_j^e."""
        res = list(self.identity_vector())
        for m, a in enumerate(x):
            if not a:
                continue
            if m <= j:
                raise EngineInvariantError(f"conjugation by b{j} applied to generator b{m}")
            self._collect_into(res, self.power_vector(self._image(m, j, e), a))
        return tuple(res)

    # -- group arithmetic on vectors -------------------------------------
    def power_vector(self, x: Sequence[int], n: int) -> Vector:
        nonzero = [m for m, e in enumerate(x) if e]
        if len(nonzero) == 1:
            m = nonzero[0]
            return self.unit_vector(m, x[m] * n)
        if n < 0:
            return super().power_vector(self.inverse_vector(x), -n)
        return super().power_vector(x, n)

    def inverse_vector(self, x: Sequence[int]) -> Vector:
        """x^-1 = b_N^-e_N ... b_1^-e_1, collected."""
        res = [0] * self.size
        for m in range(self.central_start, self.size):
            res[m] = -x[m]
        for m in range(self.central_start - 1, -1, -1):
            if x[m]:
                self._mul_gen(res, m, -x[m])
        return tuple(res)

    def _commutator_vectors(self, x: Sequence[int], y: Sequence[int]) -> Vector:
        """x^-1 y^-1 x y."""
        left = self.multiply_vectors(self.inverse_vector(x), self.inverse_vector(y))
        return self.multiply_vectors(left, self.multiply_vectors(x, y))

    # -- element constructors ------------------------------------------
    def identity(self) -> "NilElement":
        return NilElement(self, self.identity_vector())

    def generator(self, letter: int) -> "NilElement":
        """The free generator x_letter (1-based)."""
        if not 1 <= letter <= self.letters:
            raise InvalidArgumentError(f"letter x{letter} outside 1..{self.letters}")
        return NilElement(self, self.unit_vector(letter - 1))

    def basis_element(self, index: int) -> "NilElement":
        return NilElement(self, self.unit_vector(index))

    def element(self, exponents: Sequence[int]) -> "NilElement":
        if len(exponents) != self.size:
            raise InvalidArgumentError(
                f"expected {self.size} exponents, got {len(exponents)}")
        return NilElement(self, tuple(int(e) for e in exponents))

    def evaluate_basis_element(self, index: int) -> "NilElement":
        """Evaluate the basic commutator at `index` as an iterated group commutator."""
        b = self.basis[index]
        if b.is_leaf:
            return self.generator(b.letter)
        left = self.evaluate_basis_element(self.basis.left_index[index])
        right = self.evaluate_basis_element(self.basis.right_index[index])
        return commutator(left, right)


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def _add(x: Sequence[int], y: Sequence[int]) -> Vector:
    return tuple(a + b for a, b in zip(x, y))


@dataclass(frozen=True)
class NilElement:
    """
    Normal-form element of a free nilpotent group.

    Two elements are equal iff they share the context and the exponent vector.
    """
    ctx: NilGroupCtx = field(repr=False)
    exponents: Vector

    def __mul__(self, other: "NilElement") -> "NilElement":
        return multiply(self, other)

    def __pow__(self, n: int) -> "NilElement":
        return power(self, n)

    def __invert__(self) -> "NilElement":
        return inverse(self)

    def is_identity(self) -> bool:
        return not any(self.exponents)

    def weight_of(self) -> Optional[int]:
        """Smallest weight carrying a nonzero exponent (None for the identity)."""
        return weight_of(self)


@lru_cache(maxsize=32)
def make_context(k: int, w: int, max_basis: int = DEFAULT_MAX_BASIS) -> NilGroupCtx:
    """
    Build (or reuse) the context of the free nilpotent group of rank k and class w.

    Args:
        k (int): Rank, >= 1
        w (int): Class, >= 1
        max_basis (int): Cap on the Hall basis size

    Returns:
        NilGroupCtx: Context with a lazily filled structure table
    """
    basis = generate_hall_basis(k, w, max_basis)
    logger.debug(f"Free nilpotent context k={k}, w={w} with {len(basis)} basis items")
    return NilGroupCtx(k, w, basis)


def _same_ctx(*elements: NilElement) -> NilGroupCtx:
    ctx = elements[0].ctx
    for el in elements[1:]:
        if el.ctx is not ctx:
            raise ContextMismatchError(f"elements belong to {ctx!r} and {el.ctx!r}")
    return ctx


def multiply(a: NilElement, b: NilElement) -> NilElement:
    """Normal form of a*b."""
    ctx = _same_ctx(a, b)
    return NilElement(ctx, ctx.multiply_vectors(a.exponents, b.exponents))


def inverse(a: NilElement) -> NilElement:
    return NilElement(a.ctx, a.ctx.inverse_vector(a.exponents))


def power(a: NilElement, n: int) -> NilElement:
    """a^n for any integer n; a^0 is the identity."""
    return NilElement(a.ctx, a.ctx.power_vector(a.exponents, n))


def conjugate(a: NilElement, b: NilElement) -> NilElement:
    """a^b = b^-1 a b."""
    ctx = _same_ctx(a, b)
    return NilElement(ctx, ctx.multiply_vectors(
        ctx.multiply_vectors(ctx.inverse_vector(b.exponents), a.exponents), b.exponents))


def commutator(a: NilElement, b: NilElement) -> NilElement:
    """[a, b] = a^-1 b^-1 a b."""
    ctx = _same_ctx(a, b)
    return NilElement(ctx, ctx._commutator_vectors(a.exponents, b.exponents))


def left_normed(parts: Sequence[NilElement]) -> NilElement:
    """[[...[p1, p2], p3], ..., pm] for m >= 2."""
    if len(parts) < 2:
        raise InvalidArgumentError(f"left-normed commutator needs at least 2 parts, got {len(parts)}")
    _same_ctx(*parts)
    result = parts[0]
    for part in parts[1:]:
        result = commutator(result, part)
    return result


def weight_of(a: NilElement) -> Optional[int]:
    weights = a.ctx.weights
    present = [weights[m] for m, e in enumerate(a.exponents) if e]
    return min(present) if present else None


def layer_coords(a: NilElement, m: int) -> Tuple[int, ...]:
    """
    Weight-m exponent block of an element of gamma_m.

    Raises:
        NotInLayerError: If an exponent of weight < m is nonzero
    """
    ctx = a.ctx
    if m < 1 or m > ctx.nil_class:
        raise InvalidArgumentError(f"weight {m} outside 1..{ctx.nil_class}")
    block = ctx.basis.block(m)
    below = [idx for idx in range(block.start) if a.exponents[idx]]
    if below:
        raise NotInLayerError(
            f"element has nonzero exponents below weight {m} at basis positions {below}")
    return tuple(a.exponents[idx] for idx in block)
