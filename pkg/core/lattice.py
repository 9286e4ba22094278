"""
Integer matrix normal forms and abelian quotient invariants.

Matrices are held as numpy object arrays so that every entry stays an exact
Python integer.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from core.errors import InvalidArgumentError


@dataclass(frozen=True)
class IntMatrix:
    """
    Dense integer matrix, row-major.

    Attributes:
        rows (int): Row count, >= 1
        cols (int): Column count, >= 1
        entries (Tuple[Tuple[int, ...], ...]): Exact entries
    """
    rows: int
    cols: int
    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise InvalidArgumentError(f"matrix dimensions must be positive, got {self.rows}x{self.cols}")
        if len(self.entries) != self.rows or any(len(row) != self.cols for row in self.entries):
            raise InvalidArgumentError("entries do not match the declared dimensions")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        entries = tuple(tuple(int(x) for x in row) for row in rows)
        if not entries:
            raise InvalidArgumentError("matrix needs at least one row")
        return cls(len(entries), len(entries[0]), entries)

    def to_array(self) -> np.ndarray:
        arr = np.empty((self.rows, self.cols), dtype=object)
        for i, row in enumerate(self.entries):
            for j, x in enumerate(row):
                arr[i, j] = int(x)
        return arr


@dataclass(frozen=True)
class AbelianType:
    """
    Finitely generated abelian group Z_{d_1} + ... + Z_{d_t} + Z^f.

    Attributes:
        invariants (Tuple[int, ...]): Invariant factors, each >= 2 and dividing the next
        free_rank (int): Rank f of the free part
    """
    invariants: Tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        if self.free_rank < 0:
            raise InvalidArgumentError(f"free rank must be >= 0, got {self.free_rank}")
        for d in self.invariants:
            if d < 2:
                raise InvalidArgumentError(f"invariant factors must be >= 2, got {self.invariants}")
        for a, b in zip(self.invariants, self.invariants[1:]):
            if b % a:
                raise InvalidArgumentError(f"invariant factors must form a divisibility chain: {self.invariants}")

    @classmethod
    def from_diagonal(cls, diagonal: Sequence[int], ambient_rank: Optional[int] = None) -> "AbelianType":
        """
        Canonical type of Z^n / diag(d_1, ..., d_t) where d_i is a divisibility chain.

        Args:
            diagonal (Sequence[int]): Smith diagonal (zeros allowed)
            ambient_rank (int, optional): n; defaults to len(diagonal)
        """
        n = len(diagonal) if ambient_rank is None else ambient_rank
        nonzero = [abs(int(d)) for d in diagonal if d != 0]
        factors = tuple(d for d in nonzero if d != 1)
        return cls(factors, n - len(nonzero))

    @property
    def is_trivial(self) -> bool:
        return not self.invariants and self.free_rank == 0

    def order(self) -> Optional[int]:
        """Group order, or None when the free rank is positive."""
        return abelian_order(self)

    def to_list(self) -> list:
        return list(self.invariants)

    def __str__(self) -> str:
        parts = [f"Z_{d}" for d in self.invariants]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "1"


def abelian_order(group: AbelianType) -> Optional[int]:
    if group.free_rank:
        return None
    order = 1
    for d in group.invariants:
        order *= d
    return order


def _as_array(M: Union[IntMatrix, Sequence[Sequence[int]]]) -> np.ndarray:
    if isinstance(M, IntMatrix):
        return M.to_array()
    return IntMatrix.from_rows(M).to_array()


def smith_normal_form(M: Union[IntMatrix, Sequence[Sequence[int]]]) -> Tuple[int, ...]:
    """
    Smith diagonal of an integer matrix.

    Pivot is the smallest nonzero absolute value of the active block (first
    in row-major order); its row and column are cleared by integer division,
    and a row is folded into the pivot row whenever the pivot fails to divide
    the remaining block.

    Args:
        M (IntMatrix): Nonempty matrix

    Returns:
        Tuple[int, ...]: d_1 | d_2 | ... of length min(rows, cols), nonnegative
    """
    A = _as_array(M)
    rows, cols = A.shape
    size = min(rows, cols)
    diagonal = []

    for t in range(size):
        while True:
            block = A[t:, t:]
            nonzero = np.argwhere(block != 0)
            if nonzero.size == 0:
                break
            magnitudes = [abs(block[i, j]) for i, j in nonzero]
            i, j = nonzero[int(np.argmin(magnitudes))] + t
            if i != t:
                A[[t, i], :] = A[[i, t], :]
            if j != t:
                A[:, [t, j]] = A[:, [j, t]]
            pivot = A[t, t]

            cleared = True
            for i in range(t + 1, rows):
                if A[i, t]:
                    A[i, t:] = A[i, t:] - (A[i, t] // pivot) * A[t, t:]
                    cleared = cleared and A[i, t] == 0
            for j in range(t + 1, cols):
                if A[t, j]:
                    A[t:, j] = A[t:, j] - (A[t, j] // pivot) * A[t:, t]
                    cleared = cleared and A[t, j] == 0
            if not cleared:
                continue

            rest = A[t + 1:, t + 1:]
            offending = np.argwhere(rest % pivot != 0) if rest.size else np.empty((0, 2))
            if len(offending):
                A[t, :] = A[t, :] + A[int(offending[0][0]) + t + 1, :]
                continue
            break
        if not np.any(A[t:, t:] != 0):
            diagonal.extend([0] * (size - t))
            break
        diagonal.append(abs(int(A[t, t])))

    return tuple(diagonal)


def hermite_normal_form(M: Union[IntMatrix, Sequence[Sequence[int]]]) -> Tuple[Tuple[int, ...], ...]:
    """
    Row-style Hermite normal form: upper echelon, positive pivots, entries
    above each pivot reduced into [0, pivot). Zero rows are dropped.
    """
    A = _as_array(M)
    rows, cols = A.shape
    r = 0
    for col in range(cols):
        if r == rows:
            break
        while True:
            candidates = [i for i in range(r, rows) if A[i, col] != 0]
            if not candidates:
                break
            i = min(candidates, key=lambda k: abs(A[k, col]))
            if i != r:
                A[[r, i], :] = A[[i, r], :]
            done = True
            for k in range(r + 1, rows):
                if A[k, col]:
                    A[k, :] = A[k, :] - (A[k, col] // A[r, col]) * A[r, :]
                    done = done and A[k, col] == 0
            if done:
                break
        if A[r, col] == 0:
            continue
        if A[r, col] < 0:
            A[r, :] = -A[r, :]
        for k in range(r):
            A[k, :] = A[k, :] - (A[k, col] // A[r, col]) * A[r, :]
        r += 1
    return tuple(tuple(int(x) for x in A[i]) for i in range(r))


def quotient_invariants(n: int, rows: Union[IntMatrix, Sequence[Sequence[int]]]) -> AbelianType:
    """
    Invariants of Z^n modulo the lattice spanned by `rows`.

    Args:
        n (int): Ambient rank
        rows: Relation rows with n columns (may be empty)

    Returns:
        AbelianType: Invariant factors and free rank of the quotient
    """
    if n < 0:
        raise InvalidArgumentError(f"ambient rank must be >= 0, got {n}")
    if isinstance(rows, IntMatrix):
        matrix_rows = [list(r) for r in rows.entries]
    else:
        matrix_rows = [list(r) for r in rows]
    for row in matrix_rows:
        if len(row) != n:
            raise InvalidArgumentError(f"relation row has {len(row)} columns, expected {n}")
    if n == 0:
        return AbelianType()
    if not matrix_rows:
        return AbelianType((), n)
    diagonal = smith_normal_form(matrix_rows)
    return AbelianType.from_diagonal(diagonal, n)


def invariants_of_cyclic_sum(orders: Sequence[int]) -> AbelianType:
    """Invariant factors of Z_{o_1} + ... + Z_{o_t}, e.g. (4, 6) -> (2, 12)."""
    n = len(orders)
    rows = [[orders[i] if i == j else 0 for j in range(n)] for i in range(n)]
    return quotient_invariants(n, rows)
