"""
Finite groups as Cayley tables: central series, quotients, subgroups and the
N_c stem-cover predicate.

Elements are indices 0..N-1 into an N x N numpy multiplication table. Tables
built here are verified once at construction and never written again, so a
group and its subgroups can be shared freely between threads.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy import factorint

from core.baer import BaerInput, baer_formula
from core.errors import (InconsistentPresentationError, InvalidArgumentError,
                         ResourceGuardError, SubgroupError)
from core.lattice import AbelianType, invariants_of_cyclic_sum, quotient_invariants
from core.pcp import Pcp, PcpCollector, pcp_consistency_check
from utils.logger import logger

DEFAULT_MAX_ORDER = 1024
DEFAULT_EXHAUSTIVE_LIMIT = 64


class FiniteGroup:
    """
    Group given by its multiplication table.

    Attributes:
        order (int): N
        table (np.ndarray): Read-only N x N int64 table, table[x, y] = x*y
        identity (int): Index of the identity
        inv (np.ndarray): inv[x] = x^-1
        labels (List[str]): Display label per element
    """

    def __init__(self, table, labels: Optional[Sequence[str]] = None, verify: bool = True,
                 exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT):
        """
        Args:
            table: Square array-like of element indices
            labels (Sequence[str], optional): Element labels; defaults to "e0", "e1", ...
            verify (bool): Check the group axioms
            exhaustive_limit (int): Largest order checked on all triples; Light's test above it

        Raises:
            InvalidArgumentError: If the table is not a group table
        """
        T = np.array(table, dtype=np.int64)
        if T.ndim != 2 or T.shape[0] != T.shape[1] or T.shape[0] < 1:
            raise InvalidArgumentError(f"multiplication table must be square and nonempty, got shape {T.shape}")
        N = T.shape[0]
        if T.min() < 0 or T.max() >= N:
            raise InvalidArgumentError("table entries must be element indices")
        ar = np.arange(N)

        if verify:
            if not ((np.sort(T, axis=0) == ar[:, None]).all() and (np.sort(T, axis=1) == ar[None, :]).all()):
                raise InvalidArgumentError("table is not a Latin square")

        identities = [e for e in range(N) if (T[e] == ar).all() and (T[:, e] == ar).all()]
        if not identities:
            raise InvalidArgumentError("table has no two-sided identity")
        self.identity = identities[0]

        inv = np.argmax(T == self.identity, axis=1)
        if not ((T[ar, inv] == self.identity).all() and (T[inv, ar] == self.identity).all()):
            raise InvalidArgumentError("table lacks two-sided inverses")

        self.order = N
        self.table = T
        self.inv = inv
        self.labels = list(labels) if labels is not None else [f"e{i}" for i in range(N)]
        if len(self.labels) != N:
            raise InvalidArgumentError(f"expected {N} labels, got {len(self.labels)}")

        if verify and not self._is_associative(exhaustive_limit):
            raise InvalidArgumentError("table is not associative")
        self.table.setflags(write=False)
        self.inv.setflags(write=False)

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order})"

    def _is_associative(self, exhaustive_limit: int) -> bool:
        T = self.table
        if self.order <= exhaustive_limit:
            ar = np.arange(self.order)
            # (xy)z against x(yz) on every triple
            return bool((T[T] == T[ar[:, None, None], T[None, :, :]]).all())
        # Light's test: middle factor ranging over a generating set suffices
        for g in self.generators():
            if not (T[T[:, g], :] == T[:, T[g, :]]).all():
                return False
        return True

    # -- elementwise helpers ---------------------------------------------
    def mul(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    def power(self, x: int, n: int) -> int:
        if n < 0:
            x, n = int(self.inv[x]), -n
        result = self.identity
        for _ in range(n):
            result = int(self.table[result, x])
        return result

    @cached_property
    def commutator_table(self) -> np.ndarray:
        """C[x, y] = x^-1 y^-1 x y."""
        T, inv = self.table, self.inv
        C = T[T[np.ix_(inv, inv)], T]
        C.setflags(write=False)
        return C

    def closure_mask(self, gens: Iterable[int]) -> np.ndarray:
        """Boolean membership mask of the subgroup generated by gens."""
        gens = np.unique(np.array(list(gens), dtype=np.int64))
        mask = np.zeros(self.order, dtype=bool)
        mask[self.identity] = True
        if gens.size == 0:
            return mask
        frontier = np.array([self.identity])
        # right multiplication by generators reaches every element of a finite group
        while frontier.size:
            products = np.unique(self.table[np.ix_(frontier, gens)].ravel())
            frontier = products[~mask[products]]
            mask[frontier] = True
        return mask

    def generators(self) -> List[int]:
        """Greedy generating set: repeatedly add the smallest element not yet generated."""
        gens: List[int] = []
        mask = self.closure_mask([])
        while not mask.all():
            g = int(np.argmin(mask))
            gens.append(g)
            mask = self.closure_mask(gens)
        return gens

    # -- subgroups ---------------------------------------------------------
    def subgroup_from_mask(self, mask: np.ndarray) -> "Subgroup":
        return Subgroup(self, tuple(int(x) for x in np.flatnonzero(mask)))

    def closure(self, gens: Iterable[int]) -> "Subgroup":
        return self.subgroup_from_mask(self.closure_mask(gens))

    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.order)))

    def trivial(self) -> "Subgroup":
        return Subgroup(self, (self.identity,))

    def is_abelian(self) -> bool:
        return bool((self.table == self.table.T).all())


@dataclass(frozen=True)
class Subgroup:
    """
    Subgroup of a FiniteGroup as a sorted tuple of element indices.

    Closure is guaranteed by construction through FiniteGroup.closure.
    """
    parent: FiniteGroup = field(repr=False)
    elements: Tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def mask(self) -> np.ndarray:
        mask = np.zeros(self.parent.order, dtype=bool)
        mask[list(self.elements)] = True
        return mask

    def contains(self, x: int) -> bool:
        return bool(self.mask[x])

    def issubset(self, other: "Subgroup") -> bool:
        _same_parent(self, other)
        return bool(other.mask[list(self.elements)].all())

    def intersection(self, other: "Subgroup") -> "Subgroup":
        _same_parent(self, other)
        return self.parent.subgroup_from_mask(self.mask & other.mask)

    def is_trivial(self) -> bool:
        return self.order == 1

    def as_group(self) -> FiniteGroup:
        """The subgroup as a FiniteGroup on indices 0..|H|-1 (parent labels kept)."""
        elems = np.array(self.elements)
        position = np.full(self.parent.order, -1, dtype=np.int64)
        position[elems] = np.arange(len(elems))
        sub_table = position[self.parent.table[np.ix_(elems, elems)]]
        if (sub_table < 0).any():
            raise SubgroupError("element set is not closed under multiplication")
        labels = [self.parent.labels[x] for x in self.elements]
        return FiniteGroup(sub_table, labels, verify=False)


def _same_parent(a: Subgroup, b: Subgroup) -> None:
    if a.parent is not b.parent:
        raise SubgroupError("subgroups belong to different groups")


# -- construction ----------------------------------------------------------

def _pcp_label(vec: Sequence[int]) -> str:
    factors = [f"g{l + 1}" if e == 1 else f"g{l + 1}^{e}" for l, e in enumerate(vec) if e]
    return " ".join(factors) if factors else "1"


def materialize(pcp: Pcp, max_order: int = DEFAULT_MAX_ORDER,
                exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
                check_consistency: bool = True) -> FiniteGroup:
    """
    Multiplication table of the group defined by a consistent presentation.

    Element index = normal form read as a base-p number with g1 most
    significant, so the identity is 0. Column y is filled from the column of
    its prefix: if y = y' g_t with g_t the last letter of the normal form, then
    x*y = (x*y') g_t.

    Raises:
        ResourceGuardError: If p^m exceeds max_order
        InconsistentPresentationError: If the presentation is inconsistent or the table fails the axioms
    """
    N = pcp.order
    if N > max_order:
        raise ResourceGuardError(f"presentation order {N} exceeds the table guard {max_order}")
    if check_consistency and not pcp_consistency_check(pcp):
        raise InconsistentPresentationError("presentation fails the consistency check")

    col = PcpCollector(pcp)
    vectors = [col.index_vector(x) for x in range(N)]
    right = np.empty((pcp.m, N), dtype=np.int64)
    for t in range(pcp.m):
        unit = col.unit_vector(t)
        for x in range(N):
            right[t, x] = col.element_index(col.multiply_vectors(vectors[x], unit))

    table = np.empty((N, N), dtype=np.int64)
    table[:, 0] = np.arange(N)
    for y in range(1, N):
        vec = vectors[y]
        t = max(l for l, e in enumerate(vec) if e)
        prefix = list(vec)
        prefix[t] -= 1
        table[:, y] = right[t][table[:, col.element_index(prefix)]]

    try:
        return FiniteGroup(table, [_pcp_label(v) for v in vectors], verify=True,
                           exhaustive_limit=exhaustive_limit)
    except InvalidArgumentError as e:
        raise InconsistentPresentationError(f"materialized table is not a group: {e}") from e


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise InvalidArgumentError(f"cyclic group order must be >= 1, got {n}")
    ar = np.arange(n)
    return FiniteGroup((ar[:, None] + ar[None, :]) % n, [str(i) for i in range(n)], verify=False)


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """G x H with (g, h) at index g*|H| + h."""
    nG, nH = G.order, H.order
    table = (G.table[:, None, :, None] * nH + H.table[None, :, None, :]).reshape(nG * nH, nG * nH)
    labels = [f"({a},{b})" for a in G.labels for b in H.labels]
    return FiniteGroup(table, labels, verify=False)


# -- series ------------------------------------------------------------------

def lower_central(G: FiniteGroup) -> List[Subgroup]:
    """gamma_1 = G, gamma_{i+1} = <[x, y] : x in gamma_i, y in G>, until it stabilizes."""
    C = G.commutator_table
    series = [G.whole()]
    while True:
        current = series[-1]
        values = C[list(current.elements), :].ravel()
        nxt = G.closure(values)
        if nxt.elements == current.elements:
            return series
        series.append(nxt)


def upper_central(G: FiniteGroup) -> List[Subgroup]:
    """Z_0 = 1, Z_{i+1} = {x : [x, g] in Z_i for all g}, until it stabilizes."""
    C = G.commutator_table
    series = [G.trivial()]
    while True:
        current = series[-1]
        mask = current.mask[C].all(axis=1)
        nxt = G.subgroup_from_mask(mask)
        if nxt.elements == current.elements:
            return series
        series.append(nxt)


def series_term(series: List[Subgroup], i: int) -> Subgroup:
    """Term i of a stabilizing series (0-based list), repeating the last term."""
    return series[min(i, len(series) - 1)]


def center(G: FiniteGroup) -> Subgroup:
    return G.subgroup_from_mask((G.commutator_table == G.identity).all(axis=1))


def nilpotency_class(G: FiniteGroup) -> Optional[int]:
    """Length of the lower central series down to 1, or None if it stalls above 1."""
    lower = lower_central(G)
    if not lower[-1].is_trivial():
        return None
    return len(lower) - 1


def element_order(G: FiniteGroup, x: int) -> int:
    n, y = 1, x
    while y != G.identity:
        y = G.mul(y, x)
        n += 1
    return n


def cyclic_subgroup(G: FiniteGroup, x: int) -> Subgroup:
    return G.closure([x])


def is_normal(G: FiniteGroup, N: Subgroup) -> bool:
    if N.parent is not G:
        raise SubgroupError("subgroup belongs to a different group")
    T, inv = G.table, G.inv
    for n in N.elements:
        # g^-1 n g for every g
        if not N.mask[T[T[inv, n], np.arange(G.order)]].all():
            return False
    return True


def _prime_of(G: FiniteGroup) -> Optional[int]:
    factors = factorint(G.order)
    if len(factors) != 1:
        return None
    return next(iter(factors))


def frattini_rank(G: FiniteGroup) -> int:
    """
    Minimal number of generators of a p-group: log_p |G / G'G^p|.

    Raises:
        InvalidArgumentError: If G is not a nontrivial p-group
    """
    p = _prime_of(G)
    if p is None:
        if G.order == 1:
            return 0
        raise InvalidArgumentError(f"order {G.order} is not a prime power")
    ar = np.arange(G.order)
    pth = np.full(G.order, G.identity)
    for _ in range(p):
        pth = G.table[pth, ar]
    phi = G.closure(np.concatenate([G.commutator_table.ravel(), pth]))
    index = G.order // phi.order
    rank = 0
    while index > 1:
        index //= p
        rank += 1
    return rank


# -- quotients -----------------------------------------------------------------

def abelian_invariants(G: FiniteGroup, N: Subgroup) -> AbelianType:
    """
    Invariant factors of the abelian quotient G/N.

    Cosets are represented by their smallest element. Quotient generators are
    taken greedily; each new generator q contributes the relation
    k*e_q - vec(q^k) with k the least power landing in the span of the
    previous ones, which gives a triangular relation matrix of full rank.

    Raises:
        SubgroupError: If N is not normal or G/N is not abelian
    """
    if not is_normal(G, N):
        raise SubgroupError("subgroup is not normal")
    if not N.mask[G.commutator_table].all():
        raise SubgroupError("quotient is not abelian")

    T = G.table
    coset = T[:, list(N.elements)].min(axis=1)
    reps = sorted(set(int(x) for x in coset))
    one = int(coset[G.identity])

    vec: Dict[int, List[int]] = {one: []}
    relations: List[Tuple[int, int, List[int]]] = []
    for q in reps:
        if q in vec:
            continue
        powers = [one]
        x = q
        while x not in vec:
            powers.append(x)
            x = int(coset[T[x, q]])
        k = len(powers)
        relations.append((len(relations), k, list(vec[x])))
        old = list(vec.items())
        for h, v in old:
            vec[h] = v + [0]
        for i in range(1, k):
            for h, v in old:
                vec[int(coset[T[h, powers[i]]])] = v + [i]

    if len(vec) != len(reps):
        raise SubgroupError(f"coset walk reached {len(vec)} of {len(reps)} cosets")
    n = len(relations)
    rows = []
    for t, k, tail in relations:
        row = [-e for e in tail] + [0] * (n - len(tail))
        row[t] += k
        rows.append(row)
    return quotient_invariants(n, rows)


def subgroup_invariants(H: Subgroup) -> Optional[AbelianType]:
    """Invariants of an abelian subgroup, or None when H is not abelian."""
    group = H.as_group()
    if not group.is_abelian():
        return None
    return abelian_invariants(group, group.trivial())


# -- subgroup enumeration -----------------------------------------------------------

def subgroups_of_order(G: FiniteGroup, k: int, normal_only: bool = False,
                       within: Optional[Subgroup] = None,
                       max_order: int = DEFAULT_MAX_ORDER) -> List[Subgroup]:
    """
    All subgroups of order k, built as joins of cyclic subgroups and
    deduplicated by element set.

    Args:
        k (int): Target order, must divide |G|
        normal_only (bool): Keep only normal subgroups
        within (Subgroup, optional): Only subgroups contained in this one

    Returns:
        List[Subgroup]: Sorted by element tuple

    Raises:
        ResourceGuardError: If |G| exceeds max_order
        InvalidArgumentError: If k does not divide |G|
    """
    if G.order > max_order:
        raise ResourceGuardError(f"group order {G.order} exceeds the subgroup guard {max_order}")
    if k < 1 or G.order % k:
        raise InvalidArgumentError(f"subgroup order {k} does not divide {G.order}")
    pool = within.elements if within is not None else range(G.order)

    cyclic: Dict[Tuple[int, ...], int] = {}
    for x in pool:
        H = cyclic_subgroup(G, x)
        if k % H.order == 0:
            cyclic.setdefault(H.elements, x)

    seen = set(cyclic)
    frontier = list(cyclic)
    found = {elems for elems in cyclic if len(elems) == k}
    while frontier:
        nxt = []
        for elems in frontier:
            if len(elems) == k:
                continue
            for x in cyclic.values():
                if x in elems:
                    continue
                joined = G.closure(list(elems) + [x]).elements
                if k % len(joined) or joined in seen:
                    continue
                seen.add(joined)
                nxt.append(joined)
                if len(joined) == k:
                    found.add(joined)
        frontier = nxt

    result = [Subgroup(G, elems) for elems in sorted(found)]
    if normal_only:
        result = [H for H in result if is_normal(G, H)]
    return result


# -- stem covers ------------------------------------------------------------------------

def stem_cover_report(G: FiniteGroup, A: Subgroup, data: BaerInput) -> Dict[str, bool]:
    """
    Evaluate each N_c stem-cover condition on (G, A) for G = Z_r + Z_s.

    Keys: normal, in_verbal (A <= gamma_{c+1}), in_marginal (A <= Z_c),
    quotient (G/A has the invariants of Z_r + Z_s), baer (A matches the
    Baer invariant). Conditions after a failed normality test are False.
    """
    if A.parent is not G:
        raise SubgroupError("subgroup belongs to a different group")
    report = {"normal": False, "in_verbal": False, "in_marginal": False,
              "quotient": False, "baer": False}
    if not is_normal(G, A):
        return report
    report["normal"] = True
    report["in_verbal"] = A.issubset(series_term(lower_central(G), data.c))
    report["in_marginal"] = A.issubset(series_term(upper_central(G), data.c))
    if A.mask[G.commutator_table].all():
        report["quotient"] = abelian_invariants(G, A) == invariants_of_cyclic_sum([data.r, data.s])
    own = subgroup_invariants(A)
    report["baer"] = own is not None and own == baer_formula(data)
    return report


def is_stem_cover(G: FiniteGroup, A: Subgroup, data: BaerInput) -> bool:
    """True iff (G, A) is an N_c stem cover of Z_r + Z_s."""
    return all(stem_cover_report(G, A, data).values())


def summary(G: FiniteGroup) -> Dict[str, object]:
    """Order, center size, class, gamma_2 invariants and involution count."""
    lower = lower_central(G)
    gamma2 = series_term(lower, 1)
    gamma2_type = subgroup_invariants(gamma2)
    involutions = sum(1 for x in range(G.order) if x != G.identity and G.mul(x, x) == G.identity)
    logger.debug(f"Summary of {G!r}: class {nilpotency_class(G)}, |Z| = {center(G).order}")
    return {
        "order": G.order,
        "center": center(G).order,
        "class": nilpotency_class(G),
        "gamma2_invariants": gamma2_type.to_list() if gamma2_type is not None else None,
        "involutions": involutions,
    }
