"""
Power-commutator presentations of finite p-groups.

Generators g_1 .. g_m (0-based internally) with relations

    g_i^p     = (word in g_{i+1} .. g_m)
    [g_j,g_i] = (word in g_{j+1} .. g_m)     for j > i

Collection reuses core.collect.Collector with an extra rewriting step
g_i^p -> tail whenever an exponent reaches p.
"""

import itertools
import re
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from sympy import isprime

from core.collect import Collector, Vector
from core.errors import InvalidArgumentError, PcpFormatError


@dataclass(frozen=True, eq=True)
class Pcp:
    """
    Power-commutator presentation.

    Attributes:
        p (int): Prime
        m (int): Number of generators; the group order is p^m when consistent
        powers (Tuple[Vector, ...]): powers[i] is the normal form of g_i^p
        commutators (Dict[Tuple[int, int], Vector]): (j, i) -> normal form of [g_j, g_i], j > i
    """
    p: int
    m: int
    powers: Tuple[Vector, ...]
    commutators: Dict[Tuple[int, int], Vector] = field(default_factory=dict, hash=False)

    def __post_init__(self):
        if not isprime(self.p):
            raise InvalidArgumentError(f"p = {self.p} is not prime")
        if self.m < 1:
            raise InvalidArgumentError(f"m must be >= 1, got {self.m}")
        if len(self.powers) != self.m:
            raise InvalidArgumentError(f"expected {self.m} power relations, got {len(self.powers)}")
        for i, tail in enumerate(self.powers):
            self._check_tail(tail, i, f"g{i + 1}^{self.p}")
        for (j, i), tail in self.commutators.items():
            if not 0 <= i < j < self.m:
                raise InvalidArgumentError(f"commutator index ({j + 1},{i + 1}) needs j > i")
            self._check_tail(tail, j, f"[g{j + 1},g{i + 1}]")

    def _check_tail(self, tail: Vector, after: int, name: str) -> None:
        if len(tail) != self.m:
            raise InvalidArgumentError(f"{name}: tail has length {len(tail)}, expected {self.m}")
        for l, e in enumerate(tail):
            if not 0 <= e < self.p:
                raise InvalidArgumentError(f"{name}: exponent {e} outside [0, {self.p})")
            if e and l <= after:
                raise InvalidArgumentError(f"{name}: tail may only use generators after g{after + 1}")

    @property
    def order(self) -> int:
        return self.p ** self.m

    def commutator_tail(self, j: int, i: int) -> Vector:
        return self.commutators.get((j, i), (0,) * self.m)

    def key(self) -> Tuple:
        return self.powers, tuple(sorted(self.commutators.items()))

    def quotient_by_last(self) -> "Pcp":
        """
        Presentation of G / <g_m>. Tails never reach past g_m, so g_m is
        central and the truncated relations present the quotient.
        """
        if self.m < 2:
            raise InvalidArgumentError("a one-generator presentation has no proper quotient here")
        k = self.m - 1
        powers = tuple(tail[:k] for tail in self.powers[:k])
        comms = {key: tail[:k] for key, tail in self.commutators.items() if key[0] < k and any(tail[:k])}
        return Pcp(self.p, k, powers, comms)

    @classmethod
    def from_relations(cls, p: int, m: int,
                       powers: Optional[Dict[int, Dict[int, int]]] = None,
                       commutators: Optional[Dict[Tuple[int, int], Dict[int, int]]] = None) -> "Pcp":
        """
        Build a presentation from sparse 1-based relations.

        Args:
            p (int): Prime
            m (int): Generator count
            powers (dict): i -> {l: exponent} for g_i^p
            commutators (dict): (j, i) -> {l: exponent} for [g_j, g_i]

        Returns:
            Pcp: The presentation (not checked for consistency)
        """
        def vec(sparse: Dict[int, int]) -> Vector:
            out = [0] * m
            for l, e in sparse.items():
                out[l - 1] = e
            return tuple(out)

        for (j, i) in (commutators or {}):
            if not 1 <= i < j <= m:
                raise InvalidArgumentError(f"commutator index ({j},{i}) needs m >= j > i >= 1")
        power_tails = tuple(vec((powers or {}).get(i + 1, {})) for i in range(m))
        comm_tails = {(j - 1, i - 1): vec(sparse) for (j, i), sparse in (commutators or {}).items()
                      if any(sparse.values())}
        return cls(p, m, power_tails, comm_tails)


class PcpCollector(Collector):
    """Collector for a power-commutator presentation; exponents stay in [0, p)."""

    def __init__(self, pcp: Pcp):
        super().__init__(pcp.m)
        self.pcp = pcp
        self.p = pcp.p

    def _commutes(self, l: int, j: int) -> bool:
        return not any(self.pcp.commutator_tail(l, j))

    def _compute_image(self, l: int, j: int, e: int) -> Vector:
        """g_l^(g_j^e) for e >= 1 by repeated conjugation."""
        if e == 1:
            tail = self.pcp.commutator_tail(l, j)
            return tuple(int(idx == l) + t for idx, t in enumerate(tail))
        previous = self._image(l, j, e - 1)
        res = list(self.identity_vector())
        for m, a in enumerate(previous):
            if a:
                self._collect_into(res, self.power_vector(self._image(m, j, 1), a))
        return tuple(res)

    def _reduce(self, res: List[int], j: int) -> Optional[Vector]:
        if res[j] < self.p:
            return None
        q, res[j] = divmod(res[j], self.p)
        tail = self.pcp.powers[j]
        if not any(tail):
            return None
        return self.power_vector(tail, q)

    def element_index(self, vec: Sequence[int]) -> int:
        """Lexicographic index of a normal form, g_1 most significant."""
        index = 0
        for e in vec:
            index = index * self.p + e
        return index

    def index_vector(self, index: int) -> Vector:
        digits = []
        for _ in range(self.size):
            index, e = divmod(index, self.p)
            digits.append(e)
        return tuple(reversed(digits))


def pcp_consistency_check(pcp: Pcp) -> bool:
    """
    Test whether the presentation defines a group of order exactly p^m.

    The overlaps checked are

        (g_k g_j) g_i   = g_k (g_j g_i)            k > j > i
        (g_j^p) g_i     = g_j^(p-1) (g_j g_i)      j > i
        g_j (g_i^p)     = (g_j g_i) g_i^(p-1)      j > i
        (g_i^p) g_i     = g_i (g_i^p)

    Args:
        pcp (Pcp): Structurally valid presentation

    Returns:
        bool: True iff every overlap collects to the same normal form
    """
    col = PcpCollector(pcp)
    mul = col.multiply_vectors
    unit = col.unit_vector
    m, p = pcp.m, pcp.p

    for i in range(m):
        if mul(pcp.powers[i], unit(i)) != mul(unit(i), pcp.powers[i]):
            return False
    for i in range(m):
        for j in range(i + 1, m):
            ji = mul(unit(j), unit(i))
            if mul(pcp.powers[j], unit(i)) != mul(unit(j, p - 1), ji):
                return False
            if mul(unit(j), pcp.powers[i]) != mul(ji, unit(i, p - 1)):
                return False
    for i in range(m):
        for j in range(i + 1, m):
            ji = mul(unit(j), unit(i))
            for k in range(j + 1, m):
                if mul(mul(unit(k), unit(j)), unit(i)) != mul(unit(k), ji):
                    return False
    return True


def consistent_with_quotients(pcp: Pcp, cache: Dict[Tuple, bool]) -> bool:
    """
    pcp_consistency_check, rejecting first through the quotients by g_m,
    g_(m-1), ... whose verdicts are memoized in cache. A consistent
    presentation has consistent quotients, so the answer is unchanged.
    """
    if pcp.m >= 2:
        quotient = pcp.quotient_by_last()
        key = quotient.key()
        if key not in cache:
            cache[key] = consistent_with_quotients(quotient, cache)
        if not cache[key]:
            return False
    return pcp_consistency_check(pcp)


def presentation_slots(p: int, m: int, two_generator: bool = True) -> List[Tuple[str, Tuple[int, ...]]]:
    """
    Free tail positions of a presentation shape.

    With two_generator set, g_1^p carries no g_2, so g_3 .. g_m span the
    Frattini subgroup; every 2-generated group of order p^m has a
    presentation of this shape refining its lower exponent-p central series.

    Returns:
        List of ("power", (i, l)) or ("comm", (j, i, l)) slots, 0-based
    """
    slots: List[Tuple[str, Tuple[int, ...]]] = []
    for i in range(m):
        for l in range(i + 1, m):
            if two_generator and i == 0 and l == 1:
                continue
            slots.append(("power", (i, l)))
    for j in range(m):
        for i in range(j):
            for l in range(j + 1, m):
                slots.append(("comm", (j, i, l)))
    return slots


def enumerate_pcps(p: int, m: int, two_generator: bool = True,
                   start: int = 0, stop: Optional[int] = None) -> Iterator[Pcp]:
    """
    Yield every presentation of the given shape (consistent or not).

    Candidates are numbered by their digits over the slot list; start/stop
    select a contiguous range so the stream can be partitioned.
    """
    slots = presentation_slots(p, m, two_generator)
    total = p ** len(slots)
    stop = total if stop is None else min(stop, total)
    for digits in itertools.islice(itertools.product(range(p), repeat=len(slots)), start, stop):
        powers = [[0] * m for _ in range(m)]
        comms: Dict[Tuple[int, int], List[int]] = {}
        for (kind, pos), e in zip(slots, digits):
            if not e:
                continue
            if kind == "power":
                i, l = pos
                powers[i][l] = e
            else:
                j, i, l = pos
                comms.setdefault((j, i), [0] * m)[l] = e
        yield Pcp(p, m, tuple(tuple(row) for row in powers),
                  {key: tuple(tail) for key, tail in comms.items()})


def candidate_count(p: int, m: int, two_generator: bool = True) -> int:
    return p ** len(presentation_slots(p, m, two_generator))


_RELATION = re.compile(
    r"^(?:(?P<param>[pm])\s*=\s*(?P<value>\d+)"
    r"|g(?P<pow>\d+)\s*\^\s*(?P<exp>\d+)\s*=\s*(?P<prhs>.*)"
    r"|\[\s*g(?P<cj>\d+)\s*,\s*g(?P<ci>\d+)\s*\]\s*=\s*(?P<crhs>.*))$")
_FACTOR = re.compile(r"^g(\d+)(?:\^(\d+))?$")


def _parse_word(text: str, lineno: int) -> Dict[int, int]:
    text = text.strip()
    if text in ("", "1"):
        return {}
    word: Dict[int, int] = {}
    last = 0
    for token in text.split():
        match = _FACTOR.match(token)
        if not match:
            raise PcpFormatError(f"line {lineno}: cannot read factor {token!r}")
        gen = int(match.group(1))
        exp = int(match.group(2) or 1)
        if gen <= last:
            raise PcpFormatError(f"line {lineno}: factors must be in increasing generator order")
        last = gen
        word[gen] = exp
    return word


def parse_pcp(text: str) -> Pcp:
    """
    Read the line-oriented presentation format.

        p = 2
        m = 3
        g1^2 = g3
        [g2,g1] = g3

    Lines starting with '#' are comments; omitted relations are trivial.

    Raises:
        PcpFormatError: On unreadable lines or relations that break the shape
    """
    params: Dict[str, int] = {}
    power_exps: Dict[int, int] = {}
    powers: Dict[int, Dict[int, int]] = {}
    comms: Dict[Tuple[int, int], Dict[int, int]] = {}
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        match = _RELATION.match(line)
        if not match:
            raise PcpFormatError(f"line {lineno}: cannot parse {raw.strip()!r}")
        if match.group("param"):
            key = match.group("param")
        elif match.group("pow"):
            key = int(match.group("pow"))
        else:
            key = (int(match.group("cj")), int(match.group("ci")))
        if key in seen:
            raise PcpFormatError(f"line {lineno}: repeated relation {raw.strip()!r}")
        seen.add(key)
        if match.group("param"):
            params[match.group("param")] = int(match.group("value"))
        elif match.group("pow"):
            powers[int(match.group("pow"))] = _parse_word(match.group("prhs"), lineno)
            power_exps[int(match.group("pow"))] = int(match.group("exp"))
        else:
            comms[(int(match.group("cj")), int(match.group("ci")))] = _parse_word(match.group("crhs"), lineno)

    if "p" not in params or "m" not in params:
        raise PcpFormatError("presentation needs 'p = ...' and 'm = ...' lines")
    p, m = params["p"], params["m"]
    for gen, exp in power_exps.items():
        if exp != p:
            raise PcpFormatError(f"power relation g{gen}^{exp} must use the prime p = {p}")
    for gen in list(powers) + [g for pair in comms for g in pair]:
        if not 1 <= gen <= m:
            raise PcpFormatError(f"generator g{gen} outside g1..g{m}")
    try:
        return Pcp.from_relations(p, m, powers, comms)
    except InvalidArgumentError as e:
        raise PcpFormatError(str(e)) from e


def _format_word(tail: Sequence[int]) -> str:
    factors = [f"g{l + 1}" if e == 1 else f"g{l + 1}^{e}" for l, e in enumerate(tail) if e]
    return " ".join(factors) if factors else "1"


def format_pcp(pcp: Pcp) -> str:
    """Render a presentation in the format read by parse_pcp (trivial relations omitted)."""
    lines = [f"p = {pcp.p}", f"m = {pcp.m}"]
    for i, tail in enumerate(pcp.powers):
        if any(tail):
            lines.append(f"g{i + 1}^{pcp.p} = {_format_word(tail)}")
    for (j, i) in sorted(pcp.commutators):
        tail = pcp.commutators[(j, i)]
        if any(tail):
            lines.append(f"[g{j + 1},g{i + 1}] = {_format_word(tail)}")
    return "\n".join(lines) + "\n"
