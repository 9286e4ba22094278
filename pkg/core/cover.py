"""
N_c stem covers of Z_r + Z_s: verdicts, the class-1 construction and the
exhaustive search over small p-groups.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from sympy import isprime

from core.baer import BaerInput, baer_formula
from core.errors import (EngineInvariantError, InvalidArgumentError,
                         ResourceGuardError)
from core.fingroup import (DEFAULT_EXHAUSTIVE_LIMIT, DEFAULT_MAX_ORDER,
                           FiniteGroup, Subgroup, abelian_invariants, cyclic_group,
                           direct_product, frattini_rank, is_stem_cover, lower_central,
                           materialize, nilpotency_class, series_term, subgroups_of_order,
                           summary, upper_central)
from core.lattice import invariants_of_cyclic_sum
from core.pcp import candidate_count, consistent_with_quotients, enumerate_pcps, format_pcp
from utils.logger import logger

DEFAULT_SEARCH_MAX_ORDER = 64


class Verdict(str, Enum):
    NONE_EXISTS = "NoneExists"
    EXISTS_CONSTRUCTED = "ExistsConstructed"
    EXISTS_TRIVIALLY = "ExistsTrivially"


@dataclass(frozen=True)
class SearchCertificate:
    """
    Counts from an exhaustive stem-cover search; merging adds counts.

    Attributes:
        examined (int): Presentations enumerated
        consistent (int): Presentations passing the consistency check
        passing (int): Presentations with at least one A making a stem cover
        partial (int): (G*, A) pairs with A normal, A <= Z_c and G*/A = G
        verbal (int): Partial pairs that also have A <= gamma_{c+1}
        trace_confirmed (int): Deduction steps confirmed on those pairs
        trace_violations (int): Deduction steps that failed on those pairs
        witnesses (Tuple[dict, ...]): Summaries of passing groups
    """
    examined: int = 0
    consistent: int = 0
    passing: int = 0
    partial: int = 0
    verbal: int = 0
    trace_confirmed: int = 0
    trace_violations: int = 0
    witnesses: Tuple[Dict[str, Any], ...] = field(default=(), compare=False)

    def merge(self, other: "SearchCertificate") -> "SearchCertificate":
        return SearchCertificate(
            examined=self.examined + other.examined,
            consistent=self.consistent + other.consistent,
            passing=self.passing + other.passing,
            partial=self.partial + other.partial,
            verbal=self.verbal + other.verbal,
            trace_confirmed=self.trace_confirmed + other.trace_confirmed,
            trace_violations=self.trace_violations + other.trace_violations,
            witnesses=self.witnesses + other.witnesses,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "examined": self.examined,
            "consistent": self.consistent,
            "passing": self.passing,
            "partial": self.partial,
            "verbal": self.verbal,
            "trace_confirmed": self.trace_confirmed,
            "trace_violations": self.trace_violations,
            "witnesses": list(self.witnesses),
        }


@dataclass
class CoverVerdict:
    """
    Stem-cover verdict for (r, s, c) with its evidence.

    Exactly one kind of evidence is filled: a (group, subgroup) witness, the
    deduction trace, or a note when the witness was too large to build.
    """
    input: BaerInput
    verdict: Verdict
    trace: List[str] = field(default_factory=list)
    witness: Optional[Tuple[FiniteGroup, Subgroup]] = None
    note: Optional[str] = None

    def __post_init__(self):
        d, c = self.input.d, self.input.c
        allowed = {
            Verdict.NONE_EXISTS: c >= 2 and d != 1,
            Verdict.EXISTS_CONSTRUCTED: c == 1 and d != 1,
            Verdict.EXISTS_TRIVIALLY: d == 1,
        }
        if not allowed[self.verdict]:
            raise EngineInvariantError(f"verdict {self.verdict.value} is not possible for {self.input}")

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "r": self.input.r, "s": self.input.s, "c": self.input.c, "d": self.input.d,
            "verdict": self.verdict.value,
        }
        if self.trace:
            out["trace"] = list(self.trace)
        if self.witness is not None:
            G, A = self.witness
            out["witness"] = dict(summary(G), subgroup_order=A.order)
        if self.note:
            out["note"] = self.note
        return out


def theorem_trace(data: BaerInput) -> List[str]:
    """
    Deduction chain ruling out an N_c stem cover 1 -> A -> G* -> G -> 1.

    Raises:
        InvalidArgumentError: If c < 2 or d = 1, where no contradiction arises
    """
    c, d = data.c, data.d
    if c < 2 or d == 1:
        raise InvalidArgumentError(f"no contradiction to derive for {data}")
    baer = baer_formula(data)
    return [
        f"assume A <= gamma_{c + 1}(G*) n Z_{c}(G*), G*/A = Z_{data.r} + Z_{data.s} and A = {baer}",
        "G is abelian, so gamma_2(G*) <= A",
        f"gamma_2(G*) <= A <= gamma_{c + 1}(G*) <= gamma_2(G*), so gamma_2(G*) = gamma_{c + 1}(G*)",
        f"gamma_2(G*) <= A <= Z_{c}(G*), so gamma_{c + 2}(G*) = 1",
        f"gamma_3(G*) = [gamma_2(G*), G*] = [gamma_{c + 1}(G*), G*] = gamma_{c + 2}(G*) = 1",
        f"c = {c} >= 2, so gamma_{c + 1}(G*) <= gamma_3(G*) = 1",
        f"A <= gamma_{c + 1}(G*) = 1, but A = {baer} is nontrivial since d = {d} != 1: contradiction",
    ]


def construct_c1_cover(r: int, s: int, max_order: int = DEFAULT_MAX_ORDER,
                       exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT) -> Tuple[FiniteGroup, Subgroup]:
    """
    Covering group of Z_r + Z_s on triples (i, j, k) in Z_r x Z_s x Z_d:

        (i, j, k)(i', j', k') = (i + i', j + j', k + k' + j*i')

    with A = {(0, 0, k)}. The cocycle j*i' mod d is bilinear, so the
    product is associative.

    Raises:
        ResourceGuardError: If r*s*d exceeds max_order
    """
    data = BaerInput(r, s, 1)
    d = data.d
    N = r * s * d
    if N > max_order:
        raise ResourceGuardError(f"cover of order {N} exceeds the table guard {max_order}")

    idx = np.arange(N)
    i, j, k = idx // (s * d), (idx // d) % s, idx % d
    I = (i[:, None] + i[None, :]) % r
    J = (j[:, None] + j[None, :]) % s
    K = (k[:, None] + k[None, :] + j[:, None] * i[None, :]) % d
    table = (I * s + J) * d + K
    labels = [f"({a},{b},{e})" for a, b, e in zip(i, j, k)]
    G = FiniteGroup(table, labels, verify=True, exhaustive_limit=exhaustive_limit)
    A = G.subgroup_from_mask((i == 0) & (j == 0))
    logger.debug(f"Class-1 cover of Z_{r} + Z_{s}: order {N}, |A| = {A.order}")
    return G, A


def stem_cover_verdict(data: BaerInput, max_order: int = DEFAULT_MAX_ORDER) -> CoverVerdict:
    """
    Decide whether Z_r + Z_s has an N_c stem cover.

    d = 1 gives ExistsTrivially (G* = G, A = 1); otherwise c = 1 gives the
    verified class-1 construction and c >= 2 gives NoneExists with the
    deduction trace. Witnesses above max_order are reported, not built.

    Raises:
        EngineInvariantError: If a built witness fails the stem-cover check
    """
    if data.d == 1:
        if data.r * data.s > max_order:
            return CoverVerdict(data, Verdict.EXISTS_TRIVIALLY,
                                note=f"G* = G of order {data.r * data.s} not materialized")
        G = direct_product(cyclic_group(data.r), cyclic_group(data.s))
        A = G.trivial()
        _require_cover(G, A, data)
        return CoverVerdict(data, Verdict.EXISTS_TRIVIALLY, witness=(G, A))

    if data.c == 1:
        order = data.r * data.s * data.d
        if order > max_order:
            return CoverVerdict(data, Verdict.EXISTS_CONSTRUCTED,
                                note=f"witness of order {order} not materialized")
        G, A = construct_c1_cover(data.r, data.s, max_order)
        _require_cover(G, A, data)
        return CoverVerdict(data, Verdict.EXISTS_CONSTRUCTED, witness=(G, A))

    return CoverVerdict(data, Verdict.NONE_EXISTS, trace=theorem_trace(data))


def _require_cover(G: FiniteGroup, A: Subgroup, data: BaerInput) -> None:
    if not is_stem_cover(G, A, data):
        raise EngineInvariantError(f"constructed witness for {data} is not a stem cover")


# -- exhaustive search ------------------------------------------------------------

def search_order(data: BaerInput, p: int) -> int:
    """|G*| = r*s*|N_cM(G)| for the homogeneous case r = s = p."""
    _check_search_input(data, p)
    return p * p * baer_formula(data).order()


def _check_search_input(data: BaerInput, p: int) -> None:
    if not isprime(p):
        raise InvalidArgumentError(f"p = {p} is not prime")
    if data.r != p or data.s != p:
        raise InvalidArgumentError(f"search needs r = s = p, got r={data.r}, s={data.s}, p={p}")


def evaluate_candidate(G: FiniteGroup, data: BaerInput, p: int) -> SearchCertificate:
    """
    Test every normal A of order |N_cM(G)| inside Z_c(G*) and re-check the
    deduction steps on the pairs that satisfy the hypotheses.

    Pairs with A <= gamma_{c+1} n Z_c and G*/A = G must be 2-generated of
    class <= c+1, which is what makes the enumerated presentation shape
    complete; a violation raises EngineInvariantError.
    """
    c = data.c
    a_order = baer_formula(data).order()
    lower, upper = lower_central(G), upper_central(G)
    verbal_term = series_term(lower, c)
    target = invariants_of_cyclic_sum([data.r, data.s])
    partial = verbal = confirmed = violations = 0
    passed = False

    for A in subgroups_of_order(G, a_order, normal_only=True, within=series_term(upper, c)):
        if not A.mask[G.commutator_table].all() or abelian_invariants(G, A) != target:
            continue
        partial += 1
        # gamma_2 <= A <= Z_c forces gamma_{c+2} = 1
        if series_term(lower, c + 1).is_trivial():
            confirmed += 1
        else:
            violations += 1
        if not A.issubset(verbal_term):
            continue
        verbal += 1
        if frattini_rank(G) != 2 or (nilpotency_class(G) or 0) > c + 1:
            raise EngineInvariantError(
                f"stem-cover candidate of order {G.order} is outside the searched class")
        if c >= 2:
            for term in (2, c):
                if series_term(lower, term).is_trivial():
                    confirmed += 1
                else:
                    violations += 1
        if not passed and is_stem_cover(G, A, data):
            passed = True

    return SearchCertificate(passing=int(passed), partial=partial, verbal=verbal,
                             trace_confirmed=confirmed, trace_violations=violations)


def search_range(data: BaerInput, p: int, start: int, stop: int,
                 exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT) -> SearchCertificate:
    """Search the candidates numbered [start, stop) of the 2-generator shape."""
    m = 2 + data.n
    cert = SearchCertificate()
    quotients: Dict[Tuple, bool] = {}
    for pcp in enumerate_pcps(p, m, two_generator=True, start=start, stop=stop):
        cert = replace(cert, examined=cert.examined + 1)
        if not consistent_with_quotients(pcp, quotients):
            continue
        cert = replace(cert, consistent=cert.consistent + 1)
        G = materialize(pcp, max_order=pcp.order, exhaustive_limit=exhaustive_limit,
                        check_consistency=False)
        found = evaluate_candidate(G, data, p)
        if found.passing:
            witness = dict(summary(G), presentation=format_pcp(pcp))
            found = replace(found, witnesses=(witness,))
        cert = cert.merge(found)
    return cert


def _search_job(job: Tuple[BaerInput, int, int, int, int]) -> SearchCertificate:
    data, p, start, stop, exhaustive_limit = job
    return search_range(data, p, start, stop, exhaustive_limit)


def exhaustive_search(data: BaerInput, p: int, max_order: int = DEFAULT_SEARCH_MAX_ORDER,
                      workers: Optional[int] = 1,
                      exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT) -> SearchCertificate:
    """
    Enumerate every consistent presentation of order r*s*d^n in the
    2-generator shape and count the stem covers among them.

    Any stem cover G* of Z_p + Z_p has order p^(2+n), is generated by two
    elements (A <= gamma_2 <= Frattini) and has class <= c+1 (gamma_2 <= A
    <= Z_c). Every such group has a presentation of the enumerated shape,
    so a zero passing count rules stem covers out.

    Args:
        data (BaerInput): (p, p, c)
        p (int): The prime
        max_order (int): Largest admissible |G*|
        workers (int, optional): 1 runs inline; otherwise ranges go to threads.sweep_thread

    Raises:
        InvalidArgumentError: If p is not prime or r, s differ from p
        ResourceGuardError: If |G*| exceeds max_order
    """
    order = search_order(data, p)
    if order > max_order:
        raise ResourceGuardError(f"search order {order} exceeds the limit {max_order}")
    m = 2 + data.n
    total = candidate_count(p, m)
    logger.info(f"Searching {total} presentations of order {order} for {data}")

    if workers == 1:
        cert = search_range(data, p, 0, total, exhaustive_limit)
    else:
        from threads.sweep_thread import SweepRunner

        runner = SweepRunner(workers=workers)
        parts = max(1, min(total, runner.max_workers * 4))
        bounds = [total * i // parts for i in range(parts + 1)]
        jobs = [(data, p, bounds[i], bounds[i + 1], exhaustive_limit) for i in range(parts)]
        cert = SearchCertificate()
        for part in runner.map(_search_job, jobs):
            cert = cert.merge(part)

    logger.info(f"Search for {data} finished: examined {cert.examined}, "
                f"consistent {cert.consistent}, passing {cert.passing}")
    return cert


def search_agrees_with_verdict(verdict: CoverVerdict, cert: SearchCertificate) -> bool:
    """Zero passes iff NoneExists, and no deduction step failed."""
    if cert.trace_violations:
        return False
    if verdict.verdict is Verdict.NONE_EXISTS:
        return cert.passing == 0
    return cert.passing >= 1
