"""
The Baer invariant N_cM(Z_r + Z_s), by closed formula and by lattice engine.

Free presentation: F free on x1, x2, R = <x1^r, x2^s, gamma_2(F)> = S gamma_2(F)
with S the normal closure of {x1^r, x2^s}. Then

    N_cM(G) = (R n gamma_{c+1}(F)) / [R, _cF]
            = gamma_{c+1}(F) / [S, _cF] gamma_{c+2}(F)

and the engine computes the right-hand side inside F/gamma_{c+2}(F), whose
top layer gamma_{c+1}/gamma_{c+2} is free abelian on the weight-(c+1) basic
commutators.
"""

from dataclasses import dataclass
from itertools import product
from math import gcd
from typing import Dict, List, Optional, Tuple

from core.collect import NilElement, layer_coords, make_context, power
from core.collect import commutator
from core.errors import (EngineInvariantError, InvalidArgumentError,
                         NotInLayerError, ResourceGuardError)
from core.hall import DEFAULT_MAX_BASIS, witt_count
from core.lattice import AbelianType, quotient_invariants
from utils.logger import logger

DEFAULT_MAX_CLASS = 6


@dataclass(frozen=True)
class BaerInput:
    """
    G = Z_r + Z_s and the class c of the variety N_c.

    Attributes:
        r (int): First cyclic order, >= 1
        s (int): Second cyclic order, >= 1
        c (int): Nilpotency class, >= 1
    """
    r: int
    s: int
    c: int

    def __post_init__(self):
        if self.r < 1 or self.s < 1:
            raise InvalidArgumentError(f"r and s must be >= 1, got r={self.r}, s={self.s}")
        if self.c < 1:
            raise InvalidArgumentError(f"class c must be >= 1, got {self.c}")

    @property
    def d(self) -> int:
        return gcd(self.r, self.s)

    @property
    def n(self) -> int:
        """Number of basic commutators of weight c+1 on two letters."""
        return witt_count(2, self.c + 1)

    def to_dict(self) -> Dict[str, int]:
        return {"r": self.r, "s": self.s, "c": self.c}


def baer_formula(data: BaerInput) -> AbelianType:
    """
    Closed form: Z_d repeated n = witt_count(2, c+1) times, trivial when d = 1.
    """
    if data.d == 1:
        return AbelianType()
    return AbelianType((data.d,) * data.n)


def schur_multiplier(r: int, s: int) -> AbelianType:
    """The classical case c = 1: M(Z_r + Z_s) = Z_gcd(r, s)."""
    return baer_formula(BaerInput(r, s, 1))


def relation_rows(data: BaerInput, max_class: int = DEFAULT_MAX_CLASS,
                  max_basis: int = DEFAULT_MAX_BASIS) -> List[Tuple[int, ...]]:
    """
    Top-layer coordinates of [u, y_1, ..., y_c] for u in {x1^r, x2^s} and
    y_i in {x1, x2}.

    These rows generate the image of [S, _cF] in gamma_{c+1}/gamma_{c+2}:
      - conjugation acts trivially on gamma_{c+1}/gamma_{c+2}, so the normal
        closure S contributes nothing beyond its generators x1^r, x2^s;
      - a bracket with any entry in gamma_2 lands in weight >= c+2, so only
        the letters x1, x2 matter in the positions y_i (F = <x1, x2> gamma_2);
      - the top layer is multilinear in each entry, so inverse letters only
        negate rows, and the lattice is closed under negation anyway.

    Raises:
        ResourceGuardError: If c exceeds max_class
        EngineInvariantError: If a generated bracket is not in the top layer
    """
    if data.c > max_class:
        raise ResourceGuardError(f"class c={data.c} exceeds the engine cap {max_class}")
    weight = data.c + 1
    ctx = make_context(2, weight, max_basis)
    x1, x2 = ctx.generator(1), ctx.generator(2)
    letters = (x1, x2)

    rows: List[Tuple[int, ...]] = []
    for u in (power(x1, data.r), power(x2, data.s)):
        # left-normed brackets share prefixes: extend level by level
        level: Dict[Tuple[int, ...], NilElement] = {(): u}
        for _ in range(data.c):
            level = {path + (t,): commutator(el, letters[t])
                     for path, el in level.items() for t in (0, 1)}
        for path in sorted(level):
            try:
                rows.append(layer_coords(level[path], weight))
            except NotInLayerError as e:
                raise EngineInvariantError(
                    f"bracket {path} of {data} left the top layer: {e}") from e
    return rows


def baer_engine(data: BaerInput, max_class: int = DEFAULT_MAX_CLASS,
                max_basis: int = DEFAULT_MAX_BASIS) -> AbelianType:
    """
    Recompute N_cM(Z_r + Z_s) as Z^n modulo the relation lattice.

    The numerator R n gamma_{c+1}(F) is all of gamma_{c+1}(F) because
    gamma_2(F) is contained in R, so the whole layer Z^n is quotiented.
    """
    rows = relation_rows(data, max_class, max_basis)
    n = witt_count(2, data.c + 1)
    result = quotient_invariants(n, rows)
    logger.debug(f"baer_engine {data}: {len(rows)} rows -> {result}")
    return result


def compare_methods(data: BaerInput, max_class: int = DEFAULT_MAX_CLASS,
                    max_basis: int = DEFAULT_MAX_BASIS) -> Dict[str, object]:
    """
    Run both methods and report agreement.

    Returns:
        Dict with d, n, formula, engine (invariant lists) and agree
    """
    formula = baer_formula(data)
    engine = baer_engine(data, max_class, max_basis)
    agree = formula == engine
    if not agree:
        logger.error(f"Formula and engine disagree for {data}: {formula} vs {engine}")
    return {
        "r": data.r, "s": data.s, "c": data.c,
        "d": data.d, "n": data.n,
        "formula": formula.to_list(),
        "engine": engine.to_list(),
        "agree": agree,
    }


def sweep_inputs(r_max: int, s_max: int, c_max: int, c_min: int = 1) -> List[BaerInput]:
    return [BaerInput(r, s, c) for c in range(c_min, c_max + 1)
            for r, s in product(range(1, r_max + 1), range(1, s_max + 1))]


def equivalence_sweep(r_max: int = 12, s_max: int = 12, c_max: int = 5,
                      workers: Optional[int] = None,
                      max_class: int = DEFAULT_MAX_CLASS) -> List[Dict[str, object]]:
    """
    Compare formula and engine on every (r, s, c) in [1, r_max] x [1, s_max] x [1, c_max].

    Args:
        workers (int, optional): Worker count for threads.sweep_thread (None: config default)

    Returns:
        List of compare_methods rows in (c, r, s) order
    """
    from threads.sweep_thread import SweepRunner

    inputs = sweep_inputs(r_max, s_max, c_max)
    logger.info(f"Equivalence sweep over {len(inputs)} inputs (r<={r_max}, s<={s_max}, c<={c_max})")
    runner = SweepRunner(workers=workers)
    rows = runner.map(_sweep_row, [(data, max_class) for data in inputs])
    failures = [row for row in rows if not row["agree"]]
    logger.info(f"Equivalence sweep finished: {len(rows) - len(failures)}/{len(rows)} agree")
    return rows


def _sweep_row(job: Tuple[BaerInput, int]) -> Dict[str, object]:
    data, max_class = job
    return compare_methods(data, max_class)
