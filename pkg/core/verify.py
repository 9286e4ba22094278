"""
Seeded randomized property checks on free nilpotent groups.

Each suite returns {"suite", "letters", "class", "trials", "failures"}.
"""

from typing import Callable, Dict, List

import numpy as np

from core.collect import (NilElement, NilGroupCtx, commutator, conjugate, layer_coords,
                          left_normed, make_context, power, weight_of)
from core.errors import InvalidArgumentError
from core.hall import DEFAULT_MAX_BASIS
from utils.logger import logger

SUITES = ("axioms", "hall-witt", "power", "truncation")


def random_element(ctx: NilGroupCtx, rng: np.random.Generator, bound: int = 5,
                   min_weight: int = 1) -> NilElement:
    """Normal form with exponents in [-bound, bound] on basis items of weight >= min_weight."""
    exps = rng.integers(-bound, bound + 1, size=ctx.size)
    exps[:ctx.basis.block(min_weight).start] = 0
    return ctx.element([int(e) for e in exps])


def check_axioms(ctx: NilGroupCtx, rng: np.random.Generator, trials: int) -> int:
    identity = ctx.identity()
    failures = 0
    for _ in range(trials):
        a, b, c = (random_element(ctx, rng) for _ in range(3))
        ok = ((a * b) * c == a * (b * c)
              and a * identity == a == identity * a
              and (a * ~a).is_identity() and (~a * a).is_identity())
        failures += not ok
    return failures


def check_hall_witt(ctx: NilGroupCtx, rng: np.random.Generator, trials: int) -> int:
    """[[x,y^-1],z]^y [[y,z^-1],x]^z [[z,x^-1],y]^x = 1."""
    failures = 0
    for _ in range(trials):
        x, y, z = (random_element(ctx, rng) for _ in range(3))
        value = (conjugate(commutator(commutator(x, ~y), z), y)
                 * conjugate(commutator(commutator(y, ~z), x), z)
                 * conjugate(commutator(commutator(z, ~x), y), x))
        failures += not value.is_identity()
    return failures


def check_power_congruence(ctx: NilGroupCtx, rng: np.random.Generator, trials: int) -> int:
    """
    [a_1, ..., a_i^k, ..., a_w] has k times the top-layer coordinates of
    [a_1, ..., a_w] for letters a_j.
    """
    w = ctx.nil_class
    if w < 2:
        raise InvalidArgumentError("power congruence needs class >= 2")
    letters = [ctx.generator(i + 1) for i in range(ctx.letters)]
    failures = 0
    for _ in range(trials):
        parts = [letters[int(t)] for t in rng.integers(0, ctx.letters, size=w)]
        position = int(rng.integers(0, w))
        k = int(rng.integers(-6, 7))
        base = layer_coords(left_normed(parts), w)
        scaled_parts = list(parts)
        scaled_parts[position] = power(parts[position], k)
        scaled = layer_coords(left_normed(scaled_parts), w)
        failures += scaled != tuple(k * e for e in base)
    return failures


def check_truncation(ctx: NilGroupCtx, rng: np.random.Generator, trials: int) -> int:
    """Brackets of w+1 elements vanish; [gamma_i, gamma_j] lies in gamma_{i+j}."""
    w = ctx.nil_class
    failures = 0
    for _ in range(trials):
        parts = [random_element(ctx, rng) for _ in range(w + 1)]
        failures += not left_normed(parts).is_identity()
        i, j = (int(t) for t in rng.integers(1, w + 1, size=2))
        value = commutator(random_element(ctx, rng, min_weight=i), random_element(ctx, rng, min_weight=j))
        depth = weight_of(value)
        failures += depth is not None and depth < i + j
    return failures


_CHECKS: Dict[str, Callable[[NilGroupCtx, np.random.Generator, int], int]] = {
    "axioms": check_axioms,
    "hall-witt": check_hall_witt,
    "power": check_power_congruence,
    "truncation": check_truncation,
}


def run_suite(suite: str, letters: int, nil_class: int, trials: int, seed: int = 0,
              max_basis: int = DEFAULT_MAX_BASIS) -> Dict[str, object]:
    """
    Run one property suite in ctx(letters, nil_class).

    Raises:
        InvalidArgumentError: On an unknown suite or a nonpositive trial count
    """
    if suite not in _CHECKS:
        raise InvalidArgumentError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    if trials < 1:
        raise InvalidArgumentError(f"trials must be >= 1, got {trials}")
    ctx = make_context(letters, nil_class, max_basis)
    rng = np.random.default_rng(seed)
    failures = _CHECKS[suite](ctx, rng, trials)
    if failures:
        logger.error(f"Suite {suite} in ctx({letters}, {nil_class}): {failures} failures in {trials} trials")
    else:
        logger.info(f"Suite {suite} in ctx({letters}, {nil_class}): {trials} trials passed")
    return {"suite": suite, "letters": letters, "class": nil_class,
            "trials": trials, "failures": failures}


def run_all(letters: int, nil_class: int, trials: int, seed: int = 0,
            max_basis: int = DEFAULT_MAX_BASIS) -> List[Dict[str, object]]:
    """Every suite that applies in ctx(letters, nil_class); power needs class >= 2."""
    return [run_suite(name, letters, nil_class, trials, seed, max_basis) for name in SUITES
            if name != "power" or nil_class >= 2]
