"""
Subcommand handlers. Each returns an Outcome; exceptions are mapped to exit
codes by cli.app.
"""

import argparse
from dataclasses import dataclass
from typing import Any, Dict

from cli.expr import format_normal_form, parse_word
from core.baer import BaerInput, baer_engine, baer_formula, equivalence_sweep, relation_rows
from core.collect import make_context
from core.cover import (Verdict, construct_c1_cover, exhaustive_search, search_agrees_with_verdict,
                        search_order, stem_cover_verdict)
from core.errors import EngineInvariantError, InvalidArgumentError
from core.fingroup import is_stem_cover, materialize, summary
from core.hall import generate_hall_basis, parse_bracket, witt_table
from core.pcp import format_pcp, parse_pcp, pcp_consistency_check
from core.verify import run_all, run_suite
from database.golden_store import GoldenStore, golden_key
from utils.config import Config
from utils.logger import logger

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INCONSISTENT = 2
EXIT_GUARD = 3


@dataclass
class Outcome:
    input: Dict[str, Any]
    result: Any
    exit_code: int = EXIT_OK


def cmd_hall(args: argparse.Namespace, config: Config) -> Outcome:
    echo = {"letters": args.letters, "weight": args.weight, "count_only": args.count_only}
    basis = generate_hall_basis(args.letters, args.weight, config.get_int("max_basis"))
    table = [{"weight": m, "count": n} for m, n in enumerate(basis.block_sizes(), start=1)]
    if table != witt_table(args.letters, args.weight):
        raise EngineInvariantError(f"Hall block sizes {table} disagree with the Witt formula")
    result: Dict[str, Any] = {"table": table, "total": len(basis)}
    if args.locate:
        bracket = parse_bracket(args.locate, basis)
        try:
            index = basis.index_of(bracket)
        except KeyError:
            raise InvalidArgumentError(f"{args.locate} has weight above {args.weight}") from None
        result["located"] = {"bracket": str(bracket), "index": index + 1, "weight": bracket.weight}
    if not args.count_only:
        result["items"] = [str(b) for b in basis]
    return Outcome(echo, result)


def cmd_nf(args: argparse.Namespace, config: Config) -> Outcome:
    echo = {"letters": args.letters, "class": args.nil_class, "expr": args.expr}
    ctx = make_context(args.letters, args.nil_class, config.get_int("max_basis"))
    element = parse_word(args.expr, ctx)
    result = {
        "exponents": list(element.exponents),
        "normal_form": format_normal_form(element),
        "weight": element.weight_of(),
    }
    return Outcome(echo, result)


def cmd_baer(args: argparse.Namespace, config: Config) -> Outcome:
    data = BaerInput(args.r, args.s, args.c)
    echo = dict(data.to_dict(), method=args.method)
    max_class = config.get_int("max_class")
    max_basis = config.get_int("max_basis")
    result: Dict[str, Any] = {"d": data.d, "n": data.n}
    exit_code = EXIT_OK

    if args.method == "formula":
        result["invariants"] = baer_formula(data).to_list()
    else:
        engine = baer_engine(data, max_class, max_basis)
        result["invariants"] = engine.to_list()
        if args.method == "both":
            result["agree"] = engine == baer_formula(data)
            if not result["agree"]:
                logger.error(f"Engine result {engine} disagrees with the closed formula for {data}")
                exit_code = EXIT_INCONSISTENT
        if args.show_rows:
            result["rows"] = [list(row) for row in relation_rows(data, max_class, max_basis)]
    return Outcome(echo, result, exit_code)


def cmd_pcp(args: argparse.Namespace, config: Config) -> Outcome:
    with open(args.file, "r") as f:
        pcp = parse_pcp(f.read())
    echo = {"file": args.file, "mode": "materialize" if args.materialize else "check"}
    consistent = pcp_consistency_check(pcp)
    result: Dict[str, Any] = {"p": pcp.p, "m": pcp.m, "order": pcp.order,
                              "consistent": consistent, "presentation": format_pcp(pcp)}
    if args.materialize:
        G = materialize(pcp, max_order=config.get_int("max_order"),
                        exhaustive_limit=config.get_int("associativity_exhaustive_limit"))
        result["group"] = summary(G)
    return Outcome(echo, result)


def cmd_cover_verdict(args: argparse.Namespace, config: Config) -> Outcome:
    data = BaerInput(args.r, args.s, args.c)
    verdict = stem_cover_verdict(data, max_order=config.get_int("max_order"))
    return Outcome(data.to_dict(), verdict.to_dict())


def cmd_cover_construct(args: argparse.Namespace, config: Config) -> Outcome:
    data = BaerInput(args.r, args.s, 1)
    G, A = construct_c1_cover(args.r, args.s, max_order=config.get_int("max_order"),
                              exhaustive_limit=config.get_int("associativity_exhaustive_limit"))
    passed = is_stem_cover(G, A, data)
    result = dict(summary(G), subgroup_order=A.order)
    result["pass"] = passed
    return Outcome({"r": args.r, "s": args.s}, result, EXIT_OK if passed else EXIT_INCONSISTENT)


def cmd_cover_search(args: argparse.Namespace, config: Config) -> Outcome:
    p = args.p if args.p is not None else args.r
    data = BaerInput(args.r, args.s, args.c)
    echo = dict(data.to_dict(), p=p)
    limit = min(config.get_int("search_max_order"), config.get_int("max_order"))
    workers = args.workers if args.workers is not None else config.get_int("workers")
    cert = exhaustive_search(data, p, max_order=limit, workers=workers,
                             exhaustive_limit=config.get_int("associativity_exhaustive_limit"))
    verdict = stem_cover_verdict(data, max_order=config.get_int("max_order"))
    agrees = search_agrees_with_verdict(verdict, cert)

    result = cert.to_dict()
    result.update(order=search_order(data, p), verdict=verdict.verdict.value, agrees=agrees)

    store = GoldenStore(config.get("golden_file"))
    key = golden_key(data.r, data.s, data.c, p)
    if args.record_golden:
        result["golden"] = "recorded" if agrees and store.record(key, result) else "not recorded"
    elif store.lookup(key) is None:
        result["golden"] = "absent"
    else:
        result["golden"] = "match" if store.compare(key, result) else "mismatch"

    if not agrees:
        expected = "no" if verdict.verdict is Verdict.NONE_EXISTS else "at least one"
        logger.error(f"Search for {data} found {cert.passing} stem covers, expected {expected}")
    return Outcome(echo, result, EXIT_OK if agrees else EXIT_INCONSISTENT)


def cmd_sweep(args: argparse.Namespace, config: Config) -> Outcome:
    echo = {"r_max": args.r_max, "s_max": args.s_max, "c_max": args.c_max}
    workers = args.workers if args.workers is not None else config.get_int("workers")
    rows = equivalence_sweep(args.r_max, args.s_max, args.c_max, workers=workers,
                             max_class=config.get_int("max_class"))
    agree = all(row["agree"] for row in rows)
    result = {"count": len(rows), "agree": agree,
              "failures": [row for row in rows if not row["agree"]]}
    if args.rows:
        result["rows"] = rows
    return Outcome(echo, result, EXIT_OK if agree else EXIT_INCONSISTENT)


def cmd_check(args: argparse.Namespace, config: Config) -> Outcome:
    seed = getattr(args, "seed", 0)
    echo = {"suite": args.suite, "letters": args.letters, "class": args.nil_class,
            "trials": args.trials, "seed": seed}
    max_basis = config.get_int("max_basis")
    if args.suite == "all":
        rows = run_all(args.letters, args.nil_class, args.trials, seed, max_basis=max_basis)
        result = {"suites": rows, "failures": sum(row["failures"] for row in rows)}
    else:
        result = run_suite(args.suite, args.letters, args.nil_class, args.trials, seed,
                           max_basis=max_basis)
    return Outcome(echo, result, EXIT_OK if result["failures"] == 0 else EXIT_INCONSISTENT)
