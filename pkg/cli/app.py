"""
Command-line entry point: argument grammar and dispatch.

Exit codes: 0 success, 1 usage or argument error, 2 theorem-inconsistent
result or failed self-check, 3 resource guard tripped.
"""

import argparse
import sys
import time
from typing import List, Optional

from cli.commands import (EXIT_GUARD, EXIT_INCONSISTENT, EXIT_OK, EXIT_USAGE, cmd_baer,
                          cmd_check, cmd_cover_construct, cmd_cover_search, cmd_cover_verdict,
                          cmd_hall, cmd_nf, cmd_pcp, cmd_sweep)
from cli.output import envelope, render
from core.errors import EngineInvariantError, NilCoverError, ResourceGuardError
from core.verify import SUITES
from utils.config import Config
from utils.logger import logger, set_level

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


class UsageError(Exception):
    pass


class CliParser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors as exceptions instead of exiting with 2."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _global_options() -> argparse.ArgumentParser:
    # SUPPRESS keeps a subparser from overwriting a flag given before the subcommand
    common = CliParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="Print the JSON envelope")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="Seed for randomized checks")
    common.add_argument("--max-basis", type=int, default=argparse.SUPPRESS,
                        help="Cap on Hall basis size")
    common.add_argument("--max-order", type=int, default=argparse.SUPPRESS,
                        help="Cap on materialized group order")
    common.add_argument("--config", default=argparse.SUPPRESS, help="Configuration file")
    common.add_argument("--log-level", choices=LOG_LEVELS, default=argparse.SUPPRESS,
                        help="Diagnostics level on stderr")
    return common


def build_parser() -> CliParser:
    common = _global_options()
    parser = CliParser(prog="nilcover", parents=[common],
                       description="Baer invariants and N_c stem covers of Z_r + Z_s")
    sub = parser.add_subparsers(dest="command", parser_class=CliParser)

    p = sub.add_parser("hall", parents=[common], help="Enumerate the Hall basis")
    p.add_argument("--letters", type=int, required=True)
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--locate", metavar="BRACKET", help="Position of a basic commutator, e.g. '[[x2,x1],x1]'")
    p.set_defaults(handler=cmd_hall)

    p = sub.add_parser("nf", parents=[common], help="Normal form of a word in F/gamma_{w+1}")
    p.add_argument("--letters", type=int, required=True)
    p.add_argument("--class", dest="nil_class", type=int, required=True)
    p.add_argument("--expr", required=True, help="e.g. 'x1^2 [x2,x1]^-1 (x1 x2)^3'")
    p.set_defaults(handler=cmd_nf)

    p = sub.add_parser("baer", parents=[common], help="Baer invariant of Z_r + Z_s")
    _add_rsc(p)
    p.add_argument("--method", choices=("formula", "engine", "both"), default="both")
    p.add_argument("--show-rows", action="store_true", help="Include the relation lattice rows")
    p.set_defaults(handler=cmd_baer)

    p = sub.add_parser("pcp", parents=[common], help="Check or materialize a presentation file")
    p.add_argument("--file", required=True)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--check", action="store_true")
    mode.add_argument("--materialize", action="store_true")
    p.set_defaults(handler=cmd_pcp)

    cover = sub.add_parser("cover", parents=[common], help="Stem covers")
    cover_sub = cover.add_subparsers(dest="cover_command", parser_class=CliParser)
    p = cover_sub.add_parser("verdict", parents=[common])
    _add_rsc(p)
    p.set_defaults(handler=cmd_cover_verdict)
    p = cover_sub.add_parser("construct", parents=[common])
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.set_defaults(handler=cmd_cover_construct)
    p = cover_sub.add_parser("search", parents=[common])
    _add_rsc(p)
    p.add_argument("--p", type=int, default=None, help="Prime (defaults to r)")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--record-golden", action="store_true")
    p.set_defaults(handler=cmd_cover_search)

    p = sub.add_parser("sweep", parents=[common], help="Formula against engine over a range")
    p.add_argument("--r-max", type=int, default=12)
    p.add_argument("--s-max", type=int, default=12)
    p.add_argument("--c-max", type=int, default=5)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--rows", action="store_true", help="Include every row")
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("check", parents=[common], help="Randomized property suites")
    p.add_argument("--suite", choices=SUITES + ("all",), required=True)
    p.add_argument("--letters", type=int, default=2)
    p.add_argument("--class", dest="nil_class", type=int, default=3)
    p.add_argument("--trials", type=int, default=1000)
    p.set_defaults(handler=cmd_check)

    return parser


def _add_rsc(p: argparse.ArgumentParser) -> None:
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--c", type=int, required=True)


def _load_config(args: argparse.Namespace) -> Config:
    config = Config(args.config) if hasattr(args, "config") else Config()
    overrides = {key: getattr(args, key) for key in ("max_basis", "max_order") if hasattr(args, key)}
    config.update(overrides)
    return config


def _subcommand_name(args: argparse.Namespace) -> str:
    if args.command == "cover":
        return f"cover {args.cover_command}"
    return args.command


def dispatch(argv: Optional[List[str]] = None) -> int:
    """
    Parse argv, run the subcommand and print its envelope to stdout.

    Returns:
        int: Process exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        logger.error(f"Usage error: {e}")
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return int(e.code or 0)
    if not hasattr(args, "handler"):
        parser.print_usage(sys.stderr)
        logger.error("No subcommand given")
        return EXIT_USAGE

    config = _load_config(args)
    set_level(getattr(args, "log_level", None) or config.get("log_level", "INFO"))
    name = _subcommand_name(args)

    start = time.perf_counter()
    try:
        outcome = args.handler(args, config)
    except ResourceGuardError as e:
        logger.error(f"{name}: resource guard: {e}")
        return EXIT_GUARD
    except EngineInvariantError as e:
        logger.error(f"{name}: internal check failed: {e}")
        return EXIT_INCONSISTENT
    except NilCoverError as e:
        logger.error(f"{name}: {e}")
        return EXIT_USAGE
    except OSError as e:
        logger.error(f"{name}: {e}")
        return EXIT_USAGE
    elapsed_ms = (time.perf_counter() - start) * 1000.0

    env = envelope(name, outcome.input, outcome.result, elapsed_ms)
    print(render(env, getattr(args, "json", False)))
    if outcome.exit_code != EXIT_OK:
        logger.warning(f"{name} finished with exit code {outcome.exit_code}")
    return outcome.exit_code
