"""
Uniformity toolkit - command line entry point.
"""
import argparse
import json
import logging
import sys
import traceback
from pathlib import Path
from typing import Optional, Sequence

from config import settings
from dependencies import run_config
from exceptions import UniformityError
from routers import ROUTERS

logger = logging.getLogger(__name__)


def common_arguments() -> argparse.ArgumentParser:
    """Flags shared by every subcommand; each handler reads the ones it needs."""
    common = argparse.ArgumentParser(add_help=False)
    inputs = common.add_argument_group("inputs")
    inputs.add_argument("--set", type=Path, help="Set file: ascending integers, one per line")
    inputs.add_argument("--input", type=Path, help="Signal JSON, or a set file read as its indicator")
    for name in ("f0", "f1", "f2"):
        inputs.add_argument(f"--{name}", type=Path, help=f"Signal {name}")

    scale = common.add_argument_group("scale")
    scale.add_argument("--N", type=int)
    scale.add_argument("--q", type=int, default=1)
    scale.add_argument("--s", type=int)
    scale.add_argument("--u", type=int)
    scale.add_argument("--width", type=int)
    for name in ("delta", "delta1", "delta2", "delta3", "delta4", "delta5", "delta6", "gamma", "epsilon"):
        scale.add_argument(f"--{name}", help="Rational in (0, 1], e.g. 1/2")

    search = common.add_argument_group("search")
    search.add_argument("--qmax", type=int)
    search.add_argument("--nprime-min", type=int)
    search.add_argument("--nprime-max", type=int)
    search.add_argument("--max-steps", type=int)
    search.add_argument("--floor", type=int, help="Stop iterating below this N_i")
    search.add_argument("--c", type=int)
    search.add_argument("--d", type=int)
    search.add_argument("--b", type=int)
    search.add_argument("--alpha", type=float)
    search.add_argument("--tmax", type=int)
    search.add_argument("--target-eps", type=float)
    search.add_argument("--grid-factor", type=int)
    search.add_argument("--steps", help="Comma separated direction steps")
    search.add_argument("--lengths", help="Comma separated direction lengths")

    fixtures = common.add_argument_group("fixtures")
    fixtures.add_argument("--kind")
    fixtures.add_argument("--qprime", type=int)
    fixtures.add_argument("--a", type=int)
    fixtures.add_argument("--nprime", type=int)
    fixtures.add_argument("--alpha-in", type=float)
    fixtures.add_argument("--alpha-out", type=float)

    run = common.add_argument_group("run")
    run.add_argument("--suite")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--trials", type=int, default=100)
    run.add_argument("--mode", help="paper|derived for lemma64, exact|montecarlo for averages")
    run.add_argument("--out", type=Path)
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uniformity",
        description="Gowers norms, progression counts and density increments at desk scale.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr")
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="command")
    parents = [common_arguments()]
    for router in ROUTERS:
        router.register(subparsers, parents)
    return parser


def configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose or settings.DEBUG else getattr(logging, settings.LOG_LEVEL.upper(), logging.WARNING)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


def report_error(detail: str) -> None:
    payload = {"detail": detail}
    if settings.DEBUG:
        payload["traceback"] = traceback.format_exc()
    sys.stderr.write(json.dumps(payload, indent=2) + "\n")


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse arguments, dispatch to a command handler and map errors to exit codes.

    Returns:
        0 on success, 1 for failed verification, 2 for bad arguments,
        3 for malformed files, 4 for infeasible evaluations
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    configure_logging(args.verbose)
    try:
        config = run_config(args)
        logger.debug(f"Running {config.model_dump_json()}")
        return args.handler(args)
    except UniformityError as exc:
        logger.error(f"{args.command} failed: {exc.detail}", exc_info=settings.DEBUG)
        report_error(exc.detail)
        return exc.exit_code
    except Exception as exc:
        logger.error(f"{args.command} crashed: {type(exc).__name__}: {exc}", exc_info=True)
        report_error(f"Internal error: {exc}")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
