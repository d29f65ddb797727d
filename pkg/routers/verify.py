"""
Verify router: seeded verification suites and fixture generation.
"""
import argparse

from dependencies import emit, emit_and_save, load_instance, require
from exceptions import ParameterError
from models.signal import Signal
from services.progression_service import ProgressionService
from services.verify_service import VerifyService
from utils.files import signal_payload, write_set, write_signal
from utils.prng import SplitMix64

GEN_KINDS = ("greedy-free", "planted", "interval", "random-set", "random-signal")


def verify(args: argparse.Namespace) -> int:
    """Exit status 1 when any trial fails."""
    report = VerifyService.run(
        require(args, "suite"),
        args.trials,
        args.seed,
        width=args.width or 16,
        mode=args.mode or "derived",
        N=args.N,
    )
    emit_and_save(report, args.out)
    return 0 if report.passed else 1


def _generate(args: argparse.Namespace) -> list[int] | Signal:
    kind = require(args, "kind")
    if kind == "greedy-free":
        return ProgressionService.greedy_free_set(load_instance(args))
    if kind == "planted":
        N = require(args, "N")
        return ProgressionService.planted_increment_set(
            N,
            args.q,
            args.qprime or 1,
            require(args, "a"),
            require(args, "nprime"),
            require(args, "alpha_in"),
            require(args, "alpha_out"),
            args.seed,
        )
    if kind == "interval":
        return list(range(1, require(args, "N") + 1))
    if kind == "random-set":
        density = args.alpha if args.alpha is not None else 0.5
        if not 0 <= density <= 1:
            raise ParameterError(f"--alpha must lie in [0, 1] for random-set, got {density}")
        return SplitMix64(args.seed).subset(require(args, "N"), density)
    if kind == "random-signal":
        width = args.width or 16
        return Signal.from_values(1, SplitMix64(args.seed).bounded_complex(width), exact=False)
    raise ParameterError(f"unknown kind {kind!r}; choose from {', '.join(GEN_KINDS)}")


def gen(args: argparse.Namespace) -> int:
    """
    Write a fixture to --out: a set file, or Signal JSON for random-signal.
    """
    fixture = _generate(args)
    if isinstance(fixture, Signal):
        summary = {"kind": args.kind, "width": fixture.width, "signal": signal_payload(fixture)}
        if args.out is not None:
            write_signal(fixture, args.out)
    else:
        summary = {"kind": args.kind, "N": args.N, "size": len(fixture), "elements": fixture}
        if args.out is not None:
            write_set(fixture, args.out)
    emit(summary)
    return 0


def register(subparsers, parents: list) -> None:
    subparsers.add_parser("verify", parents=parents, help="Run a verification suite").set_defaults(handler=verify)
    subparsers.add_parser("gen", parents=parents, help="Generate a fixture").set_defaults(handler=gen)
