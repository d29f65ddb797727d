"""
Concatenation router: the arithmetic box inverse and the two-sided experiment.
"""
import argparse
from fractions import Fraction
from pathlib import Path

from dependencies import deltas_from_args, emit, emit_and_save, load_params, load_signal, require
from models.signal import Signal
from services.concatenation_service import ConcatenationService
from utils.files import write_json, write_signal
from utils.numbers import to_fraction


def invertbox(args: argparse.Namespace) -> int:
    """
    Factor f as l * r with r c-periodic.

    With --out DIR, writes l.json and r.json (r over the window of f) and
    metrics.json; the metrics also go to stdout.
    """
    f = load_signal(args)
    deltas = deltas_from_args(args)
    pair, report = ConcatenationService.invert_arithmetic_box_report(
        f,
        require(args, "c"),
        require(args, "d"),
        delta2=to_fraction(deltas.get("delta2", 1), "delta2"),
        grid_factor=args.grid_factor,
        epsilon=to_fraction(deltas.get("epsilon", Fraction(1, 10)), "epsilon"),
    )
    emit(report)
    if args.out is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_signal(pair.l, out / "l.json")
        write_signal(pair.r_signal(f.lo, f.hi) if not f.is_zero else Signal.zero(), out / "r.json")
        write_json(report, out / "metrics.json")
    return 0


def concat(args: argparse.Namespace) -> int:
    params = load_params(args)
    report = ConcatenationService.concat_experiment(
        load_signal(args),
        params,
        params.delta("delta1"),
        params.delta("delta2"),
        params.delta("delta3"),
        mode=args.mode,
        seed=args.seed,
    )
    emit_and_save(report, args.out)
    return 0


def register(subparsers, parents: list) -> None:
    subparsers.add_parser("invertbox", parents=parents, help="Arithmetic box-norm inverse").set_defaults(handler=invertbox)
    subparsers.add_parser("concat", parents=parents, help="Box average against local U^5").set_defaults(handler=concat)
