"""
Increment router: one density-increment search and the full iteration.
"""
import argparse

from dependencies import emit, emit_and_save, load_instance, load_set, require
from schemas.increment import IncrementTrace
from services.increment_service import IncrementService
from utils.files import csv_text, write_text

TRACE_COLUMNS = ("i", "N_i", "q_i", "alpha_i", "qprime", "a", "Nprime", "alpha_new", "status")


def trace_csv(trace: IncrementTrace) -> str:
    """One row per step, then a terminal row with the final state and status."""
    rows = [
        (s.i, s.N_i, s.q_i, s.alpha_i, s.qprime, s.a, s.Nprime, s.alpha_new, "step")
        for s in trace.steps
    ]
    rows.append((len(trace.steps), trace.final_N, trace.final_q, trace.final_alpha,
                 None, None, None, None, trace.status))
    return csv_text(TRACE_COLUMNS, rows)


def increment(args: argparse.Namespace) -> int:
    inst = load_instance(args)
    nprime_max = args.nprime_max or inst.M
    step = IncrementService.find_increment(
        load_set(args),
        inst,
        args.qmax or 4,
        args.nprime_min or max(1, nprime_max // 2),
        nprime_max,
    )
    emit_and_save(step, args.out)
    return 0


def iterate(args: argparse.Namespace) -> int:
    """Trace JSON on stdout; the CSV trace goes to --out."""
    trace = IncrementService.iterate_increment(
        load_set(args),
        require(args, "N"),
        max_steps=args.max_steps if args.max_steps is not None else 10,
        qprime_max=args.qmax or 4,
        Nprime_min=args.nprime_min,
        Nprime_max=args.nprime_max,
        q=args.q,
        floor=args.floor,
    )
    emit(trace)
    if args.out is not None:
        write_text(trace_csv(trace), args.out)
    return 0


def register(subparsers, parents: list) -> None:
    subparsers.add_parser("increment", parents=parents, help="Densest subprogression window").set_defaults(handler=increment)
    subparsers.add_parser("iterate", parents=parents, help="Density-increment iteration").set_defaults(handler=iterate)
