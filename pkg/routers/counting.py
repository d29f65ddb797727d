"""
Counting router: Lambda_q and the dual function.
"""
import argparse

from dependencies import emit, emit_and_save, load_instance, load_set, load_signal, load_triple
from models.signal import Signal
from schemas.progression import CountReport
from services.progression_service import ProgressionService
from utils.files import signal_payload, write_signal, write_witnesses


def count(args: argparse.Namespace) -> int:
    """
    Lambda_q of three signals, or of one set with its witness count.

    For a set, --out receives the witnesses as x,y CSV rows.
    """
    inst = load_instance(args)
    if args.set is not None and args.f0 is None and args.f1 is None and args.f2 is None:
        A = load_set(args)
        f = Signal.indicator(A)
        value = ProgressionService.lambda_(f, f, f, inst)
        found = ProgressionService.enumerate_progressions(A, inst)
        emit(CountReport(lambda_=value, witnesses=len(found), N=inst.N, q=inst.q, M=inst.M))
        if args.out is not None:
            write_witnesses(found, args.out)
        return 0
    f0, f1, f2 = load_triple(args)
    value = ProgressionService.lambda_(f0, f1, f2, inst)
    emit_and_save(CountReport(lambda_=value, N=inst.N, q=inst.q, M=inst.M), args.out)
    return 0


def dual(args: argparse.Namespace) -> int:
    """F(x) = E_y f0(x - qy^2) f1(x + y - qy^2) as a Signal JSON."""
    inst = load_instance(args)
    F = ProgressionService.dual_function(load_signal(args, "f0"), load_signal(args, "f1"), inst)
    emit(signal_payload(F))
    if args.out is not None:
        write_signal(F, args.out)
    return 0


def register(subparsers, parents: list) -> None:
    subparsers.add_parser("count", parents=parents, help="Lambda_q(f0, f1, f2)").set_defaults(handler=count)
    subparsers.add_parser("dual", parents=parents, help="Dual function of (f0, f1)").set_defaults(handler=dual)
