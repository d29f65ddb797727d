"""
Box average router: the triple box-norm average and the b-norm.
"""
import argparse

from dependencies import emit, emit_and_save, load_params, load_signal
from schemas.norms import BoxAverageResult
from services.concatenation_service import ConcatenationService
from services.vdc_service import VdcService
from utils.files import csv_text, write_text


def boxavg(args: argparse.Namespace) -> int:
    params = load_params(args)
    report = VdcService.triple_box_average_report(
        load_signal(args), params, params.delta("delta2"), params.delta("delta3"), mode=args.mode, seed=args.seed
    )
    emit_and_save(report, args.out)
    return 0


def bnorm(args: argparse.Namespace) -> int:
    """
    ||f||_b^4 for one --b, or a sweep over every b with a CSV written to --out.
    """
    f = load_signal(args)
    params = load_params(args)
    delta1, delta2 = params.delta("delta1"), params.delta("delta2")
    if args.b is not None:
        value = ConcatenationService.b_norm_pow(f, args.b, params, delta1, delta2)
        report = BoxAverageResult(value=value, pairs_evaluated=params.scaled("delta1"), mode="exact")
        emit_and_save(report, args.out)
        return 0
    epsilon = params.deltas.get("epsilon", delta1)
    sweep = ConcatenationService.b_norm_sweep(f, params, delta1, delta2, epsilon)
    emit(sweep)
    if args.out is not None:
        rows = [(row.b, row.value, row.exceptional) for row in sweep.rows]
        write_text(csv_text(("b", "value", "exceptional"), rows), args.out)
    return 0


def register(subparsers, parents: list) -> None:
    subparsers.add_parser("boxavg", parents=parents, help="Triple box-norm average").set_defaults(handler=boxavg)
    subparsers.add_parser("bnorm", parents=parents, help="b-norm value or sweep").set_defaults(handler=bnorm)
