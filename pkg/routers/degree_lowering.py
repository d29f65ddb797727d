"""
Degree lowering router: the major-arc pipeline and denominator search.
"""
import argparse

from dependencies import emit_and_save, load_instance, load_signal, require
from services.degree_lowering_service import DegreeLoweringService
from utils.numbers import to_fraction


def degree_lower(args: argparse.Namespace) -> int:
    inst = load_instance(args)
    report = DegreeLoweringService.degree_lower_report(
        load_signal(args, "f0"),
        load_signal(args, "f1"),
        inst,
        u=args.u or 1,
        s=args.s or 3,
        gamma=float(to_fraction(args.gamma, "gamma")) if args.gamma is not None else 0.01,
        tmax=args.tmax or 16,
        target_eps=args.target_eps,
    )
    emit_and_save(report, args.out)
    return 0


def denom(args: argparse.Namespace) -> int:
    """
    argmin_t ||q^2 t alpha||; with --gamma also the split of alpha around a/(q^2 t).
    """
    alpha = require(args, "alpha")
    result = DegreeLoweringService.find_denominator(alpha, args.q, args.tmax or 16, args.target_eps)
    report = {"denominator": result}
    if args.gamma is not None:
        report["decomposition"] = DegreeLoweringService.decompose(
            alpha, result.a, args.q * args.q * result.t, float(to_fraction(args.gamma, "gamma")), 4, t=result.t
        )
    emit_and_save(report, args.out)
    return 0


def register(subparsers, parents: list) -> None:
    subparsers.add_parser(
        "degree-lower", parents=parents, help="Degree-lowering pipeline on a dual function"
    ).set_defaults(handler=degree_lower)
    subparsers.add_parser("denom", parents=parents, help="Major-arc denominator search").set_defaults(handler=denom)
