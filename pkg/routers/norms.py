"""
Norms router: U^s norms and box norms of a signal.
"""
import argparse

from dependencies import emit_and_save, load_signal, parse_int_list, require, validated
from exceptions import ParameterError
from schemas.norms import BoxSpec, NormReport
from services.gowers_service import GowersService, u_norm_root


def norm(args: argparse.Namespace) -> int:
    """
    ||f||_{U^s}^{2^s}, localized to u + qZ when --u is given.
    """
    f = load_signal(args)
    s = require(args, "s")
    if args.u is not None:
        power = GowersService.u_norm_local_pow(f, s, args.u, args.q)
    else:
        power = GowersService.u_norm_pow(f, s)
    report = NormReport(
        s=s,
        power=power,
        norm=u_norm_root(power, s),
        u=args.u,
        q=args.q if args.u is not None else None,
        width=f.width,
        exact=f.exact_integer,
    )
    emit_and_save(report, args.out)
    return 0


def box(args: argparse.Namespace) -> int:
    """
    Box norm with directions step_i * [length_i].

    A single --lengths value applies to every step.
    """
    f = load_signal(args)
    steps = parse_int_list(args.steps, "steps")
    lengths = parse_int_list(args.lengths, "lengths")
    if len(lengths) == 1:
        lengths = lengths * len(steps)
    if not steps or len(lengths) != len(steps):
        raise ParameterError(f"need one length per step, got steps={steps}, lengths={lengths}")
    spec = validated(BoxSpec, directions=[{"step": step, "length": n} for step, n in zip(steps, lengths)])
    power = GowersService.box_norm_pow(f, spec)
    report = {
        "power": power,
        "norm": u_norm_root(power, len(steps)),
        "steps": steps,
        "lengths": lengths,
        "width": f.width,
        "exact": f.exact_integer,
    }
    emit_and_save(report, args.out)
    return 0


def register(subparsers, parents: list) -> None:
    subparsers.add_parser("norm", parents=parents, help="U^s norm of a signal").set_defaults(handler=norm)
    subparsers.add_parser("box", parents=parents, help="Box norm along given directions").set_defaults(handler=box)
