"""
Argument loaders and report emission shared by the command routers.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Optional, TypeVar

from pydantic import ValidationError

from exceptions import ParameterError
from models.signal import Signal
from schemas.params import DELTA_NAMES, Params
from schemas.progression import ProgressionInstance
from schemas.run import RunConfig
from utils.files import dumps, read_set, read_signal, write_json

logger = logging.getLogger(__name__)

T = TypeVar("T")

INPUT_FLAGS = ("set", "input", "f0", "f1", "f2")


def validated(build: Callable[..., T], **fields: Any) -> T:
    """
    Build a schema from CLI values.

    Raises:
        ParameterError: With the first validation message
    """
    try:
        return build(**fields)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first.get("loc", ())) or "arguments"
        raise ParameterError(f"{where}: {first.get('msg', 'invalid value')}") from None


def require(args: argparse.Namespace, name: str):
    value = getattr(args, name, None)
    if value is None:
        raise ParameterError(f"--{name.replace('_', '-')} is required for {args.command}")
    return value


def load_set(args: argparse.Namespace) -> list[int]:
    return read_set(require(args, "set"))


def load_signal(args: argparse.Namespace, name: str = "input") -> Signal:
    """The signal named by --<name>, falling back to the indicator of --set."""
    path = getattr(args, name, None)
    if path is not None:
        return read_signal(path)
    if getattr(args, "set", None) is not None:
        return Signal.indicator(read_set(args.set))
    raise ParameterError(f"--{name} or --set is required for {args.command}")


def load_triple(args: argparse.Namespace) -> tuple[Signal, Signal, Signal]:
    """(f0, f1, f2) from --f0/--f1/--f2, each defaulting to --input or --set."""
    fallback = None
    signals = []
    for name in ("f0", "f1", "f2"):
        if getattr(args, name, None) is not None:
            signals.append(read_signal(getattr(args, name)))
            continue
        if fallback is None:
            fallback = load_signal(args, "input")
        signals.append(fallback)
    return signals[0], signals[1], signals[2]


def deltas_from_args(args: argparse.Namespace) -> dict[str, str]:
    return {name: getattr(args, name) for name in DELTA_NAMES if getattr(args, name, None) is not None}


def load_params(args: argparse.Namespace) -> Params:
    return validated(Params, N=require(args, "N"), q=args.q, deltas=deltas_from_args(args))


def load_instance(args: argparse.Namespace) -> ProgressionInstance:
    return validated(ProgressionInstance, N=require(args, "N"), q=args.q)


def parse_int_list(text: Optional[str], name: str) -> list[int]:
    if text is None:
        raise ParameterError(f"--{name} is required")
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ParameterError(f"--{name} must be a comma separated list of integers, got {text!r}") from None


def run_config(args: argparse.Namespace) -> RunConfig:
    """Everything about an invocation that determines its output."""
    skip = set(INPUT_FLAGS) | set(DELTA_NAMES) | {"command", "handler", "N", "q", "seed", "trials", "out", "verbose"}
    flags = {k: v for k, v in vars(args).items() if k not in skip and v is not None}
    inputs = {k: str(getattr(args, k)) for k in INPUT_FLAGS if getattr(args, k, None) is not None}
    return validated(
        RunConfig,
        command=args.command,
        inputs=inputs,
        N=args.N,
        q=args.q,
        deltas={k: str(v) for k, v in deltas_from_args(args).items()},
        seed=args.seed,
        trials=args.trials,
        out=str(args.out) if args.out else None,
        flags=flags,
    )


def emit(report: Any) -> None:
    """Write a report to stdout as 17-digit JSON."""
    sys.stdout.write(dumps(report))


def emit_and_save(report: Any, out: Optional[Path]) -> None:
    emit(report)
    if out is not None:
        write_json(report, out)
        logger.info(f"Wrote {out}")
