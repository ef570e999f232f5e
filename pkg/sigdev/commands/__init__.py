"""Command modules and the flag handling they share."""

import argparse
from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path
from typing import Any, NamedTuple

from sigdev.config import FORMATS, SCHEMES, Settings, with_overrides


class Outcome(NamedTuple):
    status: int = 0
    result: dict[str, Any] | None = None


@dataclass(frozen=True)
class Command:
    run: Callable[[argparse.Namespace, Settings], Outcome]
    configure: Callable[[argparse.ArgumentParser], None]


def int_list(raw: str) -> list[int]:
    """``"10,50,200"`` -> [10, 50, 200]; the empty string gives []."""
    try:
        return [int(x) for x in raw.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {raw!r}") from None


def build_parser(name: str, command: Command) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=f"sigdev {name}", allow_abbrev=False)
    parser.add_argument("--scheme", choices=SCHEMES)
    parser.add_argument("--lambda", dest="dyadic_order", type=int, metavar="L", help="dyadic order")
    parser.add_argument("--matrix-dim", type=int, metavar="N")
    parser.add_argument("--mc-samples", type=int, metavar="M")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--tol", type=float)
    parser.add_argument("--format", dest="fmt", choices=FORMATS)
    parser.add_argument("--workers", type=int)
    parser.add_argument("--log", type=Path)
    parser.add_argument("--out", type=Path, help="write results here instead of stdout")
    command.configure(parser)
    return parser


def settings_from(ns: argparse.Namespace, base: Settings) -> Settings:
    return with_overrides(
        base,
        scheme=ns.scheme,
        dyadic_order=ns.dyadic_order,
        matrix_dim=ns.matrix_dim,
        mc_samples=ns.mc_samples,
        seed=ns.seed,
        tol=ns.tol,
        fmt=ns.fmt,
        workers=ns.workers,
        log=ns.log,
    )
