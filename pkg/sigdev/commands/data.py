"""Data commands: genfbm."""

import argparse
import sys

from sigdev.commands import Outcome
from sigdev.config import Settings
from sigdev.errors import DomainError
from sigdev.formats import path_csv_text, paths_jsonl_text, write_text
from sigdev.paths import gen_fbm


def configure_genfbm(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--hurst", type=float, default=0.75)
    parser.add_argument("--n-points", type=int, default=16)
    parser.add_argument("--dim", type=int, default=1)
    parser.add_argument("--count", type=int, default=1, help="paths to draw; more than one writes JSON Lines")


def cmd_genfbm(ns: argparse.Namespace, settings: Settings) -> Outcome:
    """One path as CSV, or ``--count`` paths (seeds seed, seed+1, ...) as JSON Lines."""
    if ns.count < 1:
        raise DomainError("--count must be >= 1")
    jsonl = ns.count > 1 or (ns.out is not None and ns.out.suffix == ".jsonl")
    paths = [(f"fbm-{i}", gen_fbm(ns.hurst, ns.n_points, ns.dim, settings.seed + i)) for i in range(ns.count)]
    text = paths_jsonl_text(paths) if jsonl else path_csv_text(paths[0][1])
    if ns.out is None:
        sys.stdout.write(text)
    else:
        write_text(ns.out, text)
        print(f"Wrote {ns.count} path(s) to {ns.out}", file=sys.stderr)
    return Outcome(0, {"count": ns.count, "format": "jsonl" if jsonl else "csv"})
