"""Kernel commands: kernel, gram, mmd, pcfd."""

import argparse
import sys
from pathlib import Path as FilePath
from typing import Any

from sigdev.commands import Outcome
from sigdev.config import Settings
from sigdev.errors import DomainError
from sigdev.formats import emit, read_path_csv, read_paths_jsonl
from sigdev.mmd import PathSample, gram, mmd2, pcfd2_montecarlo
from sigdev.paths import PartitionSpec, Path, concat_reverse
from sigdev.randomdev import EnsembleConfig, rk_montecarlo, sigkernel_montecarlo
from sigdev.sdkernel import evaluate_kernel
from sigdev.signature import signature_kernel


def kernel_row(gamma: Path, sigma: Path, settings: Settings) -> dict[str, Any]:
    """One result row: scheme, lambda, n_steps, level, value, bound, stderr (unused fields are None)."""
    row: dict[str, Any] = dict.fromkeys(("scheme", "lambda", "n_steps", "level", "value", "bound", "stderr"))
    row["scheme"] = settings.scheme
    if gamma.dim != sigma.dim:
        raise DomainError(f"dimension mismatch: {gamma.dim} vs {sigma.dim}")

    match settings.scheme:
        case "explicit" | "implicit":
            res = evaluate_kernel(gamma, sigma, settings.scheme, PartitionSpec(settings.dyadic_order), settings.tol)
            row |= {"lambda": settings.dyadic_order, "n_steps": res.n_steps, "value": res.value}
        case "series":
            res = evaluate_kernel(gamma, sigma, "series", tol=settings.tol)
            row |= {"level": res.level, "value": res.value, "bound": res.tail_bound}
        case "sig":
            tk = signature_kernel(gamma, sigma, settings.tol)
            row |= {"level": tk.level, "value": tk.value, "bound": tk.remainder}
        case "rk":
            cfg = ensemble_config("gue", gamma.dim, settings)
            est = rk_montecarlo(concat_reverse(gamma, sigma), None, cfg, settings.workers)
            print(f"max |imag| of per-sample traces: {est.imag_diag:.3g}", file=sys.stderr)
            row |= {"value": est.estimate, "stderr": est.stderr}
        case "sig-mc":
            cfg = ensemble_config("ginibre", gamma.dim, settings)
            sk = sigkernel_montecarlo(gamma, sigma, None, cfg, settings.workers)
            row |= {"value": sk.estimate, "stderr": sk.stderr}
    return row


def ensemble_config(kind: str, path_dim: int, settings: Settings) -> EnsembleConfig:
    return EnsembleConfig(
        kind=kind,
        dim_n=settings.matrix_dim,
        samples_m=settings.mc_samples,
        seed=settings.seed,
        path_dim=path_dim,
        budget=settings.mc_budget,
    )


def configure_kernel(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("gamma", type=FilePath, help="CSV path file")
    parser.add_argument("sigma", type=FilePath, help="CSV path file")


def cmd_kernel(ns: argparse.Namespace, settings: Settings) -> Outcome:
    row = kernel_row(read_path_csv(ns.gamma), read_path_csv(ns.sigma), settings)
    emit([row], settings.fmt, ns.out)
    return Outcome(0, row)


def _kernel_name(ns: argparse.Namespace, settings: Settings) -> str:
    if ns.kernel:
        return ns.kernel
    if settings.scheme in ("explicit", "implicit", "series"):
        return f"sd_{settings.scheme}"
    if settings.scheme == "sig":
        return "sig_truncated"
    raise DomainError(f"scheme {settings.scheme!r} has no Gram kernel; pass --kernel")


def _partition_spec(ns: argparse.Namespace, settings: Settings) -> PartitionSpec:
    return PartitionSpec(settings.dyadic_order, ns.max_variation)


def _sample(file: FilePath) -> tuple[list[str], PathSample]:
    records = read_paths_jsonl(file)
    return [pid for pid, _ in records], PathSample(p for _, p in records)


def configure_gram(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("sample_a", type=FilePath, help="JSONL path sample")
    parser.add_argument("sample_b", type=FilePath, nargs="?", help="JSONL path sample (default: sample_a)")
    parser.add_argument("--kernel", choices=("sd_explicit", "sd_implicit", "sd_series", "sig_truncated"))
    parser.add_argument("--max-variation", type=float, help="split intervals longer than this 1-variation")


def cmd_gram(ns: argparse.Namespace, settings: Settings) -> Outcome:
    ids_a, a = _sample(ns.sample_a)
    ids_b, b = (ids_a, a) if ns.sample_b is None else _sample(ns.sample_b)
    kernel = _kernel_name(ns, settings)
    g = gram(a, b, kernel, _partition_spec(ns, settings), settings.tol, settings.workers)
    rows = [
        {"i": i, "j": j, "id_a": ids_a[i], "id_b": ids_b[j], "value": float(g.values[i, j])}
        for i in range(len(a))
        for j in range(len(b))
    ]
    emit(rows, settings.fmt, ns.out)
    return Outcome(0, {"kernel": g.kernel_tag, "shape": list(g.values.shape)})


def configure_mmd(parser: argparse.ArgumentParser) -> None:
    configure_gram(parser)
    parser.add_argument("--u-statistic", action="store_true", help="unbiased estimator (drops same-index terms)")


def cmd_mmd(ns: argparse.Namespace, settings: Settings) -> Outcome:
    if ns.sample_b is None:
        raise DomainError("mmd needs two samples")
    _, a = _sample(ns.sample_a)
    _, b = _sample(ns.sample_b)
    kernel = _kernel_name(ns, settings)
    value = mmd2(
        a,
        b,
        kernel,
        _partition_spec(ns, settings),
        settings.tol,
        u_statistic=ns.u_statistic,
        workers=settings.workers,
    )
    row = {"kernel": kernel, "n_a": len(a), "n_b": len(b), "mmd2": value}
    emit([row], settings.fmt, ns.out)
    return Outcome(0, row)


def configure_pcfd(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("sample_a", type=FilePath, help="JSONL path sample")
    parser.add_argument("sample_b", type=FilePath, help="JSONL path sample")


def cmd_pcfd(ns: argparse.Namespace, settings: Settings) -> Outcome:
    _, a = _sample(ns.sample_a)
    _, b = _sample(ns.sample_b)
    est = pcfd2_montecarlo(a, b, ensemble_config("gue", a.dim, settings), workers=settings.workers)
    row = {
        "matrix_dim": settings.matrix_dim,
        "samples": settings.mc_samples,
        "seed": settings.seed,
        "pcfd2": est.estimate,
        "stderr": est.stderr,
    }
    emit([row], settings.fmt, ns.out)
    return Outcome(0, row)
