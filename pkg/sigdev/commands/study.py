"""Study commands: converge (error tables across λ and N) and bench (timings)."""

import argparse
import sys
from dataclasses import replace
from pathlib import Path as FilePath
from typing import Any

from sigdev.commands import Outcome, int_list
from sigdev.commands.kernel import ensemble_config
from sigdev.config import Settings
from sigdev.errors import DomainError, ResourceError
from sigdev.formats import emit, read_path_csv
from sigdev.paths import PartitionSpec, Path, gen_fbm, piecewise_constant_increments
from sigdev.randomdev import rk_montecarlo
from sigdev.sdkernel import SOLVERS, exact_one_dimensional, kernel_on_path, series_oracle
from sigdev.timing import Stopwatch, fmt_elapsed


REFERENCE_MATRIX_DIM = 125
REFERENCE_SAMPLES = 450


def mc_reference(path: Path, settings: Settings) -> tuple[float, str]:
    """GUE estimate at N=125, M=450 drawn from seed+1, so it shares no matrices with the N rows."""
    cfg = ensemble_config(
        "gue", path.dim, replace(settings, matrix_dim=REFERENCE_MATRIX_DIM, mc_samples=REFERENCE_SAMPLES, seed=settings.seed + 1)
    )
    est = rk_montecarlo(path, None, cfg, settings.workers)
    return est.estimate, f"mc N={REFERENCE_MATRIX_DIM} M={REFERENCE_SAMPLES} stderr={est.stderr:.2g}"


def reference_value(path: Path, scheme: str, lambda_max: int, tol: float) -> tuple[float, str]:
    """Closed form in d=1, else the series oracle, else the scheme two dyadic orders past the study."""
    if path.dim == 1:
        return exact_one_dimensional(path), "exact"
    try:
        return series_oracle(path, path.start, path.end, tol).value, "series"
    except ResourceError as e:
        print(f"series oracle unavailable ({e}); using {scheme} at lambda={lambda_max + 2}", file=sys.stderr)
    return kernel_on_path(path, scheme, PartitionSpec(lambda_max + 2)).value, f"{scheme}@lambda={lambda_max + 2}"


def _study_path(ns: argparse.Namespace, settings: Settings) -> Path:
    if ns.path is not None:
        return read_path_csv(ns.path)
    return gen_fbm(ns.hurst, ns.n_points, ns.dim, settings.seed)


def configure_converge(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("path", type=FilePath, nargs="?", help="CSV path file (default: a generated fBm path)")
    parser.add_argument("--hurst", type=float, default=0.75)
    parser.add_argument("--n-points", type=int, default=15)
    parser.add_argument("--dim", type=int, default=1)
    parser.add_argument("--lambda-max", type=int, default=6)
    parser.add_argument("--matrix-dims", type=int_list, default=[10, 50, 200], metavar="N1,N2,...")
    parser.add_argument(
        "--reference", choices=("auto", "mc"), default="auto",
        help="auto: exact, series oracle or the scheme at lambda-max+2; mc: high-N GUE estimate",
    )


def cmd_converge(ns: argparse.Namespace, settings: Settings) -> Outcome:
    """Rows ``kind,parameter,estimate,reference,error,stderr``: one per λ, then one per N."""
    if settings.scheme not in SOLVERS:
        raise DomainError(f"converge studies the explicit or implicit scheme, got {settings.scheme!r}")
    if not 0 <= ns.lambda_max <= 14:
        raise DomainError("--lambda-max must lie in 0..14")
    path = _study_path(ns, settings)
    if ns.reference == "mc":
        reference, source = mc_reference(path, settings)
    else:
        reference, source = reference_value(path, settings.scheme, ns.lambda_max, settings.tol)
    print(f"reference K = {reference!r} ({source})", file=sys.stderr)

    rows: list[dict[str, Any]] = []
    for lam in range(ns.lambda_max + 1):
        est = kernel_on_path(path, settings.scheme, PartitionSpec(lam)).value
        rows.append({
            "kind": "lambda", "parameter": lam, "estimate": est,
            "reference": reference, "error": abs(est - reference), "stderr": None,
        })
    for n in ns.matrix_dims:
        cfg = ensemble_config("gue", path.dim, replace(settings, matrix_dim=n))
        mc = rk_montecarlo(path, None, cfg, settings.workers)
        rows.append({
            "kind": "N", "parameter": n, "estimate": mc.estimate,
            "reference": reference, "error": abs(mc.estimate - reference), "stderr": mc.stderr,
        })
    emit(rows, settings.fmt, ns.out)
    return Outcome(0, {"reference": reference, "source": source, "rows": len(rows)})


def configure_bench(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--steps", type=int_list, default=[16, 32, 64, 128], metavar="n1,n2,...")
    parser.add_argument("--dims", type=int_list, default=[1, 5], metavar="d1,d2,...")
    parser.add_argument("--hurst", type=float, default=0.75)


def cmd_bench(ns: argparse.Namespace, settings: Settings) -> Outcome:
    """Rows ``method,n_steps,dim,seconds`` for the implicit scheme and the unitary estimator."""
    rows: list[dict[str, Any]] = []
    for d in ns.dims:
        for n in ns.steps:
            path = gen_fbm(ns.hurst, n + 1, d, settings.seed)
            incs = piecewise_constant_increments(path)
            sw = Stopwatch()
            SOLVERS["implicit"](incs)
            rows.append({"method": "implicit", "n_steps": n, "dim": d, "seconds": sw.stop()})
            sw = Stopwatch()
            rk_montecarlo(path, None, ensemble_config("gue", d, settings), settings.workers)
            rows.append({"method": "rk", "n_steps": n, "dim": d, "seconds": sw.stop()})
            print(f"  d={d} n={n}: implicit {fmt_elapsed(rows[-2]['seconds'])}, rk {fmt_elapsed(rows[-1]['seconds'])}",
                  file=sys.stderr)
    emit(rows, settings.fmt, ns.out)
    return Outcome(0, {"rows": len(rows)})
