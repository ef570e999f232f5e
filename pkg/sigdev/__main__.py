"""CLI entry point: dispatch table and usage."""

import io
import sys

from sigdev.commands import Command, Outcome, build_parser, settings_from
from sigdev.commands.data import cmd_genfbm, configure_genfbm
from sigdev.commands.kernel import (
    cmd_gram,
    cmd_kernel,
    cmd_mmd,
    cmd_pcfd,
    configure_gram,
    configure_kernel,
    configure_mmd,
    configure_pcfd,
)
from sigdev.commands.selftest import cmd_selftest, configure_selftest
from sigdev.commands.study import cmd_bench, cmd_converge, configure_bench, configure_converge
from sigdev.config import Settings, load_settings
from sigdev.errors import DomainError, NumericError, ResourceError
from sigdev.runlog import log_run
from sigdev.timing import Stopwatch, fmt_elapsed

USAGE = """\
sigdev - Schwinger-Dyson signature kernels, random developments and path MMDs

Kernels:
  kernel <a.csv> <b.csv>          K_SD(a, b) (or K_sig with --scheme sig / sig-mc)
                                  columns: scheme,lambda,n_steps,level,value,bound,stderr
  gram <a.jsonl> [<b.jsonl>]      Gram matrix, long format: i,j,id_a,id_b,value
  mmd <a.jsonl> <b.jsonl>         MMD^2 (V-statistic; --u-statistic for U): kernel,n_a,n_b,mmd2
  pcfd <a.jsonl> <b.jsonl>        finite-N characteristic function distance:
                                  matrix_dim,samples,seed,pcfd2,stderr

Studies:
  converge [<path.csv>]           error vs reference per dyadic order, then per matrix size:
                                  kind,parameter,estimate,reference,error,stderr
                                  reference: exact (d=1), series oracle, else the scheme at
                                  lambda-max+2; --reference mc uses a GUE N=125, M=450 estimate
  bench                           timings of the implicit scheme and the unitary estimator:
                                  method,n_steps,dim,seconds

Data:
  genfbm                          fractional Brownian motion path (CSV t,x1..xd; JSONL with --count > 1)
  selftest                        run the invariant suite (exit 1 on any failure)

Shared flags (environment: SIGDEV_SCHEME, SIGDEV_LAMBDA, ... also read from .env):
  --scheme explicit|implicit|series|sig|rk|sig-mc   --lambda L   --tol TOL
  --matrix-dim N   --mc-samples M   --seed S   --workers W
  --format csv|json   --out FILE   --log FILE (JSON Lines run log)

Exit codes: 0 ok, 1 selftest failure, 2 bad input, 3 numerical or resource failure."""

COMMANDS: dict[str, Command] = {
    "kernel": Command(cmd_kernel, configure_kernel),
    "gram": Command(cmd_gram, configure_gram),
    "mmd": Command(cmd_mmd, configure_mmd),
    "pcfd": Command(cmd_pcfd, configure_pcfd),
    "converge": Command(cmd_converge, configure_converge),
    "bench": Command(cmd_bench, configure_bench),
    "genfbm": Command(cmd_genfbm, configure_genfbm),
    "selftest": Command(cmd_selftest, configure_selftest),
}


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        # messages may carry Greek letters
        for stream in (sys.stdout, sys.stderr):
            if isinstance(stream, io.TextIOWrapper):
                stream.reconfigure(encoding="utf-8", errors="replace")
    args = sys.argv[1:] if argv is None else argv
    if not args or args[0] in ("-h", "--help", "help"):
        print(USAGE)
        return 0

    name = args[0]
    command = COMMANDS.get(name)
    if command is None:
        print(f"Error: unknown command: {name}", file=sys.stderr)
        print(USAGE, file=sys.stderr)
        return 2

    try:
        ns = build_parser(name, command).parse_args(args[1:])
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    settings: Settings | None = None
    sw = Stopwatch()
    try:
        settings = settings_from(ns, load_settings())
        outcome = command.run(ns, settings)
    except DomainError as e:
        print(f"Error: {e}", file=sys.stderr)
        outcome = Outcome(2, {"error": str(e)})
    except (NumericError, ResourceError) as e:
        bound = getattr(e, "bound", None)
        suffix = f" (best achievable bound {bound:.3g})" if bound is not None else ""
        print(f"Error: {e}{suffix}", file=sys.stderr)
        outcome = Outcome(3, {"error": str(e), "bound": bound})
    print(f"[{name}] {fmt_elapsed(sw.stop())}", file=sys.stderr)

    log_run(settings.log if settings else ns.log, name, vars(ns), outcome.status, outcome.result)
    return outcome.status


if __name__ == "__main__":
    sys.exit(main())
