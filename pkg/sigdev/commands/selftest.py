"""selftest: cross-scheme oracles and combinatorial invariants at desk scale."""

import argparse
import itertools
import math
from collections.abc import Callable

import numpy as np

from sigdev.commands import Outcome
from sigdev.config import Settings
from sigdev.errors import SigdevError
from sigdev.freeprob import (
    DyckWord,
    catalan,
    dyck_from_partition,
    generation_labels,
    moment_recursive,
    moment_tensor,
    nc2_enumerate,
    partition_from_dyck,
    schwinger_dyson_check,
    semicircular_moment,
)
from sigdev.paths import IncrementSequence, PartitionSpec, Path, ell1_variation, one_variation
from sigdev.randomdev import EnsembleConfig, rk_montecarlo, sample_matrices, unitarity_defect, unitary_development
from sigdev.sdkernel import (
    exact_straight_line,
    iss_contraction,
    k_sd,
    kernel_on_path,
    semicircle_characteristic,
    series_oracle,
    solve_explicit,
)
from sigdev.signature import signature_norms, truncated_signature

J1_OF_2 = exact_straight_line(1.0, 0.0, 1.0)


def _catalan_counts() -> bool:
    return all(len(nc2_enumerate(2 * k)) == catalan(k) for k in range(7))


def _dyck_bijection() -> bool:
    return all(
        partition_from_dyck(dyck_from_partition(p)) == p for n in range(0, 11, 2) for p in nc2_enumerate(n)
    )


def _generation_example() -> bool:
    labels = generation_labels(DyckWord("()()(()(()))")).labels
    return labels == ((1, 2, 3), (3, 4, 2), (5, 12, 1), (6, 7, 3), (8, 11, 2), (9, 10, 3))


def _schwinger_dyson() -> bool:
    return schwinger_dyson_check(6, 2)


def _moment_routes_agree() -> bool:
    for n in range(7):
        tensor = moment_tensor(n, 2)
        for w in itertools.product((1, 2), repeat=n):
            phi = semicircular_moment(w)
            if moment_recursive(w) != phi or tensor[tuple(c - 1 for c in w)] != phi:
                return False
    return True


def _iss_identity() -> bool:
    values = (-0.3, 0.0, 0.4)
    for n in range(1, 5):
        for flat in itertools.product(values, repeat=n):
            incs = IncrementSequence(np.array(flat).reshape(-1, 1))
            if abs(solve_explicit(incs).final - iss_contraction(incs)) > 1e-10:
                return False
    return True


def _bessel_series() -> bool:
    return all(abs(semicircle_characteristic(x) - exact_straight_line(1.0, 0.0, x)) < 1e-12 for x in (0.0, 0.5, 1.0, 2.0))


def _scheme_convergence() -> bool:
    line = Path.line([1.0])
    bound = 16 * math.exp(4)
    for scheme in ("explicit", "implicit"):
        for lam in range(6):
            err = abs(kernel_on_path(line, scheme, PartitionSpec(lam)).value - J1_OF_2)
            if err > bound * 2.0**-lam:
                return False
    return True


def _factorial_decay() -> bool:
    path = Path.from_points([[0.0, 0.0], [0.6, -0.2], [0.3, 0.5], [1.0, 0.4]])
    sig = truncated_signature(path, level=5)
    v, v1 = one_variation(path), ell1_variation(path)
    for m, norm in enumerate(signature_norms(sig)):
        # Hilbert-Schmidt norm against the Euclidean variation, coefficient sum against the l1 one
        if norm > v**m / math.factorial(m) + 1e-12 or np.sum(np.abs(sig[m])) > v1**m / math.factorial(m) + 1e-12:
            return False
    return True


def _series_on_line() -> bool:
    return abs(series_oracle(Path.line([1.0]), 0.0, 1.0, 1e-10).value - J1_OF_2) < 1e-9


def _tree_like() -> bool:
    gamma = Path.from_points([[0.0, 0.0], [0.2, 0.1], [0.1, 0.3]])
    return abs(k_sd(gamma, gamma, "series") - 1.0) < 1e-6


def _unitarity() -> bool:
    cfg = EnsembleConfig("gue", dim_n=20, samples_m=3, seed=1, path_dim=2)
    incs = IncrementSequence(np.array([[0.5, -1.0], [2.0, 0.3], [-4.0, 1.5]]))
    return all(unitarity_defect(unitary_development(incs, sample_matrices(cfg, m))) <= 1e-10 for m in range(3))


def _constant_development() -> bool:
    cfg = EnsembleConfig("gue", dim_n=8, samples_m=4, seed=0, path_dim=2)
    est = rk_montecarlo(Path.constant([1.0, 2.0]), None, cfg)
    return est.estimate == 1.0 and est.stderr == 0.0


CHECKS: list[tuple[str, Callable[[], bool]]] = [
    ("catalan counts of NC2(2k)", _catalan_counts),
    ("Dyck word <-> pair partition bijection", _dyck_bijection),
    ("generation labels of ()()(()(()))", _generation_example),
    ("Schwinger-Dyson identities, d=2, |I|<=6", _schwinger_dyson),
    ("enumerated, recursive and tensor moments agree", _moment_routes_agree),
    ("explicit scheme = iterated-sums contraction", _iss_identity),
    ("Catalan series = J1(2x)/x", _bessel_series),
    ("schemes within the convergence bound on the unit line", _scheme_convergence),
    ("signature levels decay factorially", _factorial_decay),
    ("series oracle = J1(2) on the unit line", _series_on_line),
    ("k_sd(g, g) = 1 on a tree-like concatenation", _tree_like),
    ("unitary developments are unitary", _unitarity),
    ("constant path develops to the identity", _constant_development),
]


def configure_selftest(parser: argparse.ArgumentParser) -> None:
    """No flags beyond the shared ones."""


def cmd_selftest(ns: argparse.Namespace, settings: Settings) -> Outcome:
    failed: list[str] = []
    for name, check in CHECKS:
        label = name
        try:
            ok = check()
        except SigdevError as e:
            ok = False
            label = f"{name} ({e})"
        print(f"  {'ok  ' if ok else 'FAIL'}  {label}")
        if not ok:
            failed.append(label)
    print(f"\n{len(CHECKS) - len(failed)}/{len(CHECKS)} checks passed")
    return Outcome(1 if failed else 0, {"passed": len(CHECKS) - len(failed), "failed": failed})
