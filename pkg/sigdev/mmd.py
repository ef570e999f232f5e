"""Gram matrices and MMD distances between empirical path distributions."""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass

import numpy as np

from sigdev.errors import DomainError
from sigdev.paths import PartitionSpec, Path
from sigdev.randomdev import (
    EnsembleConfig,
    MonteCarloEstimate,
    increments_for,
    sample_matrices,
    standard_error,
    unitary_development,
)
from sigdev.sdkernel import k_sd
from sigdev.signature import signature_kernel
from sigdev.workers import parallel_map

KERNELS = ("sd_explicit", "sd_implicit", "sd_series", "sig_truncated")

type KernelFn = Callable[[Path, Path], float]


@dataclass(frozen=True)
class PathSample:
    """An empirical measure: uniform weights over ``paths``."""

    paths: tuple[Path, ...]

    def __init__(self, paths: Iterable[Path]) -> None:
        object.__setattr__(self, "paths", tuple(paths))
        if not self.paths:
            raise DomainError("a path sample needs at least one path")
        dims = {p.dim for p in self.paths}
        if len(dims) > 1:
            raise DomainError(f"paths in a sample must share one dimension, got {sorted(dims)}")

    @property
    def dim(self) -> int:
        return self.paths[0].dim

    def __len__(self) -> int:
        return len(self.paths)

    def __getitem__(self, i: int) -> Path:
        return self.paths[i]

    def same_paths(self, other: PathSample) -> bool:
        """Same sample points in the same order, whether or not the Path objects are shared."""
        return len(self) == len(other) and all(
            np.array_equal(p.times, q.times) and np.array_equal(p.points, q.points)
            for p, q in zip(self.paths, other.paths, strict=True)
        )


@dataclass(frozen=True, eq=False)
class GramMatrix:
    values: np.ndarray
    kernel_tag: str


def kernel_function(kernel: str, partition_spec: PartitionSpec | None = None, tol: float = 1e-8) -> KernelFn:
    if kernel == "sig_truncated":
        return lambda g, s: signature_kernel(g, s, tol).value
    if kernel not in KERNELS:
        raise DomainError(f"unknown kernel {kernel!r}; choose from {', '.join(KERNELS)}")
    scheme = kernel.removeprefix("sd_")
    return lambda g, s: k_sd(g, s, scheme, partition_spec, tol)


def _content_key(p: Path) -> bytes:
    return p.times.tobytes() + p.points.tobytes()


def gram(
    sample_a: PathSample,
    sample_b: PathSample,
    kernel: str = "sd_explicit",
    partition_spec: PartitionSpec | None = None,
    tol: float = 1e-8,
    workers: int = 1,
) -> GramMatrix:
    """Entry (i, j) is the kernel on (a_i, b_j); identical samples fill the upper triangle and mirror it."""
    if sample_a.dim != sample_b.dim:
        raise DomainError(f"dimension mismatch: {sample_a.dim} vs {sample_b.dim}")
    fn = kernel_function(kernel, partition_spec, tol)
    same = sample_a.same_paths(sample_b)
    cells = [(i, j) for i in range(len(sample_a)) for j in range(i if same else 0, len(sample_b))]

    def entry(ij: tuple[int, int]) -> float:
        g, s = sample_a[ij[0]], sample_b[ij[1]]
        # one argument order per unordered pair, whatever the sample order
        if same and _content_key(s) < _content_key(g):
            g, s = s, g
        return fn(g, s)

    values = parallel_map(entry, cells, workers)

    out = np.zeros((len(sample_a), len(sample_b)))
    for (i, j), v in zip(cells, values, strict=True):
        out[i, j] = v
        if same:
            out[j, i] = v
    spec = partition_spec or PartitionSpec()
    tag = kernel if kernel in ("sd_series", "sig_truncated") else f"{kernel}/lambda={spec.dyadic_order}"
    return GramMatrix(out, tag)


def _mean(values: np.ndarray) -> float:
    # exactly rounded, so permuting a sample cannot change the result
    return math.fsum(values.ravel()) / values.size


def _off_diagonal_mean(values: np.ndarray) -> float:
    n = len(values)
    return (math.fsum(values.ravel()) - math.fsum(np.diag(values))) / (n * (n - 1))


def mmd2(
    sample_a: PathSample,
    sample_b: PathSample,
    kernel: str = "sd_explicit",
    partition_spec: PartitionSpec | None = None,
    tol: float = 1e-8,
    *,
    u_statistic: bool = False,
    workers: int = 1,
) -> float:
    """E κ(γ,γ′) + E κ(σ,σ′) − 2 E κ(γ,σ); V-statistic unless ``u_statistic``."""
    k_aa = gram(sample_a, sample_a, kernel, partition_spec, tol, workers).values
    k_bb = gram(sample_b, sample_b, kernel, partition_spec, tol, workers).values
    k_ab = gram(sample_a, sample_b, kernel, partition_spec, tol, workers).values
    if u_statistic:
        if len(sample_a) < 2 or len(sample_b) < 2:
            raise DomainError("the U-statistic needs at least two paths per sample")
        return _off_diagonal_mean(k_aa) + _off_diagonal_mean(k_bb) - 2 * _mean(k_ab)
    return _mean(k_aa) + _mean(k_bb) - 2 * _mean(k_ab)


def pcfd2_montecarlo(
    sample_a: PathSample,
    sample_b: PathSample,
    cfg: EnsembleConfig,
    partition_spec: PartitionSpec | None = None,
    workers: int = 1,
) -> MonteCarloEstimate:
    """(1/N) E_A ‖Φ_a(A) − Φ_b(A)‖²_HS, Φ being the mean unitary development of a sample."""
    if cfg.kind != "gue":
        raise DomainError("the characteristic function distance samples the GUE ensemble")
    if sample_a.dim != sample_b.dim or cfg.path_dim != sample_a.dim:
        raise DomainError(f"dimension mismatch: ensemble {cfg.path_dim}, samples {sample_a.dim} and {sample_b.dim}")
    incs_a = [increments_for(p, partition_spec) for p in sample_a.paths]
    incs_b = [increments_for(p, partition_spec) for p in sample_b.paths]

    def one(m: int) -> float:
        mats = sample_matrices(cfg, m)
        phi_a = sum(unitary_development(incs, mats) for incs in incs_a) / len(incs_a)
        phi_b = sum(unitary_development(incs, mats) for incs in incs_b) / len(incs_b)
        diff = phi_a - phi_b
        return float(np.vdot(diff, diff).real / cfg.dim_n)

    values = np.array(parallel_map(one, range(cfg.samples_m), workers))
    return MonteCarloEstimate(float(np.sum(values) / len(values)), standard_error(values))
