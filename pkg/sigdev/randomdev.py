"""Random matrix ensembles, unitary and GL developments of paths, Monte-Carlo kernel estimators."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from sigdev.errors import DomainError, ResourceError
from sigdev.paths import IncrementSequence, Partition, PartitionSpec, Path, discretize, piecewise_constant_increments
from sigdev.workers import parallel_map

KINDS = ("gue", "ginibre")
TAYLOR_DEGREE = 18
SCALED_NORM = 0.5
HERMITIAN_TOL = 1e-12

type ComplexMatrix = np.ndarray


@dataclass(frozen=True)
class EnsembleConfig:
    """Which matrices to draw and how many; ``budget`` caps N·N·d·M."""

    kind: str = "gue"
    dim_n: int = 50
    samples_m: int = 50
    seed: int = 0
    path_dim: int = 1
    budget: int = 10**9

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise DomainError(f"ensemble must be one of {', '.join(KINDS)}, got {self.kind!r}")
        if self.dim_n < 1 or self.samples_m < 1 or self.path_dim < 1:
            raise DomainError("N, M and the path dimension must all be >= 1")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a non-negative 64-bit integer")
        entries = self.dim_n * self.dim_n * self.path_dim * self.samples_m
        if entries > self.budget:
            raise ResourceError(f"N·N·d·M = {entries} exceeds the Monte-Carlo budget {self.budget}")


class DevelopmentEstimate(NamedTuple):
    estimate: float
    stderr: float
    imag_diag: float


class MonteCarloEstimate(NamedTuple):
    estimate: float
    stderr: float


def _rng(seed: int, sample_index: int, matrix_index: int) -> np.random.Generator:
    # counter-based stream per (seed, sample, matrix): samples can be drawn in any order
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, sample_index, matrix_index])))


def sample_matrices(cfg: EnsembleConfig, sample_index: int) -> list[ComplexMatrix]:
    """The d matrices of one Monte-Carlo sample. Entries satisfy E|A(m,l)|² = 1.

    GUE: Hermitian, real standard normal diagonal. Ginibre: i.i.d. complex entries with
    real and imaginary parts of variance ½.
    """
    if not 0 <= sample_index < cfg.samples_m:
        raise DomainError(f"sample index {sample_index} outside 0..{cfg.samples_m - 1}")
    n = cfg.dim_n
    out = []
    for j in range(cfg.path_dim):
        rng = _rng(cfg.seed, sample_index, j)
        g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
        if cfg.kind == "gue":
            g = (g + g.conj().T) / math.sqrt(2)
        out.append(g)
    return out


def expm(a: ComplexMatrix) -> ComplexMatrix:
    """Matrix exponential by scaling and squaring around a truncated Taylor series."""
    a = np.asarray(a)
    n = a.shape[0]
    norm = float(np.linalg.norm(a, 1))
    squarings = max(0, math.ceil(math.log2(norm / SCALED_NORM))) if norm > SCALED_NORM else 0
    x = a / 2**squarings
    result = np.eye(n, dtype=np.result_type(a, float))
    term = result.copy()
    for k in range(1, TAYLOR_DEGREE + 1):
        term = term @ x / k
        result = result + term
        if np.linalg.norm(term, 1) <= 1e-17 * np.linalg.norm(result, 1):
            break
    for _ in range(squarings):
        result = result @ result
    return result


def _check_shapes(incs: IncrementSequence, mats: list[ComplexMatrix]) -> np.ndarray:
    if len(mats) != incs.dim:
        raise DomainError(f"{incs.dim}-dimensional increments need {incs.dim} matrices, got {len(mats)}")
    stacked = np.stack([np.asarray(m, dtype=complex) for m in mats])
    if stacked.ndim != 3 or stacked.shape[1] != stacked.shape[2]:
        raise DomainError(f"matrices must be square and of equal size, got shape {stacked.shape[1:]}")
    return stacked


def unitary_development(incs: IncrementSequence, mats: list[ComplexMatrix]) -> ComplexMatrix:
    """Z = ∏_k exp((i/√N) Σ_j A_j Δ_k^j) for Hermitian A_j, each factor by Hermitian eigendecomposition."""
    stacked = _check_shapes(incs, mats)
    scale = np.max(np.abs(stacked), initial=1.0)
    if np.max(np.abs(stacked - stacked.conj().transpose(0, 2, 1)), initial=0.0) > HERMITIAN_TOL * scale:
        raise DomainError("unitary development needs Hermitian matrices")
    n = stacked.shape[1]
    z = np.eye(n, dtype=complex)
    for delta in incs.deltas:
        if not np.any(delta):
            continue
        h = np.tensordot(delta, stacked, axes=1)
        w, v = np.linalg.eigh(h)
        z = z @ ((v * np.exp(1j * w / math.sqrt(n))) @ v.conj().T)
    return z


def gl_development(incs: IncrementSequence, mats: list[ComplexMatrix]) -> ComplexMatrix:
    """Z = ∏_k exp((1/√N) Σ_j A_j Δ_k^j), exact on every linear segment."""
    stacked = _check_shapes(incs, mats)
    n = stacked.shape[1]
    z = np.eye(n, dtype=complex)
    for delta in incs.deltas:
        if not np.any(delta):
            continue
        z = z @ expm(np.tensordot(delta, stacked, axes=1) / math.sqrt(n))
    return z


def unitarity_defect(z: ComplexMatrix) -> float:
    """max |Z*Z − I|."""
    return float(np.max(np.abs(z.conj().T @ z - np.eye(z.shape[0]))))


def increments_for(path: Path, partition: Partition | PartitionSpec | None) -> IncrementSequence:
    if isinstance(partition, PartitionSpec):
        partition = discretize(path, partition)
    return piecewise_constant_increments(path, partition)


def standard_error(values: np.ndarray) -> float:
    if len(values) < 2:
        return 0.0
    return float(np.std(values, ddof=1) / math.sqrt(len(values)))


def rk_montecarlo(
    path: Path,
    partition: Partition | PartitionSpec | None,
    cfg: EnsembleConfig,
    workers: int = 1,
) -> DevelopmentEstimate:
    """(1/M) Σ (1/N) tr Z over GUE samples; converges to K_γ(0,T) as N grows."""
    if cfg.kind != "gue":
        raise DomainError("the unitary estimator samples the GUE ensemble")
    if cfg.path_dim != path.dim:
        raise DomainError(f"ensemble has path_dim={cfg.path_dim}, path has d={path.dim}")
    incs = increments_for(path, partition)

    def one(m: int) -> complex:
        z = unitary_development(incs, sample_matrices(cfg, m))
        return complex(np.trace(z) / cfg.dim_n)

    traces = np.array(parallel_map(one, range(cfg.samples_m), workers))
    return DevelopmentEstimate(
        float(np.sum(traces.real) / len(traces)),
        standard_error(traces.real),
        float(np.max(np.abs(traces.imag))),
    )


def sigkernel_montecarlo(
    gamma: Path,
    sigma: Path,
    partition: Partition | PartitionSpec | None,
    cfg: EnsembleConfig,
    workers: int = 1,
) -> MonteCarloEstimate:
    """(1/M) Σ (1/N) Re tr(Z_γ* Z_σ) with both paths developed by the same Ginibre draw."""
    if cfg.kind != "ginibre":
        raise DomainError("the GL estimator samples the complex Ginibre ensemble")
    if gamma.dim != sigma.dim or cfg.path_dim != gamma.dim:
        raise DomainError(f"dimension mismatch: ensemble {cfg.path_dim}, paths {gamma.dim} and {sigma.dim}")
    incs_g = increments_for(gamma, partition)
    incs_s = increments_for(sigma, partition)

    def one(m: int) -> float:
        mats = sample_matrices(cfg, m)
        zg = gl_development(incs_g, mats)
        zs = gl_development(incs_s, mats)
        return float(np.vdot(zg, zs).real / cfg.dim_n)

    values = np.array(parallel_map(one, range(cfg.samples_m), workers))
    return MonteCarloEstimate(float(np.sum(values) / len(values)), standard_error(values))
