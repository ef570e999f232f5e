"""Grid schemes, closed forms and the moment-series oracle for the Schwinger-Dyson kernel."""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg
import scipy.special

from sigdev.errors import DomainError, NumericError, ResourceError
from sigdev.freeprob import catalan, moment_tensor
from sigdev.paths import (
    IncrementSequence,
    Partition,
    PartitionSpec,
    Path,
    concat_reverse,
    discretize,
    one_variation,
    piecewise_constant_increments,
)
from sigdev.signature import check_budget, iterated_sums_signature, truncated_signature

SCHEMES = ("explicit", "implicit", "series")
MAX_SERIES_LEVEL = 16
BESSEL_SERIES_LIMIT = 8.0


@dataclass(frozen=True, eq=False)
class SolutionGrid:
    """``values[a, b]`` = K(t_a, t_b) for a <= b; entries below the diagonal are unused zeros."""

    knots: Partition
    values: np.ndarray

    def __post_init__(self) -> None:
        n = len(self.knots)
        if self.values.shape != (n, n):
            raise DomainError(f"grid of shape {self.values.shape} does not match {n} knots")
        if not np.all(np.isfinite(self.values)):
            raise NumericError("scheme produced non-finite values; increments are too large for this mesh")
        self.values.setflags(write=False)

    @property
    def final(self) -> float:
        """K(t_0, t_n), the value over the whole interval."""
        return float(self.values[0, -1])

    def __getitem__(self, ab: tuple[int, int]) -> float:
        a, b = ab
        if a > b:
            raise DomainError(f"grid is defined for a <= b, got ({a}, {b})")
        return float(self.values[a, b])


def _explicit_core(gram: np.ndarray) -> np.ndarray:
    n = len(gram)
    k = np.zeros((n + 1, n + 1))
    k[0, 0] = 1.0
    for b in range(1, n + 1):
        w = k[1:b, b - 1] * gram[: b - 1, b - 1]
        k[:b, b] = k[:b, b - 1] - k[:b, : b - 1] @ w
        k[b, b] = 1.0
    return k


def _implicit_core(gram: np.ndarray) -> np.ndarray:
    n = len(gram)
    k = np.zeros((n + 1, n + 1))
    k[0, 0] = 1.0
    for b in range(1, n + 1):
        gcol = np.concatenate([[0.0], gram[: b - 1, b - 1]])
        system = k[:b, :b] * gcol[None, :]
        np.fill_diagonal(system, 1.0 + gram[b - 1, b - 1])
        k[:b, b] = scipy.linalg.solve_triangular(system, k[:b, b - 1], lower=False)
        k[b, b] = 1.0
    return k


def _solve_moving(incs: IncrementSequence, core: Callable[[np.ndarray], np.ndarray]) -> SolutionGrid:
    """Run ``core`` on the nonzero increments, then index the grid back onto every knot.

    K is constant across a zero increment, so a stationary step copies its neighbour bit for bit.
    """
    moving = np.any(incs.deltas != 0.0, axis=1)
    deltas = incs.deltas[moving]
    k = core(deltas @ deltas.T)
    at = np.concatenate([[0], np.cumsum(moving)])
    return SolutionGrid(Partition(incs.knots), np.triu(k[np.ix_(at, at)]))


def solve_explicit(incs: IncrementSequence) -> SolutionGrid:
    """Left-point scheme: K(a,b) = K(a,b−1) − Σ_{i=a}^{b−2} K(a,i)·K(i+1,b−1)·⟨Δ_i, Δ_{b−1}⟩.

    Columns are filled left to right; every column is one matrix-vector product over all rows.
    """
    return _solve_moving(incs, _explicit_core)


def solve_implicit(incs: IncrementSequence) -> SolutionGrid:
    """Right-point scheme: (1 + ‖Δ_b‖²)·K(a,b) + Σ_{k=a+1}^{b−1} K(a,k)·K(k,b)·⟨Δ_k, Δ_b⟩ = K(a,b−1).

    Increments are numbered so that Δ_k ends at knot k. Each column is an upper-triangular
    system in the unknowns K(·, b).
    """
    return _solve_moving(incs, _implicit_core)


SOLVERS: dict[str, Callable[[IncrementSequence], SolutionGrid]] = {
    "explicit": solve_explicit,
    "implicit": solve_implicit,
}


def bessel_ratio(x: float) -> float:
    """J₁(2x)/x, with the limit 1 at x = 0."""
    x = abs(x)
    if x > BESSEL_SERIES_LIMIT:
        return float(scipy.special.j1(2 * x) / x)
    x2 = x * x
    term = total = 1.0
    k = 0
    # Σ (−1)^k x^{2k} / (k!(k+1)!)
    while True:
        k += 1
        term *= -x2 / (k * (k + 1))
        total += term
        if k > x and abs(term) < 1e-16 * max(1.0, abs(total)):
            return total


def exact_straight_line(speed: float, s: float, t: float) -> float:
    """K_γ(s,t) for γ_u = u·v with ‖v‖ = speed."""
    if s > t:
        raise DomainError(f"need s <= t, got [{s}, {t}]")
    if speed < 0:
        raise DomainError("speed must be nonnegative")
    return bessel_ratio((t - s) * speed)


def exact_one_dimensional(path: Path) -> float:
    """K_γ(0,T) for any one-dimensional path: only the total increment matters."""
    if path.dim != 1:
        raise DomainError(f"closed form needs a one-dimensional path, got d={path.dim}")
    return bessel_ratio(float(path.displacement[0]))


def semicircle_characteristic(x: float, terms: int = 20) -> float:
    """Σ_{k≤terms} (−1)^k C_k x^{2k} / (2k)!, the even moments of a standard semicircular variable."""
    return math.fsum((-1) ** k * catalan(k) * x ** (2 * k) / math.factorial(2 * k) for k in range(terms + 1))


def iss_contraction(incs: IncrementSequence) -> float:
    """Σ_k (−1)^k Σ_{|I|=2k} φ(I)·ISS^I over every even level the sequence can reach."""
    level = len(incs) - len(incs) % 2
    check_budget(incs.dim, level)
    iss = iterated_sums_signature(incs, level)
    return math.fsum((-1) ** (m // 2) * float(np.sum(iss[m] * moment_tensor(m, incs.dim))) for m in range(0, level + 1, 2))


def series_tail(variation: float, level: int) -> float:
    """Σ_{m>level, m even} C_{m/2}·v^m/m!, which bounds what the moment series drops past ``level``."""
    if variation == 0:
        return 0.0
    k = level // 2 + 1
    log_term = 2 * k * math.log(variation) - math.lgamma(k + 1) - math.lgamma(k + 2)
    if log_term > 700:
        return math.inf
    term = math.exp(log_term)
    total = 0.0
    while term > 0 and term >= 1e-18 * total:
        total += term
        term *= variation**2 / ((k + 1) * (k + 2))
        k += 1
        if math.isinf(total):
            return math.inf
    return total


class SeriesResult(NamedTuple):
    value: float
    tail_bound: float
    level: int


def series_oracle(path: Path, s: float, t: float, tol: float) -> SeriesResult:
    """K_γ(s,t) = Σ_I (−1)^{|I|/2} φ(I) S^I_{s,t}(γ), summed to the first even level whose tail is below ``tol``."""
    if not tol > 0:
        raise DomainError("tol must be positive")
    variation = one_variation(path, (s, t))
    level = next((lv for lv in range(0, MAX_SERIES_LEVEL + 1, 2) if series_tail(variation, lv) < tol), None)
    if level is None:
        achievable = series_tail(variation, MAX_SERIES_LEVEL)
        raise ResourceError(
            f"series tail at level {MAX_SERIES_LEVEL} does not reach tol {tol:g} (1-variation {variation:.4g})",
            bound=achievable,
        )
    sig = truncated_signature(path, (s, t), level)
    value = math.fsum(
        (-1) ** (m // 2) * float(np.sum(sig[m] * moment_tensor(m, path.dim))) for m in range(0, level + 1, 2)
    )
    return SeriesResult(value, series_tail(variation, level), level)


class KernelResult(NamedTuple):
    value: float
    scheme: str
    tail_bound: float | None = None
    level: int | None = None
    n_steps: int | None = None


def _partition_for(y: Path, partition: Partition | PartitionSpec | None) -> Partition:
    if partition is None:
        return y.knots
    if isinstance(partition, PartitionSpec):
        return discretize(y, partition)
    return partition


def kernel_on_path(
    y: Path,
    scheme: str = "explicit",
    partition: Partition | PartitionSpec | None = None,
    tol: float = 1e-8,
) -> KernelResult:
    """K_y over y's whole span with the chosen scheme."""
    if scheme == "series":
        res = series_oracle(y, y.start, y.end, tol)
        return KernelResult(res.value, scheme, res.tail_bound, res.level)
    if scheme not in SOLVERS:
        raise DomainError(f"unknown scheme {scheme!r}; choose from {', '.join(SCHEMES)}")
    incs = piecewise_constant_increments(y, _partition_for(y, partition))
    return KernelResult(SOLVERS[scheme](incs).final, scheme, n_steps=len(incs))


def evaluate_kernel(
    gamma: Path,
    sigma: Path,
    scheme: str = "explicit",
    partition: Partition | PartitionSpec | None = None,
    tol: float = 1e-8,
) -> KernelResult:
    """K_SD(γ, σ) = K_y(0, T) with y = γ ∗ ←σ, plus the scheme metadata."""
    return kernel_on_path(concat_reverse(gamma, sigma), scheme, partition, tol)


def k_sd(
    gamma: Path,
    sigma: Path,
    scheme: str = "explicit",
    partition: Partition | PartitionSpec | None = None,
    tol: float = 1e-8,
) -> float:
    return evaluate_kernel(gamma, sigma, scheme, partition, tol).value


def convergence_bound(path: Path, partition: Partition) -> float:
    """16‖γ‖₁ e^{4‖γ‖₁} max_i ‖γ‖_{1;[t_i,t_{i+1}]}, the discretization error bound on K_γ(0,T)."""
    if not partition.covers(path):
        raise DomainError("partition does not cover the path span")
    seg = np.linalg.norm(np.diff(path.points, axis=0), axis=1)
    cumulative = np.concatenate([[0.0], np.cumsum(seg)])
    # variation grows linearly inside each linear segment
    at_knots = np.interp(partition.knots, path.times, cumulative) if len(path) > 1 else np.zeros(len(partition))
    total = float(cumulative[-1])
    finest = float(np.max(np.diff(at_knots))) if len(partition) > 1 else 0.0
    return 16 * total * math.exp(4 * total) * finest

