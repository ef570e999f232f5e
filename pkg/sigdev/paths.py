"""Piecewise-linear paths, partitions, increments and synthetic fBm paths."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from sigdev.errors import DomainError, NumericError

type ArrayLike = np.ndarray | Sequence[float] | Sequence[Sequence[float]]


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Path:
    """Samples ``points[k]`` at ``times[k]``, interpolated linearly in between."""

    times: np.ndarray
    points: np.ndarray

    def __post_init__(self) -> None:
        times = np.array(self.times, dtype=float).reshape(-1)
        points = np.array(self.points, dtype=float)
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        if points.ndim != 2 or points.shape[1] < 1:
            raise DomainError(f"points must be an (n, d) array with d >= 1, got shape {points.shape}")
        if len(times) < 1 or len(times) != len(points):
            raise DomainError(f"need len(times) == len(points) >= 1, got {len(times)} and {len(points)}")
        if not (np.all(np.isfinite(times)) and np.all(np.isfinite(points))):
            raise DomainError("path contains non-finite values")
        if np.any(np.diff(times) <= 0):
            raise DomainError("path times must be strictly increasing")
        object.__setattr__(self, "times", _frozen(times))
        object.__setattr__(self, "points", _frozen(points))

    @classmethod
    def from_points(cls, points: ArrayLike, start: float = 0.0, end: float = 1.0) -> Path:
        """Points on a uniform time grid of [start, end] (a single point sits at ``start``)."""
        pts = np.array(points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        n = len(pts)
        times = np.linspace(start, end, n) if n > 1 else np.array([start])
        return cls(times, pts)

    @classmethod
    def line(cls, direction: ArrayLike, start: float = 0.0, end: float = 1.0) -> Path:
        """Straight line from the origin with velocity ``direction`` on [start, end]."""
        v = np.array(direction, dtype=float).reshape(-1)
        return cls(np.array([start, end]), np.vstack([np.zeros_like(v), v * (end - start)]))

    @classmethod
    def constant(cls, point: ArrayLike, start: float = 0.0, end: float = 1.0) -> Path:
        p = np.array(point, dtype=float).reshape(-1)
        if end == start:
            return cls(np.array([start]), p.reshape(1, -1))
        return cls(np.array([start, end]), np.vstack([p, p]))

    @property
    def dim(self) -> int:
        return int(self.points.shape[1])

    @property
    def start(self) -> float:
        return float(self.times[0])

    @property
    def end(self) -> float:
        return float(self.times[-1])

    @property
    def knots(self) -> Partition:
        return Partition(self.times)

    @property
    def displacement(self) -> np.ndarray:
        return self.points[-1] - self.points[0]

    def __len__(self) -> int:
        return len(self.times)


@dataclass(frozen=True, eq=False)
class Partition:
    knots: np.ndarray

    def __post_init__(self) -> None:
        knots = np.array(self.knots, dtype=float).reshape(-1)
        if len(knots) < 1:
            raise DomainError("a partition needs at least one knot")
        if not np.all(np.isfinite(knots)) or np.any(np.diff(knots) <= 0):
            raise DomainError("partition knots must be finite and strictly increasing")
        object.__setattr__(self, "knots", _frozen(knots))

    @classmethod
    def uniform(cls, start: float, end: float, n_intervals: int) -> Partition:
        if n_intervals < 1:
            raise DomainError("n_intervals must be >= 1")
        return cls(np.linspace(start, end, n_intervals + 1))

    @property
    def mesh(self) -> float:
        return float(np.max(np.diff(self.knots))) if len(self.knots) > 1 else 0.0

    def covers(self, path: Path) -> bool:
        return self.knots[0] == path.start and self.knots[-1] == path.end

    def __len__(self) -> int:
        return len(self.knots)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Partition) and np.array_equal(self.knots, other.knots)

    def __hash__(self) -> int:
        return hash(self.knots.tobytes())


@dataclass(frozen=True, eq=False)
class IncrementSequence:
    """Jumps of the piecewise-constant approximation; ``knots`` default to 0..n."""

    deltas: np.ndarray
    knots: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self) -> None:
        deltas = np.array(self.deltas, dtype=float)
        if deltas.ndim == 1:
            deltas = deltas.reshape(-1, 1)
        if deltas.ndim != 2:
            raise DomainError(f"deltas must be an (n, d) array, got shape {deltas.shape}")
        if not np.all(np.isfinite(deltas)):
            raise DomainError("increments must be finite")
        knots = np.array(self.knots, dtype=float).reshape(-1)
        if knots.size == 0:
            knots = np.arange(len(deltas) + 1, dtype=float)
        if len(knots) != len(deltas) + 1:
            raise DomainError("need exactly one more knot than increments")
        object.__setattr__(self, "deltas", _frozen(deltas))
        object.__setattr__(self, "knots", _frozen(knots))

    @property
    def dim(self) -> int:
        return int(self.deltas.shape[1])

    @property
    def total(self) -> np.ndarray:
        return self.deltas.sum(axis=0)

    def gram(self) -> np.ndarray:
        """Euclidean inner products ⟨Δ_p, Δ_q⟩ of every pair of increments."""
        return self.deltas @ self.deltas.T

    def __len__(self) -> int:
        return len(self.deltas)


@dataclass(frozen=True)
class PartitionSpec:
    """How to discretize a path: dyadic order over its own knots, then optionally split
    every interval whose 1-variation exceeds ``max_variation``."""

    dyadic_order: int = 0
    max_variation: float | None = None

    def __post_init__(self) -> None:
        if self.dyadic_order < 0:
            raise DomainError("dyadic order must be >= 0")
        if self.max_variation is not None and not self.max_variation > 0:
            raise DomainError("max_variation must be positive")


def _check_interval(path: Path, s: float, t: float) -> None:
    if s > t:
        raise DomainError(f"interval [{s}, {t}] is reversed")
    if s < path.start or t > path.end:
        raise DomainError(f"interval [{s}, {t}] is outside the path span [{path.start}, {path.end}]")


def evaluate(path: Path, t: float | np.ndarray) -> np.ndarray:
    """Linear interpolation at time(s) ``t``; returns shape (d,) or (len(t), d)."""
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(ts < path.start) or np.any(ts > path.end):
        raise DomainError(f"time outside the path span [{path.start}, {path.end}]")
    if len(path) == 1:
        out = np.repeat(path.points, len(ts), axis=0)
    else:
        out = np.column_stack([np.interp(ts, path.times, path.points[:, j]) for j in range(path.dim)])
    return out[0] if np.ndim(t) == 0 else out


def restrict(path: Path, s: float, t: float) -> Path:
    """The sub-path on [s, t], with interpolated endpoints."""
    _check_interval(path, s, t)
    if s == t:
        return Path(np.array([s]), evaluate(path, s).reshape(1, -1))
    inner = (path.times > s) & (path.times < t)
    times = np.concatenate([[s], path.times[inner], [t]])
    points = np.vstack([evaluate(path, s), path.points[inner], evaluate(path, t)])
    return Path(times, points)


def one_variation(path: Path, interval: tuple[float, float] | None = None) -> float:
    """‖γ‖_{1;[s,t]}, exact for piecewise-linear paths (sum of segment lengths)."""
    sub = path if interval is None else restrict(path, *interval)
    if len(sub) < 2:
        return 0.0
    return float(np.sum(np.linalg.norm(np.diff(sub.points, axis=0), axis=1)))


def ell1_variation(path: Path) -> float:
    """1-variation for the coordinate ℓ¹ norm; bounds the sum of |S^I| over words of a level."""
    if len(path) < 2:
        return 0.0
    return float(np.sum(np.abs(np.diff(path.points, axis=0))))


def concat_reverse(gamma: Path, sigma: Path) -> Path:
    """y = γ ∗ ←σ: γ, then σ run backwards, translated to start where γ ends.

    Times continue contiguously after γ. The junction is a single sample when σ already ends
    where γ ends; otherwise the translated copy is appended in full after a stationary segment.
    """
    if gamma.dim != sigma.dim:
        raise DomainError(f"dimension mismatch: {gamma.dim} vs {sigma.dim}")
    rev_points = sigma.points[::-1] - sigma.points[-1] + gamma.points[-1]
    rev_offsets = sigma.end - sigma.times[::-1]
    if np.array_equal(sigma.points[-1], gamma.points[-1]):
        rev_points = rev_points[1:]
        rev_offsets = rev_offsets[1:]
    else:
        step = (sigma.end - sigma.start) / (len(sigma) - 1) if len(sigma) > 1 else 1.0
        rev_offsets = rev_offsets + step
    times = np.concatenate([gamma.times, gamma.end + rev_offsets])
    return Path(times, np.vstack([gamma.points, rev_points]))


def piecewise_constant_increments(path: Path, partition: Partition | None = None) -> IncrementSequence:
    """Δ_k = γ(t_{k+1}) − γ(t_k) at the partition knots (the path's own knots by default)."""
    part = path.knots if partition is None else partition
    if not part.covers(path):
        raise DomainError(
            f"partition [{part.knots[0]}, {part.knots[-1]}] does not cover the path span [{path.start}, {path.end}]"
        )
    values = evaluate(path, part.knots)
    return IncrementSequence(np.diff(values, axis=0), part.knots)


def dyadic_refine(partition: Partition, order: int) -> Partition:
    """Split every interval into 2**order equal pieces; order 0 is the identity."""
    if order < 0:
        raise DomainError("dyadic order must be >= 0")
    if order == 0 or len(partition) < 2:
        return partition
    fractions = np.arange(2**order) / 2**order
    left = partition.knots[:-1]
    width = np.diff(partition.knots)
    inner = (left[:, None] + width[:, None] * fractions[None, :]).reshape(-1)
    return Partition(np.append(inner, partition.knots[-1]))


def discretize(path: Path, spec: PartitionSpec) -> Partition:
    """The path's knots refined by ``spec``."""
    part = dyadic_refine(path.knots, spec.dyadic_order)
    if spec.max_variation is None or len(part) < 2:
        return part
    values = evaluate(path, part.knots)
    lengths = np.linalg.norm(np.diff(values, axis=0), axis=1)
    pieces: list[np.ndarray] = []
    for a, b, length in zip(part.knots[:-1], part.knots[1:], lengths, strict=True):
        n = max(1, math.ceil(length / spec.max_variation))
        pieces.append(a + (b - a) * np.arange(n) / n)
    pieces.append(part.knots[-1:])
    return Partition(np.concatenate(pieces))


def fbm_covariance(times: np.ndarray, hurst: float) -> np.ndarray:
    """R(s, t) = ½(s^{2H} + t^{2H} − |s − t|^{2H})."""
    s, t = np.meshgrid(times, times, indexing="ij")
    two_h = 2 * hurst
    return 0.5 * (s**two_h + t**two_h - np.abs(s - t) ** two_h)


def gen_fbm(hurst: float, n_points: int, dim: int, seed: int) -> Path:
    """Fractional Brownian motion on a uniform grid of [0, 1] by exact Cholesky factorization."""
    if not 0 < hurst < 1:
        raise DomainError(f"Hurst parameter must lie in (0, 1), got {hurst}")
    if n_points < 2:
        raise DomainError("n_points must be >= 2")
    if dim < 1:
        raise DomainError("dim must be >= 1")
    times = np.linspace(0.0, 1.0, n_points)
    try:
        chol = scipy.linalg.cholesky(fbm_covariance(times[1:], hurst), lower=True)
    except np.linalg.LinAlgError as e:
        raise NumericError(f"fBm covariance is not numerically positive definite ({e})") from None
    z = np.random.default_rng(seed).standard_normal((n_points - 1, dim))
    values = np.vstack([np.zeros((1, dim)), chol @ z])
    return Path(times, values)
