"""Truncated signatures, iterated-sums signatures and the truncated signature kernel."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from sigdev import MAX_TENSOR_ENTRIES
from sigdev.errors import DomainError, ResourceError
from sigdev.paths import IncrementSequence, Path, one_variation, restrict

type Word = str | Sequence[int]


@dataclass(frozen=True, eq=False)
class TruncatedSignature:
    """Levels 0..level; ``tensors[m]`` has shape (dim,) * m, words index it with letters 1..dim."""

    dim: int
    level: int
    tensors: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if len(self.tensors) != self.level + 1:
            raise DomainError(f"expected {self.level + 1} levels, got {len(self.tensors)}")
        for m, tensor in enumerate(self.tensors):
            if tensor.shape != (self.dim,) * m:
                raise DomainError(f"level {m} has shape {tensor.shape}, expected {(self.dim,) * m}")

    def __getitem__(self, m: int) -> np.ndarray:
        return self.tensors[m]

    def __mul__(self, other: TruncatedSignature) -> TruncatedSignature:
        return chen_product(self, other)


def signature_norms(sig: TruncatedSignature) -> list[float]:
    """Hilbert-Schmidt norm of every level."""
    return [float(np.sqrt(np.sum(t * t))) for t in sig.tensors]


def check_budget(dim: int, level: int) -> None:
    if level < 0:
        raise DomainError("truncation level must be >= 0")
    if dim**level > MAX_TENSOR_ENTRIES:
        raise ResourceError(f"d^L = {dim}^{level} exceeds the dense tensor limit {MAX_TENSOR_ENTRIES}")


def identity(dim: int, level: int) -> TruncatedSignature:
    """(1, 0, 0, ...): the signature of a constant path."""
    check_budget(dim, level)
    tensors = (np.array(1.0),) + tuple(np.zeros((dim,) * m) for m in range(1, level + 1))
    return TruncatedSignature(dim, level, tensors)


def tensor_exp(w: np.ndarray, level: int) -> TruncatedSignature:
    """(w^{⊗m} / m!)_{m ≤ level}, the signature of one linear segment with increment w."""
    w = np.asarray(w, dtype=float).reshape(-1)
    check_budget(len(w), level)
    tensors = [np.array(1.0)]
    for m in range(1, level + 1):
        tensors.append(np.multiply.outer(tensors[-1], w) / m)
    return TruncatedSignature(len(w), level, tuple(tensors))


def chen_product(a: TruncatedSignature, b: TruncatedSignature) -> TruncatedSignature:
    """Truncated tensor-algebra product; level m sums a[k] ⊗ b[m−k] for k = 0..m in order."""
    if a.dim != b.dim or a.level != b.level:
        raise DomainError("signatures must share dimension and level")
    tensors = []
    for m in range(a.level + 1):
        acc = np.multiply.outer(a[0], b[m])
        for k in range(1, m + 1):
            acc = acc + np.multiply.outer(a[k], b[m - k])
        tensors.append(acc)
    return TruncatedSignature(a.dim, a.level, tuple(tensors))


def truncated_signature(path: Path, interval: tuple[float, float] | None = None, level: int = 2) -> TruncatedSignature:
    """S_{s,t}(γ) up to ``level``, by Chen's identity over the linear segments."""
    check_budget(path.dim, level)
    sub = path if interval is None else restrict(path, *interval)
    sig = identity(path.dim, level)
    for w in np.diff(sub.points, axis=0):
        sig = chen_product(sig, tensor_exp(w, level))
    return sig


def iterated_sums_signature(incs: IncrementSequence, level: int) -> TruncatedSignature:
    """Level m = Σ_{i_1<…<i_m} Δ_{i_1} ⊗ … ⊗ Δ_{i_m}."""
    check_budget(incs.dim, level)
    tensors = list(identity(incs.dim, level).tensors)
    for delta in incs.deltas:
        # descending so level m-1 is still the pre-update value
        for m in range(level, 0, -1):
            tensors[m] = tensors[m] + np.multiply.outer(tensors[m - 1], delta)
    return TruncatedSignature(incs.dim, level, tuple(tensors))


def parse_word(word: Word) -> tuple[int, ...]:
    """Letters of a word: the string "12" becomes (1, 2), int sequences pass through."""
    if isinstance(word, str) and word and not word.isdigit():
        raise DomainError(f"word {word!r} must be a string of letter digits")
    return tuple(int(c) for c in word)


def coordinate_coefficient(sig: TruncatedSignature, word: Word) -> float:
    """S^I for a word I of letters in 1..dim; S^∅ = 1."""
    letters = parse_word(word)
    if len(letters) > sig.level:
        raise DomainError(f"word of length {len(letters)} exceeds truncation level {sig.level}")
    if any(not 1 <= c <= sig.dim for c in letters):
        raise DomainError(f"letters must lie in 1..{sig.dim}, got {letters}")
    return float(sig[len(letters)][tuple(c - 1 for c in letters)])


def factorial_tail(x: float, level: int, power: int = 1) -> float:
    """Σ_{m>level} x^m / (m!)^power."""
    if x == 0:
        return 0.0
    term = x ** (level + 1) / math.factorial(level + 1) ** power
    total = 0.0
    m = level + 1
    while term > 0:
        total += term
        m += 1
        term *= x / m**power
        if not math.isfinite(total):
            return math.inf
        if m > x and term < 1e-18 * total:
            break
    return total


def choose_kernel_level(var_product: float, tol: float, max_level: int = 64) -> int:
    """Smallest L whose remainder Σ_{m>L} v^m/(m!)² is below ``tol``."""
    for level in range(max_level + 1):
        if factorial_tail(var_product, level, power=2) < tol:
            return level
    raise ResourceError(
        f"no truncation level <= {max_level} reaches tolerance {tol}",
        bound=factorial_tail(var_product, max_level, power=2),
    )


class TruncatedKernel(NamedTuple):
    value: float
    remainder: float
    level: int


def signature_kernel_truncated(gamma: Path, sigma: Path, s: float, t: float, level: int) -> TruncatedKernel:
    """Σ_{m≤L} ⟨S_{0,s}(γ)^m, S_{0,t}(σ)^m⟩_HS with the factorial remainder bound."""
    if gamma.dim != sigma.dim:
        raise DomainError(f"dimension mismatch: {gamma.dim} vs {sigma.dim}")
    sig_g = truncated_signature(gamma, (gamma.start, s), level)
    sig_s = truncated_signature(sigma, (sigma.start, t), level)
    value = 0.0
    for m in range(level + 1):
        value += float(np.sum(sig_g[m] * sig_s[m]))
    var_product = one_variation(gamma, (gamma.start, s)) * one_variation(sigma, (sigma.start, t))
    return TruncatedKernel(value, factorial_tail(var_product, level, power=2), level)


def signature_kernel(gamma: Path, sigma: Path, tol: float = 1e-10) -> TruncatedKernel:
    """K_sig over the full spans, truncated where the remainder bound drops below ``tol``."""
    level = choose_kernel_level(one_variation(gamma) * one_variation(sigma), tol)
    return signature_kernel_truncated(gamma, sigma, gamma.end, sigma.end, level)
