"""Non-crossing pair partitions, Dyck words, generations and semicircular moments."""

from __future__ import annotations

import itertools
import json
import math
from collections.abc import Iterable
from dataclasses import dataclass
from functools import cache
from typing import Any

import numpy as np

from sigdev import MAX_TENSOR_ENTRIES
from sigdev.errors import DomainError, ResourceError
from sigdev.signature import Word, parse_word

MAX_ENUMERATION = 20  # NC₂(20) has C₁₀ = 16796 elements
MAX_CATALAN_INDEX = 30
MAX_CHECK_LENGTH = 10

type Pair = tuple[int, int]


@dataclass(frozen=True)
class PairPartition:
    """A non-crossing pair partition of {1, ..., 2k}."""

    pairs: frozenset[Pair]

    def __init__(self, pairs: Iterable[Iterable[int]]) -> None:
        normalized = frozenset(tuple(sorted(p)) for p in pairs)
        object.__setattr__(self, "pairs", normalized)
        self._validate()

    def _validate(self) -> None:
        points = [x for p in self.pairs for x in p]
        if any(len(p) != 2 for p in self.pairs):
            raise DomainError("every part must have exactly two elements")
        if sorted(points) != list(range(1, len(points) + 1)):
            raise DomainError(f"pairs must be disjoint and cover 1..{len(points)}")
        for (a, c), (b, d) in itertools.combinations(self.sorted_pairs, 2):
            if a < b < c < d:
                raise DomainError(f"pairs {{{a},{c}}} and {{{b},{d}}} cross")

    @property
    def size(self) -> int:
        return 2 * len(self.pairs)

    @property
    def sorted_pairs(self) -> tuple[Pair, ...]:
        return tuple(sorted(self.pairs))  # type: ignore[arg-type]


@dataclass(frozen=True)
class DyckWord:
    """Balanced parentheses, e.g. ``DyckWord("(()())()")``."""

    text: str

    def __post_init__(self) -> None:
        depth = 0
        for c in self.text:
            if c not in "()":
                raise DomainError(f"Dyck words use only '(' and ')', got {c!r}")
            depth += 1 if c == "(" else -1
            if depth < 0:
                raise DomainError(f"{self.text!r} closes more than it opens")
        if depth != 0:
            raise DomainError(f"{self.text!r} is unbalanced")

    def __len__(self) -> int:
        return len(self.text)

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class GenerationLabels:
    """(open, close, generation) for every pair, 1-based positions, sorted by open position."""

    labels: tuple[tuple[int, int, int], ...]

    @property
    def word_generation(self) -> int:
        return max((g for _, _, g in self.labels), default=0)

    @property
    def maximal(self) -> tuple[Pair, ...]:
        """g(d): the pairs carrying the word's generation."""
        top = self.word_generation
        return tuple((i, j) for i, j, g in self.labels if g == top)


@cache
def _pairings(lo: int, hi: int) -> tuple[tuple[Pair, ...], ...]:
    """All non-crossing pairings of lo..hi; ``lo`` is matched first."""
    if lo > hi:
        return ((),)
    out: list[tuple[Pair, ...]] = []
    for j in range(lo + 1, hi + 1, 2):
        for inside in _pairings(lo + 1, j - 1):
            for outside in _pairings(j + 1, hi):
                out.append(((lo, j), *inside, *outside))
    return tuple(out)


def nc2_enumerate(n: int) -> list[PairPartition]:
    """NC₂(n); empty for odd n."""
    if n < 0:
        raise DomainError("n must be >= 0")
    if n > MAX_ENUMERATION:
        raise ResourceError(f"NC2({n}) is too large to enumerate (limit {MAX_ENUMERATION})")
    if n % 2:
        return []
    return [PairPartition(p) for p in _pairings(1, n)]


def dyck_from_partition(p: PairPartition) -> DyckWord:
    chars = [""] * p.size
    for i, j in p.pairs:
        chars[i - 1] = "("
        chars[j - 1] = ")"
    return DyckWord("".join(chars))


def partition_from_dyck(d: DyckWord) -> PairPartition:
    stack: list[int] = []
    pairs: list[Pair] = []
    for pos, c in enumerate(d.text, start=1):
        if c == "(":
            stack.append(pos)
        else:
            pairs.append((stack.pop(), pos))
    return PairPartition(pairs)


def dyck_words(n: int) -> list[DyckWord]:
    return [dyck_from_partition(p) for p in nc2_enumerate(n)]


def generation_labels(d: DyckWord) -> GenerationLabels:
    """Generation 1 for the pair closing the word; generation k+1 for a pair whose ')' is
    followed by a parenthesis of a generation-k pair."""
    pairs = partition_from_dyck(d).sorted_pairs
    owner: dict[int, Pair] = {}
    for pair in pairs:
        owner[pair[0]] = pair
        owner[pair[1]] = pair
    gen: dict[Pair, int] = {}
    for pair in sorted(pairs, key=lambda p: -p[1]):
        close = pair[1]
        gen[pair] = 1 if close == len(d) else gen[owner[close + 1]] + 1
    return GenerationLabels(tuple((i, j, gen[(i, j)]) for i, j in pairs))


def insert_generation(d: DyckWord) -> frozenset[DyckWord]:
    """G(d): insert "()" immediately left of a non-empty set of parentheses of g(d)."""
    if not d.text:
        return frozenset({DyckWord("()")})
    sites = sorted(pos for pair in generation_labels(d).maximal for pos in pair)
    out: set[DyckWord] = set()
    for r in range(1, len(sites) + 1):
        for chosen in itertools.combinations(sites, r):
            marks = set(chosen)
            text = "".join(("()" if pos in marks else "") + c for pos, c in enumerate(d.text, start=1))
            out.add(DyckWord(text))
    return frozenset(out)


def generation_class(k: int, max_len: int) -> set[DyckWord]:
    """G_k restricted to words of length <= max_len; G_0 = {∅}."""
    if k == 0:
        return {DyckWord("")}
    return {
        d
        for n in range(2, max_len + 1, 2)
        for d in dyck_words(n)
        if generation_labels(d).word_generation == k
    }


def tree_of(d: DyckWord) -> list[Any]:
    """Rooted plane tree as nested lists: every pair is an edge to a child subtree."""
    root: list[Any] = []
    stack = [root]
    for c in d.text:
        if c == "(":
            child: list[Any] = []
            stack[-1].append(child)
            stack.append(child)
        else:
            stack.pop()
    return root


def tree_text(d: DyckWord) -> str:
    return json.dumps(tree_of(d), separators=(",", ":"))


def catalan(k: int) -> int:
    if not 0 <= k <= MAX_CATALAN_INDEX:
        raise DomainError(f"catalan index must lie in 0..{MAX_CATALAN_INDEX}, got {k}")
    return math.comb(2 * k, k) // (k + 1)


@cache
def _enumerated_moment(letters: tuple[int, ...]) -> int:
    count = 0
    for p in nc2_enumerate(len(letters)):
        if all(letters[i - 1] == letters[j - 1] for i, j in p.pairs):
            count += 1
    return count


def semicircular_moment(word: Word) -> int:
    """φ(I): number of non-crossing pair partitions joining only equal letters."""
    letters = parse_word(word)
    if len(letters) > MAX_ENUMERATION:
        raise ResourceError(f"words longer than {MAX_ENUMERATION} letters are not enumerated")
    if len(letters) % 2:
        return 0
    return _enumerated_moment(letters)


@cache
def _moment(letters: tuple[int, ...]) -> int:
    if not letters:
        return 1
    if len(letters) % 2:
        return 0
    last, head = letters[-1], letters[:-1]
    return sum(_moment(head[:p]) * _moment(head[p + 1 :]) for p, c in enumerate(head) if c == last)


def moment_recursive(word: Word) -> int:
    """φ(I) via φ(Ij) = Σ_{I=KjL} φ(K)φ(L), memoized."""
    return _moment(parse_word(word))


@cache
def moment_tensor(level: int, dim: int) -> np.ndarray:
    """Φ[i_1-1, ..., i_m-1] = φ(i_1 ... i_m) for every word of length ``level``.

    Built with the same recursion as ``moment_recursive``: the last index is tied by a
    Kronecker delta to position p, the prefix and the enclosed block contribute their own
    moment tensors.
    """
    if dim**level > MAX_TENSOR_ENTRIES:
        raise ResourceError(f"moment tensor {dim}^{level} exceeds the dense tensor limit {MAX_TENSOR_ENTRIES}")
    if level == 0:
        out = np.array(1.0)
    elif level % 2:
        out = np.zeros((dim,) * level)
    else:
        out = np.zeros((dim,) * level)
        eye = np.eye(dim)
        for p in range(1, level, 2):
            prefix = moment_tensor(p - 1, dim)
            inner = moment_tensor(level - p - 1, dim)
            # axes: prefix..., letter p, letter m, inner...  ->  move letter m to the end
            term = np.multiply.outer(np.multiply.outer(prefix, eye), inner)
            out += np.moveaxis(term, p, -1)
    out.setflags(write=False)
    return out


def _words(max_len: int, alphabet: int) -> Iterable[tuple[int, ...]]:
    for n in range(max_len + 1):
        yield from itertools.product(range(1, alphabet + 1), repeat=n)


def schwinger_dyson_check(max_len: int, alphabet: int) -> bool:
    """Cyclic invariance φ(IJ) = φ(JI) and φ(Ij) = Σ_{I=KjL} φ(K)φ(L) on every word up to
    ``max_len``, both sides by enumeration."""
    if not 0 <= max_len <= MAX_CHECK_LENGTH:
        raise DomainError(f"max_len must lie in 0..{MAX_CHECK_LENGTH}")
    if alphabet < 1:
        raise DomainError("alphabet size must be >= 1")
    for w in _words(max_len, alphabet):
        phi = semicircular_moment(w)
        if any(semicircular_moment(w[k:] + w[:k]) != phi for k in range(1, len(w))):
            return False
        if w:
            head, j = w[:-1], w[-1]
            split = sum(
                semicircular_moment(head[:p]) * semicircular_moment(head[p + 1 :])
                for p, c in enumerate(head)
                if c == j
            )
            if split != phi:
                return False
    return True
