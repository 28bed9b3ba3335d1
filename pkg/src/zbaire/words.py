"""Finite integer words: prefix order, coordinate-wise arithmetic, enumerations.

Words are plain tuples of Python ints, so arithmetic is exact at any size.

The canonical enumeration of Z^{<omega} orders words by the weight
``len(w)**2 + sum(zigzag_rank(e) for e in w)``, then by length, then
lexicographically under the zigzag order on Z.  Every weight class is finite
and appending an entry strictly increases the weight, so the order is a
bijection with N in which prefixes come first.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import count
from math import comb, isqrt
from operator import add, sub
from typing import Iterable, Iterator, Sequence

Word = tuple[int, ...]

EMPTY: Word = ()


class WordError(ValueError):
    pass


def word(entries: Iterable[int] = ()) -> Word:
    return tuple(int(e) for e in entries)


# --- zigzag order on Z: 0, 1, -1, 2, -2, ...

def zigzag_rank(i: int) -> int:
    return 2 * i - 1 if i > 0 else -2 * i


def zigzag_int(r: int) -> int:
    if r < 0:
        raise WordError(f"negative rank {r}")
    return (r + 1) // 2 if r % 2 else -(r // 2)


def zigzag() -> Iterator[int]:
    """All of Z in zigzag order."""
    for r in count():
        yield zigzag_int(r)


def zigzag_sorted(values: Iterable[int]) -> list[int]:
    return sorted(values, key=zigzag_rank)


def zigzag_range(b: int) -> list[int]:
    """The first ``b`` integers in zigzag order."""
    return [zigzag_int(r) for r in range(b)]


def window_alphabet(B: int) -> list[int]:
    """{-B..B} in zigzag order."""
    return zigzag_range(2 * B + 1)


# --- prefix order

def is_prefix(u: Sequence[int], v: Sequence[int]) -> bool:
    """u is an initial segment of v (u ⊆ v)."""
    return len(u) <= len(v) and tuple(v[: len(u)]) == tuple(u)


def comparable(u: Sequence[int], v: Sequence[int]) -> bool:
    return is_prefix(u, v) or is_prefix(v, u)


def incompatible(u: Sequence[int], v: Sequence[int]) -> bool:
    return not comparable(u, v)


def prefixes(w: Word) -> list[Word]:
    """All initial segments of w, shortest first (including ∅ and w)."""
    return [w[:i] for i in range(len(w) + 1)]


def zeros(n: int) -> Word:
    return (0,) * n


# --- arithmetic

def word_add(u: Sequence[int], v: Sequence[int]) -> Word:
    if len(u) != len(v):
        raise WordError(f"length mismatch: {len(u)} vs {len(v)}")
    return tuple(map(add, u, v))


def word_sub(u: Sequence[int], v: Sequence[int]) -> Word:
    """u - v on the common length (the longer argument is restricted)."""
    return tuple(map(sub, u, v))


def word_scale(k: int, u: Sequence[int]) -> Word:
    return tuple(k * a for a in u)


# --- canonical enumeration of Z^{<omega}

@lru_cache(maxsize=None)
def _compositions(length: int, total: int) -> int:
    """Number of tuples of naturals of the given length summing to total."""
    if length == 0:
        return 1 if total == 0 else 0
    return comb(total + length - 1, length - 1)


@lru_cache(maxsize=None)
def _weight_class_size(weight: int) -> int:
    return sum(_compositions(L, weight - L * L) for L in range(isqrt(weight) + 1))


@lru_cache(maxsize=None)
def _words_below_weight(weight: int) -> int:
    return sum(_weight_class_size(k) for k in range(weight))


def weight(w: Sequence[int]) -> int:
    return len(w) ** 2 + sum(zigzag_rank(e) for e in w)


def enum_index(w: Sequence[int]) -> int:
    ranks = [zigzag_rank(e) for e in w]
    L = len(ranks)
    total = sum(ranks)
    k = L * L + total
    idx = _words_below_weight(k)
    idx += sum(_compositions(shorter, k - shorter * shorter) for shorter in range(L))
    left = total
    for i, r in enumerate(ranks):
        for v in range(r):
            idx += _compositions(L - i - 1, left - v)
        left -= r
    return idx


def enum_word(n: int) -> Word:
    if n < 0:
        raise WordError(f"negative index {n}")
    k = 0
    while _words_below_weight(k + 1) <= n:
        k += 1
    rest = n - _words_below_weight(k)
    L = 0
    while True:
        c = _compositions(L, k - L * L) if L * L <= k else 0
        if rest < c:
            break
        rest -= c
        L += 1
    left = k - L * L
    ranks = []
    for i in range(L):
        v = 0
        while True:
            c = _compositions(L - i - 1, left - v)
            if rest < c:
                break
            rest -= c
            v += 1
        ranks.append(v)
        left -= v
    return tuple(zigzag_int(r) for r in ranks)


def binary_lex(n: int, k: int) -> Word:
    """The k-th binary word of length n in lexicographic order."""
    if not 0 <= k < 2 ** n:
        raise WordError(f"k={k} out of range for n={n}")
    return tuple((k >> (n - 1 - i)) & 1 for i in range(n))


def binary_words(n: int) -> list[Word]:
    return [binary_lex(n, k) for k in range(2 ** n)]
