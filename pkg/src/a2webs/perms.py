"""Permutations, reduced words, pattern avoidance, and tableau counts.

Permutations on n letters are tuples (w(1), ..., w(n)) with values 1..n.
Generator indices are 1-based: s_i swaps the values in positions i, i+1.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator, Sequence

Perm = tuple[int, ...]


def identity_perm(n: int) -> Perm:
    return tuple(range(1, n + 1))


def is_perm(w: Sequence[int]) -> bool:
    return sorted(w) == list(range(1, len(w) + 1))


def compose(u: Perm, v: Perm) -> Perm:
    """(u v)(i) = u(v(i))."""
    return tuple(u[v[i] - 1] for i in range(len(u)))


def inverse(w: Perm) -> Perm:
    out = [0] * len(w)
    for i, x in enumerate(w):
        out[x - 1] = i + 1
    return tuple(out)


def times_s(w: Perm, i: int) -> Perm:
    """w * s_i (swap positions i, i+1; 1-based i < n)."""
    if not 1 <= i < len(w):
        raise ValueError(f"generator index {i} out of range for n={len(w)}")
    lst = list(w)
    lst[i - 1], lst[i] = lst[i], lst[i - 1]
    return tuple(lst)


def perm_length(w: Perm) -> int:
    n = len(w)
    return sum(1 for i in range(n) for j in range(i + 1, n) if w[i] > w[j])


def descents(w: Perm) -> list[int]:
    return [i for i in range(1, len(w)) if w[i - 1] > w[i]]


def perm_from_word(n: int, word: Sequence[int]) -> Perm:
    w = identity_perm(n)
    for i in word:
        w = times_s(w, i)
    return w


def first_reduced_word(w: Perm) -> tuple[int, ...]:
    """Reduced word chosen by repeatedly stripping the smallest descent."""
    rev: list[int] = []
    while True:
        ds = descents(w)
        if not ds:
            break
        rev.append(ds[0])
        w = times_s(w, ds[0])
    return tuple(reversed(rev))


def all_reduced_words(w: Perm) -> list[tuple[int, ...]]:
    cache: dict[Perm, list[tuple[int, ...]]] = {}

    def go(u: Perm) -> list[tuple[int, ...]]:
        if u in cache:
            return cache[u]
        ds = descents(u)
        if not ds:
            cache[u] = [()]
        else:
            out = []
            for i in ds:
                for word in go(times_s(u, i)):
                    out.append(word + (i,))
            cache[u] = out
        return cache[u]

    return go(w)


def all_perms(n: int) -> Iterator[Perm]:
    return itertools.permutations(range(1, n + 1))


def contains_pattern(w: Perm, pattern: Perm) -> bool:
    k = len(pattern)
    rel = tuple(sorted(range(k), key=lambda i: pattern[i]))
    for sub in itertools.combinations(w, k):
        if tuple(sorted(range(k), key=lambda i: sub[i])) == rel:
            return True
    return False


def avoids(w: Perm, pattern: Perm) -> bool:
    return not contains_pattern(w, pattern)


def count_avoiding(n: int, pattern: Perm) -> int:
    return sum(1 for w in all_perms(n) if avoids(w, pattern))


@lru_cache(maxsize=None)
def catalan(n: int) -> int:
    if n == 0:
        return 1
    return catalan(n - 1) * 2 * (2 * n - 1) // (n + 1)


def kostka_three_column(n: int) -> int:
    """Count SSYT of rectangular shape n rows x 3 columns whose content
    uses each of the letters 1..n once and each of n+1..2n twice.

    Semistandard: rows weakly increase left to right, columns strictly
    increase top to bottom.  Enumerated by row-major backtracking.
    """
    remaining = [0] * (2 * n + 1)
    for x in range(1, n + 1):
        remaining[x] = 1
    for x in range(n + 1, 2 * n + 1):
        remaining[x] = 2
    grid = [[0] * 3 for _ in range(n)]
    count = 0

    def fill(pos: int) -> None:
        nonlocal count
        if pos == 3 * n:
            count += 1
            return
        r, c = divmod(pos, 3)
        lo = 1
        if c > 0:
            lo = max(lo, grid[r][c - 1])
        if r > 0:
            lo = max(lo, grid[r - 1][c] + 1)
        for x in range(lo, 2 * n + 1):
            if remaining[x]:
                remaining[x] -= 1
                grid[r][c] = x
                fill(pos + 1)
                remaining[x] += 1

    fill(0)
    return count
