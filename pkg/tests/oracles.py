"""Independent reference computations used by the test suite.

These deliberately avoid the library's own algorithms: partition counts come
from the pentagonal-number recurrence, partition sets from a max-part
recursion, binomials from the Pascal triangle, and distributions/BER values
from direct enumeration.
"""

from __future__ import annotations

import itertools
from functools import lru_cache


def partition_count(n: int) -> int:
    """p(n) via the pentagonal-number recurrence."""
    table = [1] + [0] * n
    for total in range(1, n + 1):
        acc = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            g2 = k * (3 * k + 1) // 2
            if g1 > total and g2 > total:
                break
            sign = -1 if k % 2 == 0 else 1
            if g1 <= total:
                acc += sign * table[total - g1]
            if g2 <= total:
                acc += sign * table[total - g2]
            k += 1
        table[total] = acc
    return table[n]


def partition_set(n: int) -> set[tuple[int, ...]]:
    """All partitions of n as non-increasing tuples, by max-part recursion."""

    def gen(remaining: int, max_part: int) -> list[tuple[int, ...]]:
        if remaining == 0:
            return [()]
        out = []
        for first in range(min(remaining, max_part), 0, -1):
            for rest in gen(remaining - first, first):
                out.append((first,) + rest)
        return out

    return set(gen(n, n))


@lru_cache(maxsize=None)
def pascal_binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    if k == 0 or k == n:
        return 1
    return pascal_binomial(n - 1, k - 1) + pascal_binomial(n - 1, k)


def mode_assignments(parts: tuple[int, ...], n_modes: int) -> int:
    """Count occupation vectors over labelled modes realizing the partition."""
    count = 0
    total = sum(parts)
    for occ in itertools.product(range(total + 1), repeat=n_modes):
        if sum(occ) != total:
            continue
        if tuple(sorted((x for x in occ if x > 0), reverse=True)) == parts:
            count += 1
    return count
