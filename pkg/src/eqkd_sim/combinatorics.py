"""Exact integer combinatorics for the partition decomposition.

Everything in this module is exact big-integer arithmetic; nothing is
converted to floating point here.  Probability layers divide these counts
at the last possible moment so that ratios of astronomically large counts
keep their leading digits.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterator

__all__ = [
    "Partition",
    "MultiplicityVector",
    "partitions_of",
    "multiplicity_vector",
    "binomial",
    "mode_count_weight",
    "bounded_compositions",
    "bounded_compositions_oracle",
    "ORACLE_TOTAL_LIMIT",
]

# Exhaustive enumeration beyond this total is exponentially expensive.
ORACLE_TOTAL_LIMIT = 16


@dataclass(frozen=True)
class Partition:
    """An integer partition: positive parts in non-increasing order.

    >>> Partition((3, 1, 1)).total
    5
    >>> Partition((3, 1, 1)).length
    3
    """

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        parts = tuple(self.parts)
        object.__setattr__(self, "parts", parts)
        for i, p in enumerate(parts):
            if p < 1:
                raise ValueError(f"partition part must be >= 1, got {p}")
            if i and parts[i - 1] < p:
                raise ValueError(f"partition parts must be non-increasing: {parts}")

    @property
    def total(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)


@dataclass(frozen=True)
class MultiplicityVector:
    """Part-value multiplicities of a partition.

    ``counts[i - 1]`` is the number of parts equal to ``i``; the vector has
    one entry per unit of the partition total, so ``sum(i * counts[i-1]) ==
    len(counts)``.
    """

    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        counts = tuple(self.counts)
        object.__setattr__(self, "counts", counts)
        if any(c < 0 for c in counts):
            raise ValueError(f"multiplicities must be >= 0: {counts}")
        total = sum(i * c for i, c in enumerate(counts, start=1))
        if total != len(counts):
            raise ValueError(
                f"multiplicity vector of length {len(counts)} encodes total {total}"
            )

    @property
    def total(self) -> int:
        return len(self.counts)

    @property
    def length(self) -> int:
        return sum(self.counts)

    def to_partition(self) -> Partition:
        parts: list[int] = []
        for value in range(len(self.counts), 0, -1):
            parts.extend([value] * self.counts[value - 1])
        return Partition(tuple(parts))


def partitions_of(total: int) -> Iterator[Partition]:
    """Yield every partition of ``total`` exactly once, largest-first.

    The order is reverse-lexicographic on the part tuples, so the stream is
    deterministic and starts at the single-row shape ``[total]`` and ends at
    the single-column shape ``[1] * total``.

    >>> [p.parts for p in partitions_of(4)]
    [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    >>> [p.parts for p in partitions_of(0)]
    [()]
    """
    if total < 0:
        raise ValueError(f"cannot partition a negative total: {total}")
    if total == 0:
        yield Partition(())
        return
    parts = (total,)
    yield Partition(parts)
    while True:
        # Rightmost part that can still be decremented.
        i = len(parts) - 1
        while i >= 0 and parts[i] == 1:
            i -= 1
        if i < 0:
            return
        remainder = len(parts) - i
        parts = parts[:i] + (parts[i] - 1,)
        # Redistribute the freed units into maximal trailing parts.
        while remainder > 0:
            nxt = min(parts[-1], remainder)
            parts += (nxt,)
            remainder -= nxt
        yield Partition(parts)


def multiplicity_vector(partition: Partition) -> MultiplicityVector:
    """Count how many parts equal each value from 1 to the partition total.

    >>> multiplicity_vector(Partition((3, 1, 1))).counts
    (2, 0, 1, 0, 0)
    """
    total = partition.total
    counts = [0] * total
    for part in partition.parts:
        counts[part - 1] += 1
    return MultiplicityVector(tuple(counts))


def binomial(n: int, k: int) -> int:
    """Exact binomial coefficient; 0 when k > n, 1 when k == 0."""
    if n < 0 or k < 0:
        raise ValueError(f"binomial arguments must be non-negative: ({n}, {k})")
    return math.comb(n, k)


def mode_count_weight(partition: Partition, mode_count: int) -> int:
    """Number of distinct assignments of the partition's parts to labelled modes.

    Equals the squared norm of the unnormalized symmetric occupation state:
    the multinomial ``N! / (m_1! m_2! ... (N - l)!)`` where ``m_v`` counts the
    parts equal to ``v`` and ``l`` is the partition length.  Computed as a
    falling factorial so that mode counts up to ~1e7 stay cheap.
    """
    length = partition.length
    if length > mode_count:
        raise ValueError(
            f"partition longer than mode count ({length} > {mode_count})"
        )
    assignments = 1
    for i in range(length):
        assignments *= mode_count - i
    for repeat in Counter(partition.parts).values():
        assignments //= math.factorial(repeat)
    return assignments


def bounded_compositions(partition: Partition, m: int) -> int:
    """Count integer solutions of ``sum(x_i) == m`` with ``0 <= x_i <= part_i``.

    Inclusion-exclusion over the set of variables forced past their bound,
    grouped by distinct part value so the cost is polynomial in the number of
    distinct values rather than 2**length.

    >>> [bounded_compositions(Partition((2, 1)), m) for m in range(4)]
    [1, 2, 2, 1]
    """
    total = partition.total
    if m < 0 or m > total:
        raise ValueError(f"polarization count out of range: m={m}, total={total}")
    length = partition.length
    if length == 0:
        return 1  # empty sum: only m == 0, enforced by the range check
    groups = sorted(Counter(partition.parts).items())
    result = 0

    def accumulate(idx: int, sign: int, ways: int, removed: int) -> None:
        nonlocal result
        if idx == len(groups):
            result += sign * ways * math.comb(length - 1 + m - removed, length - 1)
            return
        value, repeat = groups[idx]
        overshoot = value + 1
        for k in range(repeat + 1):
            if removed + k * overshoot > m:
                break  # deeper choices only remove more
            accumulate(
                idx + 1,
                sign if k % 2 == 0 else -sign,
                ways * math.comb(repeat, k),
                removed + k * overshoot,
            )

    accumulate(0, 1, 1, 0)
    return result


def bounded_compositions_oracle(partition: Partition, m: int) -> int:
    """Exhaustively count the bounded compositions of ``m``.

    Same contract as :func:`bounded_compositions`, by nested enumeration of
    every variable; refuses totals above ``ORACLE_TOTAL_LIMIT``.
    """
    total = partition.total
    if total > ORACLE_TOTAL_LIMIT:
        raise ValueError(f"oracle size limit: total {total} > {ORACLE_TOTAL_LIMIT}")
    if m < 0 or m > total:
        raise ValueError(f"polarization count out of range: m={m}, total={total}")
    ranges = [range(part + 1) for part in partition.parts]
    return sum(1 for xs in itertools.product(*ranges) if sum(xs) == m)
