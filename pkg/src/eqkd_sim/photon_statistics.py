"""Probability weights of the source light, reduced in three stages.

The emitted state is decomposed window by window into (1) a distribution
over the total number of photon pairs, (2) weights of the mode-occupation
partitions inside each pair-number manifold, and (3) polarization-split
weights inside each partition.  Channel and detector losses are *not*
folded in here; they belong to the detection model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .combinatorics import (
    Partition,
    binomial,
    bounded_compositions,
    mode_count_weight,
)

__all__ = [
    "DEFAULT_TAIL_EPS",
    "DEFAULT_MAX_PAIRS",
    "TruncationCapError",
    "SourceParams",
    "PairNumberDistribution",
    "pair_number_distribution",
    "partition_weight",
    "polarization_weights",
    "mean_pairs_from_rate",
]

DEFAULT_TAIL_EPS = 1e-10
# Partition count explodes combinatorially with the pair number; ~1.7e6
# partitions at M=64 is the practical ceiling for the decomposition loop.
DEFAULT_MAX_PAIRS = 64


class TruncationCapError(RuntimeError):
    """Raised when the pair-number truncation cannot reach the requested tail."""

    def __init__(self, cap: int, tail_bound: float):
        super().__init__(
            f"truncation cap exceeded: residual probability {tail_bound:.6e} "
            f"at hard cap M={cap}"
        )
        self.cap = cap
        self.tail_bound = tail_bound


@dataclass(frozen=True)
class SourceParams:
    """Down-conversion source seen through one detection timing window.

    ``mean_pairs_per_window`` is the mean number of collected pairs per
    window; ``mode_count`` is the number of temporal modes the window spans.
    One mode reproduces a pulsed (thermal) source, many modes a CW
    (Poissonian-limit) source.
    """

    mean_pairs_per_window: float
    mode_count: int
    timing_window: float = 1e-9
    coherence_time: float = 1e-13

    def __post_init__(self) -> None:
        if self.mean_pairs_per_window < 0:
            raise ValueError(
                f"mean pairs per window must be >= 0: {self.mean_pairs_per_window}"
            )
        if self.mode_count < 1:
            raise ValueError(f"mode count must be >= 1: {self.mode_count}")
        if self.timing_window <= 0 or self.coherence_time <= 0:
            raise ValueError("timing window and coherence time must be > 0")

    @classmethod
    def from_times(
        cls,
        mean_pairs_per_window: float,
        timing_window: float,
        coherence_time: float,
    ) -> "SourceParams":
        """Derive the mode count as round(window / coherence time), floored at 1."""
        mode_count = max(1, round(timing_window / coherence_time))
        return cls(mean_pairs_per_window, mode_count, timing_window, coherence_time)

    @property
    def tanh_sq(self) -> float:
        """Squared squeezing parameter T^2 per mode; the per-mode mean pair
        number is mu/N, giving T^2 = (mu/N) / (1 + mu/N)."""
        per_mode = self.mean_pairs_per_window / self.mode_count
        return per_mode / (1.0 + per_mode)


@dataclass(frozen=True)
class PairNumberDistribution:
    """Truncated law of the total pair number per window.

    ``probabilities[M]`` is P(M pairs); ``tail_bound`` is the probability
    mass beyond the truncation point.
    """

    probabilities: tuple[float, ...]
    tail_bound: float

    @property
    def m_max(self) -> int:
        return len(self.probabilities) - 1

    def mean(self) -> float:
        return math.fsum(m * p for m, p in enumerate(self.probabilities))


def pair_number_distribution(
    src: SourceParams,
    epsilon: float = DEFAULT_TAIL_EPS,
    max_pairs: int = DEFAULT_MAX_PAIRS,
) -> PairNumberDistribution:
    """Distribution of the pair number per window, truncated to tail < epsilon.

    P(M) = (1 - T^2)^N * T^(2M) * C(M + N - 1, M): a negative-binomial law
    whose N=1 case is the thermal/geometric law and whose large-N limit is
    Poissonian.  Evaluated by the term ratio T^2 * (N - 1 + M) / M so that
    huge binomials never meet tiny powers in floating point.

    Raises :class:`TruncationCapError` if more than ``max_pairs`` pairs would
    be needed to push the residual mass below ``epsilon``.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must be in (0, 1): {epsilon}")
    t2 = src.tanh_sq
    n = src.mode_count
    term = math.exp(n * math.log1p(-t2))
    probs = [term]
    cum = term
    m = 0
    while 1.0 - cum >= epsilon:
        if m >= max_pairs:
            raise TruncationCapError(max_pairs, max(0.0, 1.0 - math.fsum(probs)))
        m += 1
        term *= t2 * ((n - 1 + m) / m)
        probs.append(term)
        cum += term
    tail = max(0.0, 1.0 - math.fsum(probs))
    return PairNumberDistribution(tuple(probs), tail)


def partition_weight(partition: Partition, mode_count: int) -> float:
    """Weight of one occupation partition inside its pair-number manifold.

    The exact big-integer ratio of the partition's mode-assignment count to
    the stars-and-bars total; converted to floating point last.  Partitions
    with more parts than modes carry zero weight.
    """
    if partition.length > mode_count:
        return 0.0
    total = partition.total
    return mode_count_weight(partition, mode_count) / binomial(
        total + mode_count - 1, total
    )


def polarization_weights(partition: Partition) -> tuple[float, ...]:
    """Probability of m horizontally polarized pairs, for m = 0..total.

    Each occupied mode splits its pairs uniformly over its occupancy, so the
    weight of m is the bounded-composition count divided by the partition's
    normalization; symmetric about total/2.
    """
    total = partition.total
    counts = [bounded_compositions(partition, m) for m in range(total + 1)]
    norm = sum(counts)
    return tuple(c / norm for c in counts)


def mean_pairs_from_rate(
    pair_rate: float, geometry_factor: float, window: float
) -> float:
    """Mean collected pairs per timing window: rate x collection x window."""
    if pair_rate < 0 or geometry_factor < 0 or window < 0:
        raise ValueError("pair rate, geometry factor and window must be >= 0")
    return pair_rate * geometry_factor * window
