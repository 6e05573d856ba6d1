"""Bit-error rate of the source state under threshold detection.

The BER is a weighted average over pair-number manifolds, occupation
partitions within a manifold, and polarization splits within a partition.
Detection enters through the per-side click probabilities: a state with m
horizontally and M - m vertically polarized pairs keeps its correlation
only to the extent that the two sides' click patterns can still tell the
majority polarization apart.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from functools import lru_cache

from .combinatorics import Partition, partitions_of
from .photon_statistics import (
    DEFAULT_MAX_PAIRS,
    DEFAULT_TAIL_EPS,
    SourceParams,
    pair_number_distribution,
    partition_weight,
    polarization_weights,
)

__all__ = [
    "E0",
    "DetectorParams",
    "BerBreakdown",
    "yield_mM",
    "error_mM",
    "partition_error",
    "manifold_error",
    "ber_of_source",
]

logger = logging.getLogger(__name__)

# Error rate of a dark-count coincidence; fixed, not configurable.
E0 = 0.5


@dataclass(frozen=True)
class DetectorParams:
    """Per-side detection chain: total efficiency including path loss,
    intrinsic error, and dark/background click probability per window."""

    eta_a: float
    eta_b: float
    e_d: float = 0.0
    y0_a: float = 0.0
    y0_b: float = 0.0

    def __post_init__(self) -> None:
        for name, eta in (("eta_a", self.eta_a), ("eta_b", self.eta_b)):
            if not 0.0 < eta <= 1.0:
                raise ValueError(f"{name} must be in (0, 1]: {eta}")
        if not 0.0 <= self.e_d <= E0:
            raise ValueError(f"e_d must be in [0, {E0}]: {self.e_d}")
        for name, y0 in (("y0_a", self.y0_a), ("y0_b", self.y0_b)):
            if not 0.0 <= y0 < 1.0:
                raise ValueError(f"{name} must be in [0, 1): {y0}")

    def swapped(self) -> "DetectorParams":
        """Alice and Bob exchanged."""
        return replace(
            self, eta_a=self.eta_b, eta_b=self.eta_a, y0_a=self.y0_b, y0_b=self.y0_a
        )


@dataclass(frozen=True)
class BerBreakdown:
    """BER of the full source state, with its per-manifold decomposition.

    ``per_m_contributions`` holds one ``(M, weighted_error, detection_prob)``
    triple per pair number; the BER is the ratio of the two column sums.
    """

    ber: float
    coincidence_prob: float
    per_m_contributions: tuple[tuple[int, float, float], ...]
    m_max: int
    tail_bound: float
    clamp_count: int


def yield_mM(pairs: int, det: DetectorParams) -> float:
    """Probability that both sides register at least one click given M pairs."""
    if pairs < 0:
        raise ValueError(f"pair number must be >= 0: {pairs}")
    click_a = 1.0 - (1.0 - det.y0_a) * (1.0 - det.eta_a) ** pairs
    click_b = 1.0 - (1.0 - det.y0_b) * (1.0 - det.eta_b) ** pairs
    return click_a * click_b


def _error_raw(m: int, pairs: int, det: DetectorParams) -> float:
    y = yield_mM(pairs, det)
    if y == 0.0:
        raise ValueError(f"zero yield: no clicks possible for M={pairs}")
    bracket_a = (1.0 - det.eta_a) ** m - (1.0 - det.eta_a) ** (pairs - m)
    bracket_b = (1.0 - det.eta_b) ** m - (1.0 - det.eta_b) ** (pairs - m)
    return E0 - (E0 - det.e_d) / y * (bracket_a * bracket_b)


def error_mM(m: int, pairs: int, det: DetectorParams, clamp: bool = True) -> float:
    """Conditional error of a coincidence from the state with m horizontal
    and M - m vertical pairs.

    The balanced state (m = M/2) carries no polarization information and
    errs at the dark rate 1/2; fully aligned states err at the intrinsic
    detector rate.  Values are clamped to [0, 1] unless ``clamp=False``.
    """
    if pairs < 1:
        raise ValueError(f"pair number must be >= 1: {pairs}")
    if not 0 <= m <= pairs:
        raise ValueError(f"polarization count out of range: m={m}, M={pairs}")
    raw = _error_raw(m, pairs, det)
    if not clamp:
        return raw
    if raw < 0.0 or raw > 1.0:
        logger.debug("clamping error value %r for m=%d M=%d", raw, m, pairs)
        return min(1.0, max(0.0, raw))
    return raw


@lru_cache(maxsize=None)
def _manifold_terms(
    pairs: int, mode_count: int
) -> tuple[tuple[float, tuple[float, ...]], ...]:
    """(partition weight, polarization weights) for every admissible partition."""
    if pairs == 0:
        return ((1.0, (1.0,)),)
    if mode_count == 1:
        # a single mode admits only the single-row occupation
        return ((1.0, polarization_weights(Partition((pairs,)))),)
    terms = []
    for p in partitions_of(pairs):
        if p.length > mode_count:
            continue
        terms.append((partition_weight(p, mode_count), polarization_weights(p)))
    return tuple(terms)


def partition_error(partition: Partition, det: DetectorParams) -> float:
    """Detection-conditioned error of one occupation partition's state."""
    pairs = partition.total
    if pairs == 0:
        return E0
    errors = [error_mM(m, pairs, det) for m in range(pairs + 1)]
    weights = polarization_weights(partition)
    return math.fsum(w * e for w, e in zip(weights, errors))


def _manifold_error(
    pairs: int, mode_count: int, det: DetectorParams
) -> tuple[float, int]:
    """Partition-averaged error of the M-pair manifold, plus clamp count."""
    if pairs == 0:
        return E0, 0
    clamps = 0
    errors = []
    for m in range(pairs + 1):
        raw = _error_raw(m, pairs, det)
        if raw < 0.0 or raw > 1.0:
            clamps += 1
            logger.debug("clamping error value %r for m=%d M=%d", raw, m, pairs)
            raw = min(1.0, max(0.0, raw))
        errors.append(raw)
    acc = math.fsum(
        weight * math.fsum(pw * e for pw, e in zip(pol, errors))
        for weight, pol in _manifold_terms(pairs, mode_count)
    )
    return acc, clamps


def manifold_error(pairs: int, mode_count: int, det: DetectorParams) -> float:
    """Error of the M-pair manifold for a source with the given mode count."""
    return _manifold_error(pairs, mode_count, det)[0]


def ber_of_source(
    src: SourceParams,
    det: DetectorParams,
    epsilon: float = DEFAULT_TAIL_EPS,
    max_pairs: int = DEFAULT_MAX_PAIRS,
    yield_weighted: bool = True,
) -> BerBreakdown:
    """BER of the full source state, conditioned on coincident detection.

    Averages the per-manifold errors with weights P(M) * Y_M (detected
    states only; ``yield_weighted=False`` averages with P(M) alone).
    Manifolds that cannot produce a click are skipped.  Deterministic:
    manifolds, partitions and polarization terms are reduced in a fixed
    order, so repeated runs are bit-identical.
    """
    dist = pair_number_distribution(src, epsilon, max_pairs)
    contributions = []
    clamps = 0
    for pairs, prob in enumerate(dist.probabilities):
        y = yield_mM(pairs, det)
        if y == 0.0:
            contributions.append((pairs, 0.0, 0.0))
            continue
        err, n_clamped = _manifold_error(pairs, src.mode_count, det)
        clamps += n_clamped
        weight = prob * y if yield_weighted else prob
        contributions.append((pairs, weight * err, weight))
    numerator = math.fsum(c[1] for c in contributions)
    denominator = math.fsum(c[2] for c in contributions)
    ber = numerator / denominator if denominator > 0.0 else E0
    coincidence = math.fsum(
        prob * yield_mM(pairs, det)
        for pairs, prob in enumerate(dist.probabilities)
    )
    return BerBreakdown(
        ber=ber,
        coincidence_prob=coincidence,
        per_m_contributions=tuple(contributions),
        m_max=dist.m_max,
        tail_bound=dist.tail_bound,
        clamp_count=clamps,
    )
