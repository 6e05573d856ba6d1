import itertools
import math
from fractions import Fraction

import pytest

from eqkd_sim.combinatorics import Partition, bounded_compositions, partitions_of
from eqkd_sim.photon_statistics import (
    PairNumberDistribution,
    SourceParams,
    TruncationCapError,
    mean_pairs_from_rate,
    pair_number_distribution,
    partition_weight,
    polarization_weights,
)


def fock_probability_oracle(mu, n_modes, m):
    """P(m) by enumerating occupation vectors with squared amplitude T^(2M)."""
    t2 = (mu / n_modes) / (1 + mu / n_modes)
    norm_all = math.exp(n_modes * math.log1p(-t2))
    count = sum(
        1
        for occ in itertools.product(range(m + 1), repeat=n_modes)
        if sum(occ) == m
    )
    return norm_all * t2**m * count


class TestSourceParams:
    def test_mode_count_from_times(self):
        src = SourceParams.from_times(0.009, 1e-9, 1e-13)
        assert src.mode_count == 10_000

    def test_mode_count_floors_at_one(self):
        src = SourceParams.from_times(0.1, 1e-9, 1e-8)
        assert src.mode_count == 1

    def test_tanh_sq_in_unit_interval(self):
        for mu in (0.0, 1e-6, 0.5, 100.0):
            src = SourceParams(mu, 10)
            assert 0.0 <= src.tanh_sq < 1.0

    def test_rejects_negative_mean(self):
        with pytest.raises(ValueError):
            SourceParams(-0.1, 1)

    def test_rejects_zero_modes(self):
        with pytest.raises(ValueError):
            SourceParams(0.1, 0)


class TestPairNumberDistribution:
    def test_vacuum_source(self):
        dist = pair_number_distribution(SourceParams(0.0, 1), 1e-10)
        assert dist.probabilities == (1.0,)
        assert dist.tail_bound == 0.0

    def test_single_mode_is_geometric(self):
        # N=1 closed form (1 - T^2) T^(2M), relative agreement to 1e-14
        for mu in (1e-6, 1e-3, 0.1, 1.0):
            src = SourceParams(mu, 1)
            t2 = src.tanh_sq
            dist = pair_number_distribution(src, 1e-10)
            for m, p in enumerate(dist.probabilities):
                closed = (1.0 - t2) * t2**m
                assert p == pytest.approx(closed, rel=1e-14)

    def test_two_mode_single_pair_example(self):
        # N=2, mu=0.2: P(1) = 2 T^2 (1 - T^2)^2
        src = SourceParams(0.2, 2)
        t2 = src.tanh_sq
        assert t2 == pytest.approx(0.1 / 1.1, rel=1e-15)
        dist = pair_number_distribution(src, 1e-12)
        assert dist.probabilities[1] == pytest.approx(
            2 * t2 * (1 - t2) ** 2, rel=1e-13
        )

    @pytest.mark.parametrize("n_modes", [1, 2, 3])
    def test_matches_fock_enumeration_oracle(self, n_modes):
        src = SourceParams(0.3, n_modes)
        dist = pair_number_distribution(src, 1e-12)
        for m in range(min(dist.m_max, 4) + 1):
            assert dist.probabilities[m] == pytest.approx(
                fock_probability_oracle(0.3, n_modes, m), rel=1e-12
            )

    @pytest.mark.parametrize("mu", [1e-6, 1e-3, 0.1, 1.0, 5.0])
    @pytest.mark.parametrize("n_modes", [1, 10, 10_000])
    def test_normalization_with_tail(self, mu, n_modes):
        # mu=5 on a single mode needs ~150 terms; the cap is configurable.
        dist = pair_number_distribution(SourceParams(mu, n_modes), 1e-10, max_pairs=256)
        assert all(0.0 <= p <= 1.0 for p in dist.probabilities)
        assert dist.tail_bound <= 1e-10
        total = math.fsum(dist.probabilities) + dist.tail_bound
        assert abs(total - 1.0) < 1e-12

    @pytest.mark.parametrize("mu", [1e-6, 1e-3, 0.1, 1.0, 5.0])
    @pytest.mark.parametrize("n_modes", [1, 10, 10_000])
    def test_mean_reproduces_mu(self, mu, n_modes):
        dist = pair_number_distribution(SourceParams(mu, n_modes), 1e-10, max_pairs=256)
        mean = dist.mean() + dist.tail_bound * (dist.m_max + 1)
        assert abs(mean - mu) <= max(1e-6, dist.tail_bound * dist.m_max)

    def test_minimal_truncation(self):
        dist = pair_number_distribution(SourceParams(0.09, 10_000), 1e-10)
        # one fewer term must violate the tail requirement
        shorter = math.fsum(dist.probabilities[:-1])
        assert 1.0 - shorter >= 1e-10
        assert dist.tail_bound < 1e-10

    def test_truncation_cap_error_carries_tail(self):
        with pytest.raises(TruncationCapError) as err:
            pair_number_distribution(SourceParams(5.0, 1), 1e-10, max_pairs=64)
        assert 0.0 < err.value.tail_bound < 1.0
        assert "truncation cap exceeded" in str(err.value)

    def test_poissonian_limit_total_variation(self):
        mu = 0.5
        pois = [math.exp(-mu)]
        for m in range(1, 257):
            pois.append(pois[-1] * mu / m)

        def tv(n_modes):
            dist = pair_number_distribution(
                SourceParams(mu, n_modes), 1e-12, max_pairs=256
            )
            diff = math.fsum(
                abs(p - pois[m]) for m, p in enumerate(dist.probabilities)
            )
            tail_q = max(0.0, 1.0 - math.fsum(pois[: dist.m_max + 1]))
            return 0.5 * (diff + dist.tail_bound + tail_q)

        distances = [tv(n) for n in (1, 10, 100, 10_000)]
        assert all(a > b for a, b in zip(distances, distances[1:]))
        assert distances[-1] < 1e-4

    def test_rejects_bad_epsilon(self):
        with pytest.raises(ValueError):
            pair_number_distribution(SourceParams(0.1, 1), 0.0)


class TestPartitionWeight:
    def test_single_mode_admits_only_one_row(self):
        for total in (1, 2, 5, 9):
            for p in partitions_of(total):
                expected = 1.0 if p.parts == (total,) else 0.0
                assert partition_weight(p, 1) == expected

    def test_two_pairs_two_modes(self):
        assert partition_weight(Partition((2,)), 2) == pytest.approx(2 / 3, abs=1e-15)
        assert partition_weight(Partition((1, 1)), 2) == pytest.approx(1 / 3, abs=1e-15)

    @pytest.mark.parametrize("n_modes", [1, 2, 10, 1000])
    @pytest.mark.parametrize("total", range(0, 21))
    def test_weights_sum_to_one(self, total, n_modes):
        acc = math.fsum(partition_weight(p, n_modes) for p in partitions_of(total))
        assert abs(acc - 1.0) < 1e-10


class TestPolarizationWeights:
    def test_single_row_uniform(self):
        assert polarization_weights(Partition((2,))) == pytest.approx(
            (1 / 3, 1 / 3, 1 / 3), abs=1e-15
        )

    def test_single_column_binomial(self):
        assert polarization_weights(Partition((1, 1))) == pytest.approx(
            (0.25, 0.5, 0.25), abs=1e-15
        )

    def test_mixed_shape(self):
        assert polarization_weights(Partition((2, 1))) == pytest.approx(
            (1 / 6, 2 / 6, 2 / 6, 1 / 6), abs=1e-15
        )

    @pytest.mark.parametrize("total", range(0, 13))
    def test_exact_rational_normalization(self, total):
        for p in partitions_of(total):
            norm = math.prod(part + 1 for part in p.parts)
            acc = sum(
                Fraction(bounded_compositions(p, m), norm) for m in range(total + 1)
            )
            assert acc == 1

    @pytest.mark.parametrize("total", range(0, 13))
    def test_symmetric_about_midpoint(self, total):
        for p in partitions_of(total):
            w = polarization_weights(p)
            assert w == tuple(reversed(w))


class TestMeanPairsFromRate:
    def test_reference_scenario_arithmetic(self):
        assert mean_pairs_from_rate(1e10, 9e-4, 1e-9) == pytest.approx(9e-3, rel=1e-15)

    def test_zero_rate(self):
        assert mean_pairs_from_rate(0.0, 9e-4, 1e-9) == 0.0

    def test_pulsed_inversion(self):
        # S = mu / (G * t) inverts back to mu
        mu, g, t = 0.009, 9e-4, 1e-9
        s_pulsed = mu / (g * t)
        assert mean_pairs_from_rate(s_pulsed, g, t) == pytest.approx(mu, rel=1e-12)

    def test_rejects_negatives(self):
        with pytest.raises(ValueError):
            mean_pairs_from_rate(-1.0, 9e-4, 1e-9)
