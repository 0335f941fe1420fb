"""
Tests for temporal partitions and shift trajectories of a single neuron
"""
from fractions import Fraction

import numpy as np
import pytest

from src.errors import ValidationError
from src.snn_core import FLOAT
from src.temporal import (
    ShiftHistory, distinct_shift_values, neuron_partition, pattern_oracle, shift_trajectory,
    shift_value, temporal_bound, tight_initial_potential,
)


def random_params(rng):
    beta = Fraction(int(rng.integers(0, 9)), 8)
    theta = Fraction(int(rng.integers(1, 17)), 8)
    u0 = Fraction(int(rng.integers(-8, 9)), 8)
    return beta, theta, u0


# ---------------------------------------------------------------- shift values

def test_first_shift_is_threshold_minus_leaked_potential():
    assert shift_value(1, ShiftHistory(), Fraction(4, 5), 2, Fraction(1, 2)) == Fraction(8, 5)


@pytest.mark.parametrize("t, bits, beta, expected", [
    (3, (1, 0), 1, Fraction(2, 3)),
    (3, (0, 1), 1, Fraction(2, 3)),
    (2, (1,), Fraction(4, 5), 1),
    (2, (0,), 0, 1),
])
def test_shift_value_formula(t, bits, beta, expected):
    assert shift_value(t, ShiftHistory(bits), beta, 1, 0) == expected


def test_shift_value_checks_history_length():
    with pytest.raises(ValidationError):
        shift_value(3, ShiftHistory((1,)), 1, 1, 0)
    with pytest.raises(ValidationError):
        ShiftHistory((0, 2))


# ---------------------------------------------------------------- oracle

def test_oracle_hand_iteration():
    assert pattern_oracle(Fraction(7, 10), 1, 1, 0, 5) == (0, 1, 1, 0, 1)


def test_oracle_fires_exactly_at_threshold():
    assert pattern_oracle(1, Fraction(1, 3), 1, 0, 1) == (1,)


def test_oracle_stays_silent_below_every_boundary():
    partition = neuron_partition(Fraction(1, 2), 1, Fraction(1, 4), 6)
    z = partition.boundaries[0] - 1
    assert pattern_oracle(z, Fraction(1, 2), 1, Fraction(1, 4), 6) == (0,) * 6


# ---------------------------------------------------------------- partitions

def test_perturbed_potential_attains_bound_for_two_steps():
    partition = neuron_partition(1, 1, Fraction(1, 10), 2)
    assert partition.boundaries == (Fraction(9, 20), Fraction(9, 10), Fraction(19, 20))
    assert partition.patterns == ((0, 0), (0, 1), (1, 0), (1, 1))


def test_zero_potential_loses_a_pattern():
    partition = neuron_partition(1, 1, 0, 2)
    assert partition.boundaries == (Fraction(1, 2), 1)
    assert partition.patterns == ((0, 0), (0, 1), (1, 1))


@pytest.mark.parametrize("beta, theta, u0", [(1, 1, 0), (Fraction(1, 2), 3, 1), (0, 2, -1)])
def test_single_step_has_two_regions(beta, theta, u0):
    partition = neuron_partition(beta, theta, u0, 1)
    assert partition.count == 2
    assert partition.boundaries == (theta - beta * u0,)
    assert partition.patterns == ((0,), (1,))


def test_boundaries_belong_to_the_right_interval():
    partition = neuron_partition(1, 1, 0, 2)
    assert partition.pattern_at(Fraction(1, 2)) == (0, 1)
    assert partition.pattern_at(Fraction(1, 2) - Fraction(1, 10 ** 9)) == (0, 0)
    assert partition.pattern_at(1) == (1, 1)


@pytest.mark.parametrize("T, expected", [(1, 2), (2, 4), (4, 11), (12, 79)])
def test_temporal_bound(T, expected):
    assert temporal_bound(T) == expected


@pytest.mark.parametrize("T", range(1, 13))
def test_tight_potential_attains_bound(T):
    partition = neuron_partition(1, 1, tight_initial_potential(T), T)
    assert partition.count == temporal_bound(T)
    assert len(set(partition.patterns)) == partition.count


def test_partition_agrees_with_oracle_on_random_parameters():
    rng = np.random.default_rng(42)
    for _ in range(60):
        beta, theta, u0 = random_params(rng)
        T = int(rng.integers(1, 9))
        partition = neuron_partition(beta, theta, u0, T)
        assert partition.count <= temporal_bound(T)
        assert len(set(partition.patterns)) == partition.count
        assert list(partition.boundaries) == sorted(set(partition.boundaries))
        for z, pattern in partition.check_points():
            assert pattern_oracle(z, beta, theta, u0, T) == pattern


@pytest.mark.slow
def test_partition_sweep_up_to_sixteen_steps():
    rng = np.random.default_rng(7)
    largest = {}
    for _ in range(1000):
        beta, theta, u0 = random_params(rng)
        T = int(rng.integers(1, 17))
        partition = neuron_partition(beta, theta, u0, T)
        assert partition.count <= temporal_bound(T)
        for z, pattern in partition.check_points():
            assert pattern_oracle(z, beta, theta, u0, T) == pattern
        largest[T] = max(largest.get(T, 0), partition.count)
    for T in (4, 8, 16):
        if T in largest:
            assert largest[T] <= temporal_bound(T) < 2 ** T


def test_float_partition_merges_coincident_locations():
    exact = neuron_partition(1, 1, 0, 8)
    approx = neuron_partition(1, 1, 0, 8, FLOAT)
    assert approx.count == exact.count
    assert approx.patterns == exact.patterns


def test_zero_potential_boundaries_are_unit_fractions_of_spike_counts():
    partition = neuron_partition(1, 1, 0, 6)
    assert set(partition.boundaries) <= set(distinct_shift_values(6))


def test_distinct_shift_values():
    assert distinct_shift_values(3) == [Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), 1]


def test_partition_csv_rows():
    rows = neuron_partition(1, 1, 0, 2).to_csv_rows()
    assert rows == [
        {"interval_lo": "-inf", "interval_hi": "1/2", "pattern": "00"},
        {"interval_lo": "1/2", "interval_hi": "1", "pattern": "01"},
        {"interval_lo": "1", "interval_hi": "inf", "pattern": "11"},
    ]


# ---------------------------------------------------------------- shift trajectories

def test_trajectory_without_leak_uses_spike_count_fractions():
    trajectory = shift_trajectory(Fraction(7, 10), 1, 1, 0, 5)
    assert trajectory.bits == (0, 1, 1, 0, 1)
    assert trajectory.locations == (1, Fraction(1, 2), Fraction(2, 3), Fraction(3, 4), Fraction(3, 5))
    assert set(trajectory.locations) <= set(distinct_shift_values(5))
    assert trajectory.first_repeat is None


def test_trajectory_reports_exact_repeat():
    trajectory = shift_trajectory(Fraction(1, 2), 1, 1, 0, 4)
    assert trajectory.bits == (0, 1, 0, 1)
    assert trajectory.first_repeat == (4, 2)
    assert trajectory.repeated_steps() == [4]
    assert [row["repeat"] for row in trajectory.to_csv_rows()] == ["0", "0", "0", "1"]


def test_single_step_trajectory():
    trajectory = shift_trajectory(0, Fraction(1, 2), 2, Fraction(1, 2), 1)
    assert trajectory.locations == (Fraction(7, 4),)
    assert len(trajectory.to_csv_rows()) == 1


def test_leaky_trajectory_settles_into_period_five():
    trajectory = shift_trajectory(Fraction(7, 10), Fraction(4, 5), 1, 0, 64)
    assert trajectory.bits[:10] == (0, 1, 0, 1, 1, 0, 1, 0, 1, 1)
    assert set(range(55, 65)) <= set(trajectory.near_repeats(period=5, tolerance=1e-4))


def test_leaky_trajectory_repeats_a_shift_exactly():
    trajectory = shift_trajectory(Fraction(7, 10), Fraction(4, 5), 1, 0, 64)
    assert trajectory.first_repeat == (4, 2)
    assert trajectory.locations[3] == trajectory.locations[1]
    assert {4, 6} <= set(trajectory.repeated_steps())



def test_leak_free_trajectory_differences_shrink():
    trajectory = shift_trajectory(Fraction(7, 10), 1, 1, 0, 128)
    differences = trajectory.differences()
    early = max(differences[3:7])
    middle = max(differences[15:31])
    late = max(differences[63:127])
    assert early > middle > late
    assert set(trajectory.locations) <= set(distinct_shift_values(128))
