"""
Tests for region bounds, exact planar arrangements and region counting
"""
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from src.errors import CoincidenceError, ValidationError
from src.snn_core import LayerParams, build_network, membrane_decoder, random_network
from src.constructors import StepFunctionSpec, step_network
from src.temporal import temporal_bound, tight_initial_potential
from src.regions import (
    GeneralPositionBuilder, ParallelFamily, constant_regions_2d, count_bound, count_exact_2d,
    family_lines, first_layer_families, general_position_layer, in_general_position,
    incremental_count, make_line, r_regions_closed, r_regions_recursive, sample_patterns,
    sample_points,
)
from src.regions.arrangement import vertices

TABLE_ROWS = [(1, 2, 4), (1, 3, 7), (1, 4, 11), (2, 2, 16), (2, 3, 37), (2, 4, 67)]


def one_layer(W, b, u0, T, beta=1, theta=1):
    return build_network([LayerParams.create(W, b, u0, beta, theta)], T)


def assert_chain(report):
    assert report.distinct_outputs <= report.connected_constant_regions
    assert report.connected_constant_regions <= report.layer_counts[0] <= report.bound


# ---------------------------------------------------------------- bounds

@pytest.mark.parametrize("T, n1, expected", TABLE_ROWS)
def test_count_bound_table_rows(T, n1, expected):
    assert count_bound(n1, 2, T) == expected


def test_count_bound_narrow_layer():
    assert count_bound(1, 3, 3) == 7
    assert count_bound(2, 5, 2) == 16


def test_count_bound_rejects_zero():
    with pytest.raises(ValidationError):
        count_bound(0, 2, 1)


def test_region_formulas_agree():
    for n in range(7):
        for d in range(7):
            for k in range(1, 7):
                closed = r_regions_closed(n, d, k)
                assert closed == r_regions_recursive(n, d, k)
                if k == 1:
                    assert closed == sum(comb(n, i) for i in range(d + 1))
                if n <= d:
                    assert closed == (k + 1) ** n


def test_region_formula_examples():
    assert r_regions_closed(3, 2, 1) == 7
    assert r_regions_recursive(2, 2, 3) == 16
    with pytest.raises(ValidationError):
        r_regions_closed(2, 2, 0)


# ---------------------------------------------------------------- families

def test_single_step_neuron_gives_one_line():
    net = one_layer([[1, 0]], [-1], [0], T=1)
    (family,) = first_layer_families(net)
    assert family.direction == (1, 0)
    assert family.offsets == (2,)


def test_perturbed_neuron_gives_three_parallel_lines():
    net = one_layer([[0, 1]], [0], [Fraction(1, 10)], T=2)
    (family,) = first_layer_families(net)
    assert family.offsets == (Fraction(9, 20), Fraction(9, 10), Fraction(19, 20))


def test_zero_weight_neuron_has_no_lines():
    net = one_layer([[0, 0], [1, 1]], [0, 0], [0, 0], T=1)
    families = first_layer_families(net)
    assert families[0].k == 0
    assert families[1].k == 1
    assert len(family_lines(families)) == 1


def test_family_rejects_unsorted_offsets():
    with pytest.raises(ValidationError):
        ParallelFamily(direction=(1, 0), offsets=(1, 0))
    with pytest.raises(ValidationError):
        ParallelFamily(direction=(0, 0), offsets=(1,))


# ---------------------------------------------------------------- exact arrangements

def test_one_line_splits_the_plane():
    count, complex_ = count_exact_2d([ParallelFamily(direction=(1, 0), offsets=(0,))])
    assert count == 2
    assert complex_.count == 2
    assert complex_.adjacency == [(0, 1)]


def test_axis_grid_has_nine_regions():
    families = [ParallelFamily((1, 0), (0, 1)), ParallelFamily((0, 1), (0, 1))]
    count, complex_ = count_exact_2d(families)
    assert count == 9
    assert complex_.count == 9
    # the centre cell touches the four side cells
    centre = next(cell.index for cell in complex_.cells
                  if 0 < cell.representative[0] < 1 and 0 < cell.representative[1] < 1)
    assert complex_.graph.degree[centre] == 4


def test_two_families_of_three_lines():
    families = [ParallelFamily((1, 0), (0, 1, 2)), ParallelFamily((1, 1), (0, 1, 2))]
    count, _ = count_exact_2d(families)
    assert count == 16 == r_regions_closed(2, 2, 3)


@pytest.mark.parametrize("k", [1, 2, 5])
def test_single_family_count(k):
    count, complex_ = count_exact_2d([ParallelFamily((2, 3), tuple(range(k)))])
    assert count == k + 1
    assert complex_.count == k + 1


def test_concurrent_lines_lose_a_region():
    lines = [make_line((1, 0), 0), make_line((0, 1), 0), make_line((1, 1), 0)]
    assert incremental_count(lines) == 6
    assert len(vertices(lines)) == 1


def test_coincident_lines_are_merged():
    families = [ParallelFamily((1, 0), (0, 1)), ParallelFamily((2, 0), (0,))]
    assert len(family_lines(families)) == 2
    count, _ = count_exact_2d(families)
    assert count == 3


def test_exact_count_rejects_three_dimensions():
    with pytest.raises(ValidationError):
        count_exact_2d([ParallelFamily((1, 0, 0), (0,))])


def test_cell_representatives_lie_in_distinct_cells():
    families = [ParallelFamily((1, 0), (0, 1)), ParallelFamily((1, 2), (0, 3))]
    count, complex_ = count_exact_2d(families)
    lines = family_lines(families)
    signs = {tuple(line.side(cell.representative) for line in lines) for cell in complex_.cells}
    assert len(signs) == count == complex_.count
    for i, j in complex_.adjacency:
        assert j in complex_.graph[i] and i in complex_.graph[j]


def test_cell_csv_rows():
    _, complex_ = count_exact_2d([ParallelFamily((1, 0), (0,))])
    rows = complex_.to_csv_rows()
    assert [set(row) for row in rows] == [{"cell_id", "x", "y", "pattern", "output"}] * 2
    assert {row["pattern"] for row in rows} == {""}


# ---------------------------------------------------------------- general position

@pytest.mark.parametrize("T, n1, expected", TABLE_ROWS)
def test_general_position_layer_attains_bound(T, n1, expected):
    net = general_position_layer(n1, T)
    families = first_layer_families(net)
    assert all(family.k == (T * T + T) // 2 for family in families)
    assert in_general_position(families)
    count, _ = count_exact_2d(families, with_cells=False)
    assert count == expected


def test_general_position_layer_needs_two_neurons():
    with pytest.raises(ValidationError):
        general_position_layer(1, 2)


def test_builder_rejects_parallel_direction():
    builder = GeneralPositionBuilder(2)
    builder.add_neuron((1, 1))
    with pytest.raises(ValidationError):
        builder.add_neuron((2, 2))


def test_builder_gives_up_when_margin_cannot_grow():
    builder = GeneralPositionBuilder(1)
    builder.margin = Fraction(0)
    points = {(Fraction(0), Fraction(0)), (Fraction(1), Fraction(0))}
    with pytest.raises(CoincidenceError):
        builder._place((Fraction(1), Fraction(0)), [Fraction(0)], points)
    assert builder.margin == 0


def test_concurrent_families_are_not_in_general_position():
    families = [ParallelFamily((1, 0), (0,)), ParallelFamily((0, 1), (0,)), ParallelFamily((1, 1), (0,))]
    assert not in_general_position(families)
    assert not in_general_position([ParallelFamily((1, 0), (0,)), ParallelFamily((2, 0), (1,))])


# ---------------------------------------------------------------- whole-network counts

def test_general_position_cells_have_distinct_patterns():
    report = constant_regions_2d(general_position_layer(3, 2), layer=1)
    assert report.layer_counts == [37]
    assert report.complex.count == 37
    assert report.bound == 37
    assert_chain(report)


def test_step_network_constant_regions():
    spec = StepFunctionSpec.create([[0, Fraction(1, 2), 1], [0, Fraction(1, 2), 1]], [1, 2, 3, 4])
    report = constant_regions_2d(step_network(spec))
    assert report.distinct_outputs == 5
    assert report.connected_constant_regions == 5
    assert report.layer_counts[0] == 16
    assert report.method == "exact2d"
    assert_chain(report)


def test_zero_readout_has_one_constant_region():
    net = random_network(np.random.default_rng(3), 2, [3], 2)
    silent = net.with_decoder(membrane_decoder([[0, 0, 0]], T=2))
    report = constant_regions_2d(silent)
    assert report.distinct_outputs == 1
    assert report.connected_constant_regions == 1


def test_wide_layer_counts_exactly():
    # 128 copies each of the neurons behind the lines x = 1 and y = 1
    W = [[1, 0]] * 128 + [[0, 1]] * 128
    net = one_layer(W, [0] * 256, [0] * 256, T=1)
    assert net.widths == (256,)
    report = constant_regions_2d(net)
    assert report.layer_counts == [4]
    assert report.complex.count == 4



def test_random_two_step_layer_within_bound():
    rng = np.random.default_rng(11)
    for _ in range(10):
        report = constant_regions_2d(random_network(rng, 2, [2], 2))
        assert report.layer_counts[0] <= 16
        assert_chain(report)


def test_deeper_layers_do_not_add_regions():
    rng = np.random.default_rng(5)
    for _ in range(5):
        net = random_network(rng, 2, [3, 3, 2], 2)
        exact = constant_regions_2d(net)
        sampled = sample_patterns(net, [(-2, 2), (-2, 2)], 2000, seed=1)
        for counts in (exact.layer_counts, sampled.layer_counts):
            assert all(later <= earlier for earlier, later in zip(counts, counts[1:]))


def test_layer_argument_is_checked():
    net = general_position_layer(2, 1)
    with pytest.raises(ValidationError):
        constant_regions_2d(net, layer=2)
    with pytest.raises(ValidationError):
        sample_patterns(net, [(-1, 1), (-1, 1)], 10, layer=0)


def test_exact_counting_needs_planar_inputs():
    net = random_network(np.random.default_rng(0), 3, [2], 1)
    with pytest.raises(ValidationError):
        constant_regions_2d(net)


def test_report_dict():
    report = constant_regions_2d(general_position_layer(2, 1))
    assert report.to_dict() == {
        "layer_counts": [4],
        "distinct_outputs": 4,
        "connected_constant_regions": 4,
        "pattern_components": 4,
        "bound": 4,
        "method": "exact2d",
        "samples": None,
        "seed": None,
    }


# ---------------------------------------------------------------- sampling

def test_sample_points_fill_the_box():
    points = sample_points([(0, 1), (-2, 2)], 256, seed=4)
    assert points.shape == (256, 2)
    assert points[:, 0].min() >= 0 and points[:, 0].max() <= 1
    assert points[:, 1].min() >= -2 and points[:, 1].max() <= 2
    assert np.array_equal(points, sample_points([(0, 1), (-2, 2)], 256, seed=4))


def test_sample_points_need_a_positive_count():
    with pytest.raises(ValidationError):
        sample_points([(0, 1)], 0)


def test_single_sample_sees_one_pattern():
    report = sample_patterns(general_position_layer(3, 2), [(-1, 1), (-1, 1)], 1)
    assert report.layer_counts == [1]
    assert report.distinct_outputs == 1
    assert report.samples == 1 and report.method == "sampled"


def test_single_neuron_samples_stay_within_temporal_bound():
    T = 4
    net = one_layer([[1]], [0], [tight_initial_potential(T)], T)
    report = sample_patterns(net, [(-1, 2)], 5000, seed=2)
    assert 2 <= report.layer_counts[0] <= temporal_bound(T)


def test_sampling_finds_every_cell_of_a_coarse_arrangement():
    net = general_position_layer(2, 1)
    count, complex_ = count_exact_2d(first_layer_families(net))
    (x_lo, x_hi), (y_lo, y_hi) = complex_.box
    box = [(float(x_lo), float(x_hi)), (float(y_lo), float(y_hi))]
    report = sample_patterns(net, box, 4096, seed=0)
    assert report.layer_counts == [count] == [4]


def test_sampling_never_exceeds_the_exact_count():
    net = general_position_layer(3, 2)
    exact = constant_regions_2d(net)
    (x_lo, x_hi), (y_lo, y_hi) = exact.complex.box
    box = [(float(x_lo), float(x_hi)), (float(y_lo), float(y_hi))]
    sampled = sample_patterns(net, box, 20000, seed=3)
    assert sampled.layer_counts[0] <= exact.layer_counts[0]


def test_sampling_checks_box_dimension():
    with pytest.raises(ValidationError):
        sample_patterns(general_position_layer(2, 1), [(-1, 1)], 10)


def test_sampling_handles_higher_dimensions():
    net = random_network(np.random.default_rng(8), 3, [4], 2)
    report = sample_patterns(net, [(-1, 1)] * 3, 3000, seed=8)
    assert report.layer_counts[0] <= count_bound(4, 3, 2)


@pytest.mark.slow
def test_random_first_layers_respect_the_bound():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        T = int(rng.integers(1, 9))
        n1 = int(rng.integers(2, 5))
        net = random_network(rng, 2, [n1, 2], T)
        count, _ = count_exact_2d(first_layer_families(net), with_cells=False)
        assert count <= count_bound(n1, 2, T)
        counts = sample_patterns(net, [(-2, 2), (-2, 2)], 10000, seed=1).layer_counts
        assert counts[1] <= counts[0] <= count


@pytest.mark.slow
def test_random_networks_satisfy_the_count_chain():
    rng = np.random.default_rng(77)
    for _ in range(100):
        net = random_network(rng, 2, [int(rng.integers(2, 5)), 2], int(rng.integers(1, 3)))
        assert_chain(constant_regions_2d(net, layer=1))
