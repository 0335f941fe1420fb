"""
Finite search showing one hidden spiking layer cannot express the triangle indicator
"""
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from src.regions.arrangement import Point, build_cell_complex, make_line
from src.snn_core.arithmetic import EXACT
from src.snn_core.network import LayerParams, build_network
from src.snn_core.simulator import simulate
from .polyhedra import PolyhedronSpec

DEFAULT_DIRECTIONS = (-1, 0, 1)
DEFAULT_OFFSETS = (Fraction(-1), Fraction(-1, 2), Fraction(0), Fraction(1, 2), Fraction(1))


def triangle() -> PolyhedronSpec:
    """{x >= 0, y >= 0, x + y <= 1}"""
    return PolyhedronSpec.create([[-1, 0], [0, -1], [1, 1]], [0, 0, 1])


@dataclass(frozen=True)
class RefutationReport:
    """
    Result of the one-hidden-layer search

    Attributes:
        candidates: number of candidate neurons on the parameter grid
        witnesses: number of witness points
        distinct_columns: distinct activation columns on the witness points
        target: target values on the witness points
        in_span: whether the target lies in the span of the columns and the constant
        smallest_subset: fewest candidate columns expressing the target, if found within the budget
        refuted: True when no network in the searched family matches the target
    """
    candidates: int
    witnesses: int
    distinct_columns: int
    target: Tuple[int, ...]
    in_span: bool
    smallest_subset: Optional[Tuple[int, ...]]
    refuted: bool


def exact_rank(matrix) -> int:
    """Rank by Gaussian elimination over the rationals"""
    rows = [[Fraction(value) for value in row] for row in matrix]
    rank = 0
    width = len(rows[0]) if rows else 0
    for col in range(width):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        lead = rows[rank]
        for i in range(rank + 1, len(rows)):
            factor = rows[i][col] / lead[col]
            if factor:
                rows[i] = [value - factor * pivot_value for value, pivot_value in zip(rows[i], lead)]
        rank += 1
    return rank


def _expresses(columns: np.ndarray, target: np.ndarray) -> bool:
    # a membrane read-out adds a constant term
    basis = np.column_stack([columns, np.ones(len(target), dtype=int)])
    return exact_rank(basis.tolist()) == exact_rank(np.column_stack([basis, target]).tolist())


def grid_witnesses(grid: Sequence[Tuple[Tuple, Fraction]]) -> List[Point]:
    """
    One point inside every cell of the arrangement of the candidate lines

    Every candidate indicator, the constant and any polyhedron bounded by
    candidate lines are constant on each cell, so these points see the
    functions on the whole plane.
    """
    lines = list(dict.fromkeys(make_line(a, -c) for a, c in grid))
    return [cell.representative for cell in build_cell_complex(lines).cells]


def one_hidden_layer_refutation(
    target_region: Optional[PolyhedronSpec] = None,
    witnesses: Optional[Sequence[Point]] = None,
    directions: Sequence = DEFAULT_DIRECTIONS,
    offsets: Sequence = DEFAULT_OFFSETS,
    max_neurons: int = 6
) -> RefutationReport:
    """
    Search one-hidden-layer membrane-output networks (T = 1) for the indicator of a region

    Every candidate hidden neuron is H(<a, x> + c) with a from directions^2 and
    c from offsets. Its activation column on the witness points is obtained
    by simulating one hidden layer holding all candidates. The target is
    expressible iff its witness vector lies in the span of some columns plus
    the constant read-out offset.

    Without explicit witnesses there is one point per cell of the arrangement
    of candidate lines. Every candidate then separates some pair of witnesses,
    and a refutation holds on the whole plane for networks built from the grid.

    Args:
        target_region: polyhedron whose indicator is sought (triangle by default)
        witnesses: points the networks are compared on (grid_witnesses by default)
        directions: grid of weight entries
        offsets: grid of biases
        max_neurons: neuron budget of the subset search

    Returns:
        RefutationReport
    """
    region = target_region or triangle()
    grid = [(a, c) for a in itertools.product(directions, repeat=2) for c in offsets if any(a)]
    W = [list(a) for a, _ in grid]
    # fires iff <a, x> + c >= 0 under theta = 1
    b = [c + 1 for _, c in grid]
    witnesses = grid_witnesses(grid) if witnesses is None else list(witnesses)
    hidden = LayerParams.create(W, b, beta=1, theta=1, arithmetic=EXACT)
    candidate_net = build_network([hidden], T=1, arithmetic=EXACT)

    rows = [simulate(candidate_net, point).output_train.bits[:, 0] for point in witnesses]
    columns = np.array(rows, dtype=int).T
    distinct = np.unique(columns, axis=0)
    target = np.array([1 if region.contains(point) else 0 for point in witnesses])

    in_span = _expresses(distinct.T, target)
    smallest = None
    if in_span:
        if _expresses(np.empty((len(target), 0), dtype=int), target):
            smallest = ()
        for size in range(1, max_neurons + 1):
            if smallest is not None:
                break
            for subset in itertools.combinations(range(len(distinct)), size):
                if _expresses(distinct[list(subset)].T, target):
                    smallest = subset
                    break

    report = RefutationReport(
        candidates=len(grid),
        witnesses=len(witnesses),
        distinct_columns=len(distinct),
        target=tuple(int(v) for v in target),
        in_span=in_span,
        smallest_subset=smallest,
        refuted=smallest is None,
    )
    logger.info(
        f"One-hidden-layer search: {report.candidates} candidates, "
        f"{report.witnesses} witnesses, {report.distinct_columns} distinct columns, "
        f"refuted={report.refuted}"
    )
    return report
