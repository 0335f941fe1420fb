"""
Exact planar line arrangements
Incremental region counting and a slab-sweep cell complex on Fractions
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Set, Tuple

import networkx as nx
from loguru import logger
from sortedcontainers import SortedList

from src.errors import SpikeRegionsError, ValidationError
from src.snn_core.arithmetic import EXACT
from .families import ParallelFamily

Point = Tuple[Fraction, Fraction]
Box = Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]]


class Line(NamedTuple):
    """a x + b y = c, scaled so the first nonzero of (a, b) is 1"""
    a: Fraction
    b: Fraction
    c: Fraction

    @property
    def vertical(self) -> bool:
        return self.b == 0

    def side(self, point: Point) -> int:
        return 1 if self.a * point[0] + self.b * point[1] - self.c > 0 else 0

    def y_at(self, x: Fraction) -> Fraction:
        return (self.c - self.a * x) / self.b

    def sample_point(self) -> Point:
        if self.vertical:
            return self.c, Fraction(0)
        return Fraction(0), self.c / self.b


def make_line(direction: Sequence, offset) -> Line:
    """Normalized line <direction, x> = offset"""
    a, b = (EXACT.scalar(value) for value in direction)
    c = EXACT.scalar(offset)
    lead = a if a != 0 else b
    if lead == 0:
        raise ValidationError("A line needs a nonzero direction")
    return Line(a / lead, b / lead, c / lead)


def parallel(first: Line, second: Line) -> bool:
    return first.a * second.b == first.b * second.a


def intersection(first: Line, second: Line) -> Point:
    det = first.a * second.b - first.b * second.a
    x = (first.c * second.b - first.b * second.c) / det
    y = (first.a * second.c - first.c * second.a) / det
    return x, y


def family_lines(families: Iterable[ParallelFamily]) -> List[Line]:
    """All hyperplanes of the families as normalized lines, coincident ones merged"""
    lines: List[Line] = []
    seen: Set[Line] = set()
    for family in families:
        if family.dimension != 2:
            raise ValidationError(f"Exact arrangements need 2D inputs, got dimension {family.dimension}")
        for offset in family.offsets:
            line = make_line(family.direction, offset)
            if line not in seen:
                seen.add(line)
                lines.append(line)
    return lines


def vertices(lines: Sequence[Line]) -> Set[Point]:
    points = set()
    for i, first in enumerate(lines):
        for second in lines[:i]:
            if not parallel(first, second):
                points.add(intersection(first, second))
    return points


def incremental_count(lines: Sequence[Line]) -> int:
    """
    Regions of the arrangement by line insertion

    Each new line adds 1 + (distinct points where it meets earlier lines).
    """
    regions = 1
    for i, line in enumerate(lines):
        hits = {intersection(line, earlier) for earlier in lines[:i] if not parallel(line, earlier)}
        regions += 1 + len(hits)
    return regions


def enclosing_box(lines: Sequence[Line], margin: Fraction = Fraction(1)) -> Box:
    """Box holding every vertex and one point of every line strictly inside"""
    points = list(vertices(lines)) + [line.sample_point() for line in lines]
    if not points:
        return (Fraction(-1), Fraction(1)), (Fraction(-1), Fraction(1))
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    return (min(xs) - margin, max(xs) + margin), (min(ys) - margin, max(ys) + margin)


@dataclass
class Cell:
    """One region of the arrangement clipped to the box"""
    index: int
    signs: Tuple[int, ...]
    representative: Point
    pattern: Optional[Tuple] = None
    output: Optional[Tuple] = None


@dataclass
class CellComplex2D:
    """
    Cells of a line arrangement inside a box and their adjacency

    Two cells are adjacent when they share a boundary segment of positive length inside the box.
    """
    lines: List[Line]
    box: Box
    cells: List[Cell] = field(default_factory=list)
    graph: nx.Graph = field(default_factory=nx.Graph)

    @property
    def count(self) -> int:
        return len(self.cells)

    @property
    def adjacency(self) -> List[Tuple[int, int]]:
        return sorted(tuple(sorted(edge)) for edge in self.graph.edges)

    def components(self, labels: Sequence) -> int:
        """Connected components after merging adjacent cells with equal labels"""
        if len(labels) != self.count:
            raise ValidationError(f"Got {len(labels)} labels for {self.count} cells")
        merged = nx.Graph()
        merged.add_nodes_from(range(self.count))
        merged.add_edges_from((i, j) for i, j in self.graph.edges if labels[i] == labels[j])
        return nx.number_connected_components(merged)

    def to_csv_rows(self) -> List[Dict[str, str]]:
        rows = []
        for cell in self.cells:
            rows.append({
                "cell_id": str(cell.index),
                "x": str(float(cell.representative[0])),
                "y": str(float(cell.representative[1])),
                "pattern": "" if cell.pattern is None else "|".join(
                    "".join(str(bit) for bit in row) for row in cell.pattern),
                "output": "" if cell.output is None else " ".join(str(v) for v in cell.output),
            })
        return rows


def _slab_events(lines: Sequence[Line], box: Box) -> List[Fraction]:
    (x_lo, x_hi), (y_lo, y_hi) = box
    events = SortedList([x_lo, x_hi])

    def add(x):
        if x_lo < x < x_hi and x not in events:
            events.add(x)

    for line in lines:
        if line.vertical:
            add(line.c / line.a)
        elif line.a != 0:
            # where the line leaves through the bottom or top edge
            for y in (y_lo, y_hi):
                add((line.c - line.b * y) / line.a)
    for point in vertices(lines):
        add(point[0])
    return list(events)


def build_cell_complex(lines: Sequence[Line], box: Optional[Box] = None) -> CellComplex2D:
    """
    Cell complex by a vertical slab sweep

    Between consecutive event abscissae no two lines cross and none enters
    or leaves the box, so every slab splits into trapezoids stacked by y.
    Each trapezoid lies inside one cell, identified by its sign vector.

    Args:
        lines: normalized lines
        box: clipping box ((x_lo, x_hi), (y_lo, y_hi)); enclosing_box(lines) if omitted

    Returns:
        CellComplex2D
    """
    lines = list(lines)
    box = box or enclosing_box(lines)
    box = tuple((EXACT.scalar(lo), EXACT.scalar(hi)) for lo, hi in box)
    (x_lo, x_hi), (y_lo, y_hi) = box
    if not (x_lo < x_hi and y_lo < y_hi):
        raise ValidationError(f"Box {box} is empty")
    slanted = [line for line in lines if not line.vertical]
    complex_ = CellComplex2D(lines=lines, box=box)
    index_of: Dict[Tuple[int, ...], int] = {}

    def cell_for(point: Point) -> int:
        signs = tuple(line.side(point) for line in lines)
        if signs not in index_of:
            index_of[signs] = len(complex_.cells)
            complex_.cells.append(Cell(index=len(complex_.cells), signs=signs, representative=point))
            complex_.graph.add_node(index_of[signs])
        return index_of[signs]

    events = _slab_events(lines, box)
    previous = None
    for left, right in zip(events, events[1:]):
        middle = (left + right) / 2
        inside = sorted(
            (line for line in slanted if y_lo < line.y_at(middle) < y_hi),
            key=lambda line: line.y_at(middle),
        )
        bounds = [None] + inside + [None]
        column = []
        for lower, upper in zip(bounds, bounds[1:]):
            low_mid = y_lo if lower is None else lower.y_at(middle)
            high_mid = y_hi if upper is None else upper.y_at(middle)
            cell = cell_for((middle, (low_mid + high_mid) / 2))
            column.append((cell, lower, upper))
        for below, above in zip(column, column[1:]):
            if below[0] != above[0]:
                complex_.graph.add_edge(below[0], above[0])
        if previous is not None:
            _link_across(complex_.graph, previous, column, left, y_lo, y_hi)
        previous = column

    logger.debug(f"Cell complex: {len(lines)} lines, {complex_.count} cells, "
                 f"{complex_.graph.number_of_edges()} adjacencies")
    return complex_


def _link_across(graph: nx.Graph, previous, column, x: Fraction, y_lo: Fraction, y_hi: Fraction):
    """Adjacency across the boundary x between the previous column and the current one"""

    def spans(entries):
        result = []
        for cell, lower, upper in entries:
            low = y_lo if lower is None else lower.y_at(x)
            high = y_hi if upper is None else upper.y_at(x)
            result.append((cell, low, high))
        return result

    left, right = spans(previous), spans(column)
    i = j = 0
    while i < len(left) and j < len(right):
        cell_l, low_l, high_l = left[i]
        cell_r, low_r, high_r = right[j]
        if min(high_l, high_r) > max(low_l, low_r) and cell_l != cell_r:
            graph.add_edge(cell_l, cell_r)
        if high_l <= high_r:
            i += 1
        else:
            j += 1


def count_exact_2d(
    families: Sequence[ParallelFamily],
    with_cells: bool = True,
    box: Optional[Box] = None
):
    """
    Exact region count of the union of the families in the plane

    Args:
        families: parallel families with 2D directions
        with_cells: also build the cell complex
        box: clipping box for the complex (enclosing box by default)

    Returns:
        (count, CellComplex2D or None)
    """
    lines = family_lines(families)
    count = incremental_count(lines)
    complex_ = build_cell_complex(lines, box) if with_cells else None
    if complex_ is not None and box is None and complex_.count != count:
        logger.error(f"Sweep found {complex_.count} cells, insertion counted {count}")
        raise SpikeRegionsError("Cell complex disagrees with the incremental count")
    return count, complex_
