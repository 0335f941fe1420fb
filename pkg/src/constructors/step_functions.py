"""
Step functions on hyperrectangular grids and their two-layer networks
"""
import itertools
import json
from bisect import bisect_right
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np
import pydantic
from loguru import logger
from pydantic import BaseModel, Field

from src.errors import NetworkFileError, ValidationError
from src.snn_core.arithmetic import EXACT, Arithmetic, Scalar
from src.snn_core.network import LayerParams, Network, build_network, membrane_decoder

Number = Union[str, float, int]


@dataclass(frozen=True)
class StepFunctionSpec:
    """
    Piecewise-constant function on a grid of half-open boxes

    Attributes:
        breakpoints: per coordinate, N + 1 strictly increasing values
        values: array of shape (N,) * n, one value per cell
        outside_value: value outside the grid
    """
    breakpoints: Tuple[Tuple[Scalar, ...], ...]
    values: np.ndarray
    outside_value: Scalar = 0

    @classmethod
    def create(cls, breakpoints, values, outside_value=0, arithmetic: Arithmetic = EXACT) -> "StepFunctionSpec":
        """
        Build a spec from nested lists

        Args:
            breakpoints: list of breakpoint lists, one per coordinate
            values: flat row-major list or nested array of cell values
            outside_value: value outside the grid
            arithmetic: numeric mode

        Returns:
            Validated StepFunctionSpec
        """
        grids = tuple(tuple(arithmetic.scalar(r) for r in grid) for grid in breakpoints)
        if not grids:
            raise ValidationError("A step function needs at least one coordinate")
        N = len(grids[0]) - 1
        cells = arithmetic.array(values).reshape(-1)
        expected = N ** len(grids)
        if cells.shape[0] != expected:
            raise ValidationError(f"Expected {expected} cell values, got {cells.shape[0]}")
        return cls(
            breakpoints=grids,
            values=cells.reshape((N,) * len(grids)),
            outside_value=arithmetic.scalar(outside_value),
        )

    def __post_init__(self):
        counts = {len(grid) for grid in self.breakpoints}
        if len(counts) != 1:
            raise ValidationError("Every coordinate must have the same number of cells")
        if counts.pop() < 2:
            raise ValidationError("Every coordinate needs at least two breakpoints")
        for j, grid in enumerate(self.breakpoints):
            if any(lo >= hi for lo, hi in zip(grid, grid[1:])):
                raise ValidationError(f"Breakpoints of coordinate {j} must be strictly increasing")
        if self.values.shape != (self.N,) * self.n:
            raise ValidationError(f"Values have shape {self.values.shape}, expected {(self.N,) * self.n}")

    @property
    def n(self) -> int:
        return len(self.breakpoints)

    @property
    def N(self) -> int:
        return len(self.breakpoints[0]) - 1

    @property
    def widths(self) -> Tuple[int, int]:
        """(n_1, n_2) of the compiled network"""
        return (self.N + 1) * self.n, self.N ** self.n

    def cells(self):
        """All cell multi-indices in row-major order"""
        return itertools.product(range(self.N), repeat=self.n)

    def cell_bounds(self, index) -> List[Tuple[Scalar, Scalar]]:
        return [(grid[i], grid[i + 1]) for grid, i in zip(self.breakpoints, index)]

    def cell_center(self, index) -> List[Scalar]:
        return [(lo + hi) / 2 for lo, hi in self.cell_bounds(index)]

    def locate(self, x):
        """Cell index containing x, or None outside the grid (cells are half-open)"""
        index = []
        for grid, value in zip(self.breakpoints, x):
            if value < grid[0] or value >= grid[-1]:
                return None
            index.append(bisect_right(grid, value) - 1)
        return tuple(index)

    def __call__(self, x) -> Scalar:
        x = list(np.asarray(x, dtype=object).reshape(-1))
        if len(x) != self.n:
            raise ValidationError(f"Point has dimension {len(x)}, spec has {self.n}")
        index = self.locate(x)
        return self.outside_value if index is None else self.values[index]


class StepSpecDocument(BaseModel):
    """Step-function file: breakpoints per coordinate and row-major values"""
    breakpoints: List[List[Number]] = Field(min_length=1)
    values: List[Number]
    outside_value: Number = 0


def load_step_spec(path: Union[str, Path], arithmetic: Arithmetic = EXACT) -> StepFunctionSpec:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
        doc = StepSpecDocument.model_validate(raw)
    except OSError as e:
        raise NetworkFileError(f"Could not read step spec {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise NetworkFileError(f"Step spec {path} is not valid JSON: {e}") from e
    except pydantic.ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise NetworkFileError(f"Malformed step spec {path}: {location}: {first['msg']}") from e
    return StepFunctionSpec.create(doc.breakpoints, doc.values, doc.outside_value, arithmetic)


def save_step_spec(spec: StepFunctionSpec, path: Union[str, Path], arithmetic: Arithmetic = EXACT) -> Path:
    path = Path(path)
    doc = StepSpecDocument(
        breakpoints=[[arithmetic.serialize(r) for r in grid] for grid in spec.breakpoints],
        values=[arithmetic.serialize(v) for v in spec.values.reshape(-1)],
        outside_value=arithmetic.serialize(spec.outside_value),
    )
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc.model_dump(), indent=2) + "\n", encoding="utf-8")
    return path


def step_network(spec: StepFunctionSpec, arithmetic: Arithmetic = EXACT) -> Network:
    """
    T = 1, L = 2 network realizing a step function exactly

    Layer 1 holds one neuron H(x_j - r_{j,i}) per coordinate and breakpoint.
    Layer 2 holds one AND neuron per cell summing
    chi_j = H(x_j - r_{j,i_j}) - H(x_j - r_{j,i_j+1}) against threshold n.

    Args:
        spec: step function
        arithmetic: numeric mode

    Returns:
        Network whose decoder weights are the cell values
    """
    if spec.outside_value != 0:
        raise ValidationError("Only step functions vanishing outside the grid can be compiled")
    n, N = spec.n, spec.N
    n1, n2 = spec.widths

    first_W = np.zeros((n1, n), dtype=int).astype(object)
    first_b = []
    for j, grid in enumerate(spec.breakpoints):
        for i, r in enumerate(grid):
            first_W[j * (N + 1) + i, j] = 1
            first_b.append(1 - r)

    second_W = np.zeros((n2, n1), dtype=int).astype(object)
    values = []
    for row, index in enumerate(spec.cells()):
        for j, i in enumerate(index):
            second_W[row, j * (N + 1) + i] = 1
            second_W[row, j * (N + 1) + i + 1] = -1
        values.append(spec.values[index])

    first = LayerParams.create(first_W, first_b, beta=1, theta=1, arithmetic=arithmetic)
    second = LayerParams.create(second_W, [1 - n] * n2, beta=1, theta=1, arithmetic=arithmetic)
    decoder = membrane_decoder([values], T=1, arithmetic=arithmetic)
    logger.info(f"Step network: n={n}, N={N}, widths ({n1}, {n2})")
    return build_network([first, second], 1, decoder, arithmetic)


def uniform_grid(bounds: Sequence[Tuple[Scalar, Scalar]], N: int, arithmetic: Arithmetic = EXACT):
    """N equal cells per coordinate of the box given as (lo, hi) pairs"""
    grids = []
    for lo, hi in bounds:
        lo, hi = arithmetic.scalar(lo), arithmetic.scalar(hi)
        if not lo < hi:
            raise ValidationError(f"Box side [{lo}, {hi}] is empty")
        grids.append(tuple(lo + (hi - lo) * k / N for k in range(N + 1)))
    return tuple(grids)
