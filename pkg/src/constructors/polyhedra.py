"""
Indicator networks of polyhedra {x : A x <= b} and their weighted unions
"""
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
from loguru import logger

from src.errors import ValidationError
from src.snn_core.arithmetic import EXACT, Arithmetic
from src.snn_core.network import LayerParams, Network, build_network, membrane_decoder


@dataclass(frozen=True)
class PolyhedronSpec:
    """
    Polyhedron {x : A x <= b}

    Attributes:
        A: constraint matrix p x n with nonzero rows
        b: right-hand side, length p
    """
    A: np.ndarray
    b: np.ndarray

    @classmethod
    def create(cls, A, b, arithmetic: Arithmetic = EXACT) -> "PolyhedronSpec":
        A = arithmetic.array(A)
        if A.ndim == 1:
            A = A.reshape(1, -1)
        return cls(A=A, b=arithmetic.array(b).reshape(-1))

    def __post_init__(self):
        if self.A.ndim != 2 or self.A.shape[0] < 1:
            raise ValidationError("A polyhedron needs at least one constraint row")
        if self.b.shape != (self.A.shape[0],):
            raise ValidationError(f"b has shape {self.b.shape}, expected ({self.A.shape[0]},)")
        for row in self.A:
            if all(value == 0 for value in row):
                raise ValidationError("Constraint rows must be nonzero")

    @property
    def p(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=object).reshape(-1)
        return bool(all(lhs <= rhs for lhs, rhs in zip(self.A.dot(x), self.b)))


def _half_space_layer(poly: PolyhedronSpec, arithmetic: Arithmetic) -> LayerParams:
    # fires iff b_i - <a_i, x> >= 0 under theta = 1
    return LayerParams.create(-poly.A, poly.b + 1, beta=1, theta=1, arithmetic=arithmetic)


def indicator_network(poly: PolyhedronSpec, arithmetic: Arithmetic = EXACT) -> Network:
    """
    T = 1, L = 2 network realizing the indicator of the polyhedron

    Layer 1 has one neuron per constraint; layer 2 is an AND neuron with unit
    weights and bias 1 - p, firing iff all p constraints hold.

    Args:
        poly: polyhedron
        arithmetic: numeric mode

    Returns:
        Network with membrane decoder V = 1, c = 0, a = (1)
    """
    first = _half_space_layer(poly, arithmetic)
    second = LayerParams.create([[1] * poly.p], [1 - poly.p], beta=1, theta=1, arithmetic=arithmetic)
    decoder = membrane_decoder([[1]], T=1, arithmetic=arithmetic)
    logger.info(f"Indicator network for {poly.p} constraints in dimension {poly.n}")
    return build_network([first, second], 1, decoder, arithmetic)


def polyhedra_network(polys: Sequence[PolyhedronSpec], values: Sequence, arithmetic: Arithmetic = EXACT) -> Network:
    """
    Weighted union of polyhedron indicators

    First layers are concatenated block-wise, second layers placed on the
    diagonal and the decoder weights are the given values. Shared
    hyperplanes are not merged.

    Args:
        polys: polyhedra in a common dimension
        values: output value of each polyhedron
        arithmetic: numeric mode

    Returns:
        Network realizing sum_i values_i 1_{P_i}
    """
    if not polys:
        raise ValidationError("At least one polyhedron is required")
    if len(values) != len(polys):
        raise ValidationError(f"Got {len(values)} values for {len(polys)} polyhedra")
    n = polys[0].n
    if any(poly.n != n for poly in polys):
        raise ValidationError("All polyhedra must live in the same dimension")

    total = sum(poly.p for poly in polys)
    first_W = np.concatenate([-poly.A for poly in polys], axis=0)
    first_b = np.concatenate([poly.b + 1 for poly in polys])
    second_W: List[List[int]] = []
    second_b = []
    offset = 0
    for poly in polys:
        row = [0] * total
        row[offset:offset + poly.p] = [1] * poly.p
        second_W.append(row)
        second_b.append(1 - poly.p)
        offset += poly.p

    first = LayerParams.create(first_W, first_b, beta=1, theta=1, arithmetic=arithmetic)
    second = LayerParams.create(second_W, second_b, beta=1, theta=1, arithmetic=arithmetic)
    decoder = membrane_decoder([list(values)], T=1, arithmetic=arithmetic)
    logger.info(f"Union network over {len(polys)} polyhedra, widths ({total}, {len(polys)})")
    return build_network([first, second], 1, decoder, arithmetic)
