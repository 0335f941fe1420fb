"""
First layers whose hyperplane families are in general position in the plane
Such layers reach the closed-form region bound exactly
"""
from collections import Counter
from fractions import Fraction
from typing import List, Sequence

from loguru import logger
from tenacity import retry, retry_if_exception_type, stop_after_attempt

from src.errors import CoincidenceError, ValidationError
from src.snn_core.arithmetic import EXACT, Arithmetic
from src.snn_core.network import LayerParams, Network, build_network
from src.temporal import neuron_partition, tight_initial_potential
from .arrangement import Line, family_lines, intersection, make_line, parallel, vertices
from .families import ParallelFamily


class GeneralPositionBuilder:
    """
    Adds neuron families one at a time, translating each new family so that
    every existing intersection point lies strictly on its silent side
    """

    def __init__(self, T: int):
        """
        Args:
            T: latency shared by all neurons
        """
        if T < 1:
            raise ValidationError(f"Latency T must be at least 1, got {T}")
        self.T = T
        self.families: List[ParallelFamily] = []
        self.biases: List[Fraction] = []
        self.initial_potentials: List[Fraction] = []
        self.margin = Fraction(1)

    @property
    def lines(self) -> List[Line]:
        return family_lines(self.families)

    @retry(
        stop=stop_after_attempt(8),
        retry=retry_if_exception_type(CoincidenceError),
        reraise=True
    )
    def _place(self, direction, locations, points) -> Fraction:
        """Bias for a new family; raises CoincidenceError if a translated line hits a point"""
        if not points:
            return Fraction(0)
        reach = max(direction[0] * p[0] + direction[1] * p[1] for p in points)
        bias = min(locations) - reach - self.margin
        offsets = [z - bias for z in locations]
        for p in points:
            value = direction[0] * p[0] + direction[1] * p[1]
            if any(value == offset for offset in offsets):
                self.margin *= 2
                logger.warning(f"Translated family touches ({p[0]}, {p[1]}); retrying with margin {self.margin}")
                raise CoincidenceError(f"Family with direction {direction} passes through an existing vertex")
        return bias

    def add_neuron(self, direction) -> ParallelFamily:
        """
        Append one neuron with beta = theta = 1 and a tight initial potential

        Args:
            direction: weight vector (2 entries), not parallel to earlier ones

        Returns:
            The neuron's ParallelFamily
        """
        direction = tuple(Fraction(value) for value in direction)
        for family in self.families:
            if parallel(make_line(direction, 0), make_line(family.direction, 0)):
                raise ValidationError(f"Direction {direction} is parallel to {family.direction}")

        u0 = tight_initial_potential(self.T, offset=len(self.families))
        partition = neuron_partition(1, 1, u0, self.T, EXACT)
        points = vertices(self.lines)
        coordinates = [abs(c) for p in points for c in p]
        self.margin = 1 + max(coordinates, default=Fraction(0))
        bias = self._place(direction, partition.boundaries, points)

        family = ParallelFamily(
            direction=direction,
            offsets=tuple(z - bias for z in partition.boundaries),
            neuron=len(self.families),
        )
        self.families.append(family)
        self.biases.append(bias)
        self.initial_potentials.append(u0)
        logger.debug(f"Neuron {family.neuron}: direction {direction}, bias {bias}, {family.k} lines")
        return family

    def network(self, arithmetic: Arithmetic = EXACT) -> Network:
        W = [list(family.direction) for family in self.families]
        layer = LayerParams.create(W, self.biases, self.initial_potentials, beta=1, theta=1,
                                   arithmetic=arithmetic)
        return build_network([layer], self.T, arithmetic=arithmetic)


def general_position_layer(n1: int, T: int, arithmetic: Arithmetic = EXACT) -> Network:
    """
    One-layer network on 2D inputs whose families attain count_bound(n1, 2, T)

    Directions are (1, k) for k = 0, ..., n1 - 1; every neuron uses beta = 1,
    theta = 1 and its own small initial potential so it contributes
    (T^2 + T)/2 lines.

    Args:
        n1: number of neurons (at least 2)
        T: latency
        arithmetic: numeric mode of the returned network

    Returns:
        Network with a single layer and identity decoder
    """
    if n1 < 2:
        raise ValidationError(f"General position needs at least two neurons, got {n1}")
    builder = GeneralPositionBuilder(T)
    for k in range(n1):
        builder.add_neuron((1, k))
    logger.info(f"General-position layer: n1={n1}, T={T}, {len(builder.lines)} lines")
    return builder.network(arithmetic)


def in_general_position(families: Sequence[ParallelFamily]) -> bool:
    """
    No two lines of different families are parallel and no point lies on three or more lines
    """
    for i, first in enumerate(families):
        for second in families[:i]:
            if first.offsets and second.offsets and parallel(
                make_line(first.direction, 0), make_line(second.direction, 0)
            ):
                return False
    lines = family_lines(families)
    incidences = Counter()
    for i, line in enumerate(lines):
        for earlier in lines[:i]:
            if not parallel(line, earlier):
                incidences[intersection(line, earlier)] += 1
    # k lines through one point meet in k (k - 1) / 2 pairs
    return all(count == 1 for count in incidences.values())
