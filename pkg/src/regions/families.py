"""
Parallel hyperplane families induced by first-layer neurons
"""
from dataclasses import dataclass
from typing import List, Tuple

from loguru import logger

from src.errors import ValidationError
from src.snn_core.arithmetic import Scalar
from src.snn_core.network import Network
from src.temporal import TemporalPartition, neuron_partition


@dataclass(frozen=True)
class ParallelFamily:
    """
    Hyperplanes {x : <w, x> = c_j} sharing one direction

    Attributes:
        direction: nonzero weight vector w
        offsets: strictly increasing c_1 < ... < c_k
        neuron: index of the first-layer neuron the family comes from (-1 if built by hand)
    """
    direction: Tuple[Scalar, ...]
    offsets: Tuple[Scalar, ...]
    neuron: int = -1

    def __post_init__(self):
        object.__setattr__(self, "direction", tuple(self.direction))
        object.__setattr__(self, "offsets", tuple(self.offsets))
        if self.offsets and all(value == 0 for value in self.direction):
            raise ValidationError("A family with hyperplanes needs a nonzero direction")
        if any(lo >= hi for lo, hi in zip(self.offsets, self.offsets[1:])):
            raise ValidationError("Family offsets must be strictly increasing")

    @property
    def k(self) -> int:
        return len(self.offsets)

    @property
    def dimension(self) -> int:
        return len(self.direction)


def neuron_partitions(net: Network) -> List[TemporalPartition]:
    """Temporal partition of every first-layer neuron"""
    layer = net.layers[0]
    return [
        neuron_partition(layer.beta, layer.theta, layer.u0[k], net.T, net.arithmetic)
        for k in range(layer.width)
    ]


def first_layer_families(net: Network) -> List[ParallelFamily]:
    """
    One parallel family per first-layer neuron

    Neuron k fires at time t iff <w_k, x> + b_k >= z*, so its hyperplanes sit
    at offsets z* - b_k. Zero-weight neurons give an empty family.

    Args:
        net: network

    Returns:
        List of ParallelFamily, in neuron order
    """
    if net.n_in < 1:
        raise ValidationError("The network needs at least one input")
    layer = net.layers[0]
    families = []
    for k, partition in enumerate(neuron_partitions(net)):
        direction = tuple(layer.W[k])
        if all(value == 0 for value in direction):
            logger.warning(f"First-layer neuron {k} has zero weights; it contributes no hyperplanes")
            families.append(ParallelFamily(direction=direction, offsets=(), neuron=k))
            continue
        offsets = tuple(z - layer.b[k] for z in partition.boundaries)
        families.append(ParallelFamily(direction=direction, offsets=offsets, neuron=k))
    logger.debug(f"First-layer families: {[family.k for family in families]} hyperplanes each")
    return families
