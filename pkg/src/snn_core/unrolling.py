"""
Heaviside-ANN unrolling of an SNN
Each layer becomes one threshold layer over the time-stacked activations
"""
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from loguru import logger

from src.errors import ValidationError
from .arithmetic import Arithmetic, Scalar
from .network import Network
from .simulator import SpikeTrain


def stack_time(train: np.ndarray) -> np.ndarray:
    """n x T matrix -> time-major vector [x(1); x(2); ...; x(T)]"""
    return np.asarray(train).T.reshape(-1)


def unstack_time(vector: np.ndarray, n: int) -> np.ndarray:
    """Inverse of stack_time"""
    return np.asarray(vector).reshape(-1, n).T


@dataclass(frozen=True)
class UnrolledLayer:
    """
    One unrolled layer

    Attributes:
        weight: block-diagonal matrix kron(I_T, W), shape (n T, n_prev T)
        bias: time-indexed static bias b - theta, stacked over T
        beta: leak carried into the dynamic part of the bias
        theta: threshold subtracted after a spike
        u0: initial membrane potential
    """
    weight: np.ndarray
    bias: np.ndarray
    beta: Scalar
    theta: Scalar
    u0: np.ndarray

    @property
    def width(self) -> int:
        return self.u0.shape[0]

    def block(self, t: int) -> np.ndarray:
        """Rows of the weight matrix belonging to time step t (0-based)"""
        n = self.width
        return self.weight[t * n:(t + 1) * n]


@dataclass(frozen=True)
class HeavisideUnrolling:
    """Flat threshold-network description of an SNN"""
    layers: Tuple[UnrolledLayer, ...]
    T: int
    arithmetic: Arithmetic

    def evaluate(self, s0) -> List[SpikeTrain]:
        """
        Evaluate on an input train

        The bias of step t is beta u(t-1) + b - theta, so it depends on the
        spike history; layers are evaluated one time block at a time.

        Args:
            s0: input train, n_in x T

        Returns:
            Spike train of every layer
        """
        arithmetic = self.arithmetic
        drive = stack_time(arithmetic.array(s0))
        if drive.shape[0] != self.layers[0].weight.shape[1]:
            raise ValidationError(
                f"Stacked input has length {drive.shape[0]}, expected {self.layers[0].weight.shape[1]}"
            )

        trains = []
        for layer in self.layers:
            n = layer.width
            u = np.array(layer.u0, dtype=arithmetic.dtype)
            out = np.zeros(n * self.T, dtype=np.int8)
            for t in range(self.T):
                static = layer.bias[t * n:(t + 1) * n]
                dynamic_bias = layer.beta * u + static
                s = arithmetic.heaviside(layer.block(t).dot(drive) + dynamic_bias)
                # back to the membrane: u(t) = beta u(t-1) + W s + b - theta s
                u = layer.block(t).dot(drive) + dynamic_bias + layer.theta * (1 - arithmetic.cast_bits(s))
                out[t * n:(t + 1) * n] = s
            trains.append(SpikeTrain(unstack_time(out, n)))
            drive = arithmetic.cast_bits(out)
        return trains


def unroll_to_heaviside(net: Network) -> HeavisideUnrolling:
    """
    Unroll every layer into a block-diagonal threshold layer

    Args:
        net: network to unroll

    Returns:
        HeavisideUnrolling whose traces match simulate bit-for-bit
    """
    arithmetic = net.arithmetic
    identity = np.eye(net.T, dtype=np.int64).astype(arithmetic.dtype)
    layers = []
    for layer in net.layers:
        weight = np.kron(identity, layer.W)
        bias = np.tile(layer.b - layer.theta, net.T)
        for values in (weight, bias):
            values.flags.writeable = False
        layers.append(UnrolledLayer(weight=weight, bias=bias, beta=layer.beta,
                                    theta=layer.theta, u0=layer.u0))
    logger.debug(f"Unrolled {net.L} layers over T={net.T}")
    return HeavisideUnrolling(layers=tuple(layers), T=net.T, arithmetic=arithmetic)
