"""
Identity network: reproduces any binary input spike train at its last layer
"""
from fractions import Fraction
from typing import Optional

import numpy as np
from loguru import logger

from src.errors import ValidationError
from src.snn_core.arithmetic import EXACT, Arithmetic
from src.snn_core.network import LayerParams, Network, build_network


def identity_network(
    n: int,
    T: int,
    L: int,
    epsilon=None,
    arithmetic: Arithmetic = EXACT
) -> Network:
    """
    L layers of width n with W = (1 + epsilon) I, b = 0, u0 = 0, beta = 1, theta = 1

    A spike adds epsilon to the potential and silence leaves it unchanged,
    so the potential stays below T * epsilon < 1 and every layer copies
    its input train.

    Args:
        n: width
        T: latency
        L: depth
        epsilon: gadget margin in (0, 1/T), defaults to 1/(2T)
        arithmetic: numeric mode

    Returns:
        Network with identity decoder
    """
    if n < 1 or L < 1:
        raise ValidationError(f"Width and depth must be positive, got n={n}, L={L}")
    if T < 1:
        raise ValidationError(f"Latency T must be at least 1, got {T}")
    epsilon = arithmetic.scalar(Fraction(1, 2 * T) if epsilon is None else epsilon)
    if not 0 < epsilon < arithmetic.scalar(Fraction(1, T)):
        raise ValidationError(f"epsilon must lie in (0, 1/T) = (0, {Fraction(1, T)}), got {epsilon}")

    weight = (1 + epsilon) * arithmetic.array(np.eye(n, dtype=int).tolist())
    layers = [LayerParams.create(weight, beta=1, theta=1, arithmetic=arithmetic) for _ in range(L)]
    logger.info(f"Identity network: n={n}, T={T}, L={L}, epsilon={epsilon}")
    return build_network(layers, T, arithmetic=arithmetic)
