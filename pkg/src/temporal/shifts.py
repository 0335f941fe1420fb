"""
Realized shift trajectories of a single neuron
Follows the history branch a fixed pre-activation actually visits
"""
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from loguru import logger

from src.snn_core.arithmetic import EXACT, Arithmetic, Scalar
from .partition import ShiftHistory, pattern_oracle, shift_value


@dataclass(frozen=True)
class ShiftTrajectory:
    """
    Firing locations z*_t along the realized spike history of one input

    Attributes:
        z: pre-activation the trajectory was computed for
        locations: z*_1, ..., z*_T
        bits: realized spikes s(1), ..., s(T)
        first_repeat: first (t, s) with s < t and z*_t == z*_s exactly, if any
    """
    z: Scalar
    locations: Tuple[Scalar, ...]
    bits: Tuple[int, ...]
    first_repeat: Optional[Tuple[int, int]]
    arithmetic: Arithmetic = EXACT

    @property
    def T(self) -> int:
        return len(self.bits)

    def differences(self) -> List[Scalar]:
        """|z*_{t+1} - z*_t| for t = 1, ..., T - 1"""
        return [abs(b - a) for a, b in zip(self.locations, self.locations[1:])]

    def near_repeats(self, period: int, tolerance: float) -> List[int]:
        """Time steps t with |z*_t - z*_{t-period}| <= tolerance"""
        return [
            t for t in range(period + 1, self.T + 1)
            if abs(float(self.locations[t - 1] - self.locations[t - 1 - period])) <= tolerance
        ]

    def repeated_steps(self) -> List[int]:
        """Time steps whose location equals an earlier one (exactly, or within tolerance in float mode)"""
        seen: List[Scalar] = []
        repeated = []
        for t, location in enumerate(self.locations, start=1):
            if any(self.arithmetic.eq(location, earlier) for earlier in seen):
                repeated.append(t)
            seen.append(location)
        return repeated

    def to_csv_rows(self) -> List[Dict[str, str]]:
        repeated = set(self.repeated_steps())
        return [
            {
                "t": str(t),
                "z_star": str(location),
                "bit": str(bit),
                "repeat": "1" if t in repeated else "0",
            }
            for t, (location, bit) in enumerate(zip(self.locations, self.bits), start=1)
        ]


def shift_trajectory(z, beta, theta, u0, T: int, arithmetic: Arithmetic = EXACT) -> ShiftTrajectory:
    """
    Firing locations along the history the neuron realizes for input z

    Args:
        z: pre-activation <w, x> + b
        beta: leak
        theta: threshold
        u0: initial membrane potential
        T: latency
        arithmetic: numeric mode

    Returns:
        ShiftTrajectory with exact repeat detection
    """
    z = arithmetic.scalar(z)
    bits = pattern_oracle(z, beta, theta, u0, T, arithmetic)
    locations = []
    first_repeat = None
    history = ShiftHistory()
    index: Dict[Scalar, int] = {}
    for t in range(1, T + 1):
        location = shift_value(t, history, beta, theta, u0, arithmetic)
        if first_repeat is None and location in index:
            first_repeat = (t, index[location])
        index.setdefault(location, t)
        locations.append(location)
        history = history.extended(bits[t - 1])

    if first_repeat:
        logger.info(f"Shift at t={first_repeat[0]} repeats t={first_repeat[1]} exactly")
    return ShiftTrajectory(z=z, locations=tuple(locations), bits=bits,
                           first_repeat=first_repeat, arithmetic=arithmetic)
