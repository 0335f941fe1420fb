"""
Temporal partition of a single first-layer neuron
Splits the pre-activation axis z = <w, x> + b into intervals with distinct spike patterns
"""
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

from loguru import logger
from sortedcontainers import SortedList

from src.errors import ValidationError
from src.snn_core.arithmetic import EXACT, Arithmetic, Scalar

Pattern = Tuple[int, ...]


@dataclass(frozen=True)
class ShiftHistory:
    """Spikes s(1), ..., s(t-1) the neuron emitted before time t"""
    bits: Tuple[int, ...] = ()

    def __post_init__(self):
        bits = tuple(int(bit) for bit in self.bits)
        if any(bit not in (0, 1) for bit in bits):
            raise ValidationError(f"History entries must be 0 or 1, got {bits}")
        object.__setattr__(self, "bits", bits)

    def __len__(self) -> int:
        return len(self.bits)

    def extended(self, bit: int) -> "ShiftHistory":
        return ShiftHistory(self.bits + (bit,))

    def as_string(self) -> str:
        return "".join(str(bit) for bit in self.bits)


def _check_temporal_params(beta: Scalar, theta: Scalar, T: Optional[int] = None):
    if not 0 <= beta <= 1:
        raise ValidationError(f"Leak beta must lie in [0, 1], got {beta}")
    if not theta > 0:
        raise ValidationError(f"Threshold theta must be positive, got {theta}")
    if T is not None and T < 1:
        raise ValidationError(f"Latency T must be at least 1, got {T}")


def shift_value(
    t: int,
    history: ShiftHistory,
    beta,
    theta,
    u0,
    arithmetic: Arithmetic = EXACT
) -> Scalar:
    """
    Firing location z*(t, h): the neuron fires at time t iff z >= z*

    z* = (-beta^t u0 + theta (1 + sum_{i=1}^{t-1} beta^i h_{t-i})) / sum_{i=0}^{t-1} beta^i

    Args:
        t: time step, 1-based
        history: spikes before t (length t - 1)
        beta: leak
        theta: threshold
        u0: initial membrane potential
        arithmetic: numeric mode

    Returns:
        Threshold location on the pre-activation axis
    """
    beta, theta, u0 = (arithmetic.scalar(value) for value in (beta, theta, u0))
    _check_temporal_params(beta, theta)
    if t < 1:
        raise ValidationError(f"Time step must be at least 1, got {t}")
    if len(history) != t - 1:
        raise ValidationError(f"History at t={t} must have {t - 1} entries, got {len(history)}")

    bits = history.bits
    carried = arithmetic.total(beta ** i for i in range(1, t) if bits[t - i - 1])
    leak_sum = arithmetic.total(beta ** i for i in range(t))
    return (-(beta ** t) * u0 + theta * (1 + carried)) / leak_sum


def pattern_oracle(z, beta, theta, u0, T: int, arithmetic: Arithmetic = EXACT) -> Pattern:
    """
    Spike pattern of a neuron with constant pre-activation z, by direct iteration

    Args:
        z: pre-activation <w, x> + b
        beta: leak
        theta: threshold
        u0: initial membrane potential
        T: latency
        arithmetic: numeric mode

    Returns:
        Tuple of T bits
    """
    z, beta, theta, u = (arithmetic.scalar(value) for value in (z, beta, theta, u0))
    _check_temporal_params(beta, theta, T)
    bits = []
    for _ in range(T):
        membrane = beta * u + z
        s = 1 if arithmetic.fires(membrane - theta) else 0
        u = membrane - theta * s
        bits.append(s)
    return tuple(bits)


def temporal_bound(T: int) -> int:
    """Maximum number of intervals of one neuron: (T^2 + T + 2) / 2"""
    if T < 1:
        raise ValidationError(f"Latency T must be at least 1, got {T}")
    return (T * T + T + 2) // 2


def tight_initial_potential(T: int, offset: int = 0) -> Fraction:
    """
    Initial potential for beta = theta = 1 that reaches temporal_bound(T)

    Small positive values below 1/T^2 keep the thresholds (1 + m - u0) / t
    pairwise distinct and put each new one inside a live interval; offset
    picks distinct values for several neurons.
    """
    return Fraction(1, 2 * T * T + offset + 1)


@dataclass(frozen=True)
class TemporalPartition:
    """
    Intervals (-inf, z_1), [z_1, z_2), ..., [z_{r-1}, inf) with one pattern each

    Each boundary belongs to the interval on its right.
    """
    boundaries: Tuple[Scalar, ...]
    patterns: Tuple[Pattern, ...]
    T: int
    beta: Scalar
    theta: Scalar
    u0: Scalar
    arithmetic: Arithmetic = field(default=EXACT, compare=False)

    def __post_init__(self):
        if len(self.patterns) != len(self.boundaries) + 1:
            raise ValidationError("A partition needs exactly one more pattern than boundaries")

    @property
    def count(self) -> int:
        return len(self.patterns)

    def intervals(self) -> Iterator[Tuple[Optional[Scalar], Optional[Scalar], Pattern]]:
        """(lo, hi, pattern) triples; None stands for an infinite end"""
        lows = (None,) + self.boundaries
        highs = self.boundaries + (None,)
        return zip(lows, highs, self.patterns)

    def pattern_at(self, z) -> Pattern:
        z = self.arithmetic.scalar(z)
        return self.patterns[bisect_right(self.boundaries, z)]

    def check_points(self, per_interval: int = 5) -> List[Tuple[Scalar, Pattern]]:
        """
        Sample points of every interval together with the expected pattern

        Both endpoints are approached from inside: the left end itself and
        points just below the right end.
        """
        one = self.arithmetic.scalar(1)
        width_floor = one / 1000
        points = []
        for lo, hi, pattern in self.intervals():
            if lo is None and hi is None:
                lo, hi = -one, one
            elif lo is None:
                lo = hi - one
            elif hi is None:
                hi = lo + one
            span = hi - lo
            candidates = [lo]
            for k in range(1, per_interval):
                candidates.append(lo + span * k / per_interval)
            if self.arithmetic.exact:
                candidates[-1] = hi - min(span, width_floor) / 1000
            points.extend((z, pattern) for z in candidates[:per_interval])
        return points

    def to_csv_rows(self) -> List[Dict[str, str]]:
        """interval_lo, interval_hi, pattern rows for CSV export"""
        rows = []
        for lo, hi, pattern in self.intervals():
            rows.append({
                "interval_lo": "-inf" if lo is None else str(lo),
                "interval_hi": "inf" if hi is None else str(hi),
                "pattern": "".join(str(bit) for bit in pattern),
            })
        return rows


def neuron_partition(beta, theta, u0, T: int, arithmetic: Arithmetic = EXACT) -> TemporalPartition:
    """
    Event-driven interval refinement of the pre-activation axis

    At every time step each live interval is either split at its firing
    location z*(t, history) or receives the single bit forced on it.

    Args:
        beta: leak
        theta: threshold
        u0: initial membrane potential
        T: latency
        arithmetic: numeric mode; float mode treats locations within the tolerance of an endpoint as coincident

    Returns:
        TemporalPartition
    """
    beta, theta, u0 = (arithmetic.scalar(value) for value in (beta, theta, u0))
    _check_temporal_params(beta, theta, T)

    boundaries = SortedList()
    # pattern of every interval, keyed by its left end (None for the leftmost)
    histories: Dict[Optional[Scalar], ShiftHistory] = {None: ShiftHistory()}

    for t in range(1, T + 1):
        lows = [None] + list(boundaries)
        highs = list(boundaries) + [None]
        updated: Dict[Optional[Scalar], ShiftHistory] = {}
        for lo, hi in zip(lows, highs):
            history = histories[lo]
            location = shift_value(t, history, beta, theta, u0, arithmetic)
            above_lo = lo is None or arithmetic.lt(lo, location)
            below_hi = hi is None or arithmetic.lt(location, hi)
            if above_lo and below_hi:
                boundaries.add(location)
                updated[lo] = history.extended(0)
                updated[location] = history.extended(1)
            elif above_lo:
                updated[lo] = history.extended(0)
            else:
                updated[lo] = history.extended(1)
        histories = updated
        logger.debug(f"t={t}: {len(histories)} intervals")

    ordered = [None] + list(boundaries)
    patterns = tuple(histories[lo].bits for lo in ordered)
    partition = TemporalPartition(
        boundaries=tuple(boundaries),
        patterns=patterns,
        T=T,
        beta=beta,
        theta=theta,
        u0=u0,
        arithmetic=arithmetic,
    )
    logger.debug(f"Partition beta={beta}, theta={theta}, u0={u0}, T={T}: {partition.count} intervals")
    return partition


def distinct_shift_values(T: int) -> List[Fraction]:
    """
    Firing locations for beta = theta = 1 and u0 = 0

    Returns the deduplicated, sorted set {(1 + m) / t : 1 <= t <= T, 0 <= m <= t - 1}.
    """
    if T < 1:
        raise ValidationError(f"Latency T must be at least 1, got {T}")
    return sorted({Fraction(1 + m, t) for t in range(1, T + 1) for m in range(t)})

