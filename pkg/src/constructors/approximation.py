"""
Grid approximation of Lipschitz functions and exact error measurement in 1D
"""
import json
import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from loguru import logger

from src.errors import ValidationError
from src.snn_core.arithmetic import EXACT, Arithmetic, Scalar
from src.snn_core.network import Network
from src.snn_core.simulator import realize
from src.temporal import neuron_partition
from .step_functions import StepFunctionSpec, step_network, uniform_grid

Segment = Tuple[Scalar, Scalar, Scalar, Scalar]


@dataclass(frozen=True)
class PiecewiseLinearTarget:
    """
    Function that is linear on each half-open segment [x0, x1)

    Attributes:
        segments: (x0, x1, y0, y1) sorted by x0, non-overlapping; y1 is the left limit at x1
        outside_value: value off every segment
    """
    segments: Tuple[Segment, ...]
    outside_value: Scalar = 0
    name: str = "piecewise_linear"

    def __post_init__(self):
        for (a0, a1, _, _), (b0, _, _, _) in zip(self.segments, self.segments[1:]):
            if a1 > b0:
                raise ValidationError("Target segments overlap or are unsorted")
        if any(x0 >= x1 for x0, x1, _, _ in self.segments):
            raise ValidationError("Target segments must have positive length")

    def knots(self) -> List[Scalar]:
        return sorted({x for x0, x1, _, _ in self.segments for x in (x0, x1)})

    def segment_for(self, x) -> Optional[Segment]:
        starts = [segment[0] for segment in self.segments]
        position = bisect_right(starts, x) - 1
        if position >= 0 and x < self.segments[position][1]:
            return self.segments[position]
        return None

    @staticmethod
    def _along(segment: Segment, x) -> Scalar:
        x0, x1, y0, y1 = segment
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def limits(self, a, b) -> Tuple[Scalar, Scalar]:
        """Right limit at a and left limit at b of the piece covering (a, b)"""
        segment = self.segment_for((a + b) / 2)
        if segment is None:
            return self.outside_value, self.outside_value
        return self._along(segment, a), self._along(segment, b)

    def __call__(self, x) -> Scalar:
        if isinstance(x, (list, tuple)):
            if len(x) != 1:
                raise ValidationError("Piecewise-linear targets are one-dimensional")
            x = x[0]
        segment = self.segment_for(x)
        return self.outside_value if segment is None else self._along(segment, x)


def ramp_target(gamma, interval=(0, 1), arithmetic: Arithmetic = EXACT) -> PiecewiseLinearTarget:
    """f(x) = gamma x on the interval"""
    gamma = arithmetic.scalar(gamma)
    lo, hi = (arithmetic.scalar(v) for v in interval)
    return PiecewiseLinearTarget(segments=((lo, hi, gamma * lo, gamma * hi),), name="ramp")


def step_target(spec: StepFunctionSpec) -> PiecewiseLinearTarget:
    """One-dimensional step function as a target"""
    if spec.n != 1:
        raise ValidationError("Only one-dimensional step functions can serve as targets")
    grid = spec.breakpoints[0]
    segments = tuple((grid[i], grid[i + 1], spec.values[i], spec.values[i]) for i in range(spec.N))
    return PiecewiseLinearTarget(segments=segments, outside_value=spec.outside_value, name="step")


def staircase_target(K: int, epsilon, arithmetic: Arithmetic = EXACT) -> PiecewiseLinearTarget:
    """
    Continuous staircase on [0, K)

    Flat at k * epsilon inside [k - 1, k); around every integer k it ramps
    linearly from k * epsilon to (k + 1) * epsilon over [k - h, k + h) with
    h = 3 epsilon / 100. The ramps at 0 and K are cut in half by the domain.
    This h is the half-width that makes the step-network L2 error K epsilon^3 / 200.

    Args:
        K: number of unit steps
        epsilon: step height in (0, 1)
        arithmetic: numeric mode

    Returns:
        PiecewiseLinearTarget
    """
    if K < 1:
        raise ValidationError(f"K must be at least 1, got {K}")
    epsilon = arithmetic.scalar(epsilon)
    if not 0 < epsilon < 1:
        raise ValidationError(f"Staircase epsilon must lie in (0, 1), got {epsilon}")
    h = 3 * epsilon / 100
    half = epsilon / 2
    segments = [(arithmetic.scalar(0), h, half, epsilon)]
    for k in range(1, K + 1):
        level = k * epsilon
        segments.append((k - 1 + h, k - h, level, level))
        if k < K:
            segments.append((k - h, k + h, level, level + epsilon))
    segments.append((K - h, arithmetic.scalar(K), K * epsilon, K * epsilon + half))
    return PiecewiseLinearTarget(segments=tuple(segments), name="staircase")


def staircase_network(K: int, epsilon, arithmetic: Arithmetic = EXACT) -> Network:
    """Step network on the unit cells [k - 1, k) with values k * epsilon"""
    epsilon = arithmetic.scalar(epsilon)
    spec = StepFunctionSpec.create([list(range(K + 1))], [k * epsilon for k in range(1, K + 1)],
                                   arithmetic=arithmetic)
    return step_network(spec, arithmetic)


def network_breakpoints_1d(net: Network) -> List[Scalar]:
    """
    Input locations where some first-layer neuron changes its spike pattern

    Between consecutive breakpoints the whole network output is constant.
    """
    if net.n_in != 1:
        raise ValidationError(f"Exact 1D error measurement needs n_in = 1, got {net.n_in}")
    layer = net.layers[0]
    points = set()
    for k in range(layer.width):
        w = layer.W[k, 0]
        if w == 0:
            continue
        partition = neuron_partition(layer.beta, layer.theta, layer.u0[k], net.T, net.arithmetic)
        points.update((z - layer.b[k]) / w for z in partition.boundaries)
    return sorted(points)


def _pieces(net: Network, target: PiecewiseLinearTarget, interval):
    """Breakpoints in [lo, hi] and the open pieces between them with the network value"""
    arithmetic = net.arithmetic
    lo, hi = (arithmetic.scalar(v) for v in interval)
    if not lo < hi:
        raise ValidationError(f"Interval [{lo}, {hi}) is empty")
    inner = {p for p in network_breakpoints_1d(net) + target.knots() if lo < p < hi}
    points = [lo] + sorted(inner) + [hi]
    pieces = []
    for a, b in zip(points, points[1:]):
        value = realize(net, [(a + b) / 2])[0]
        pieces.append((a, b, value))
    return points, pieces


def sup_error_exact(net: Network, target: PiecewiseLinearTarget, interval=(0, 1)) -> Scalar:
    """
    Exact sup of |realize - target| over the half-open interval [lo, hi)

    The difference is linear on every open piece between breakpoints, so
    its sup there is reached as a one-sided limit at an end; breakpoints
    themselves are evaluated directly.

    Args:
        net: one-input network
        target: piecewise-linear target
        interval: (lo, hi)

    Returns:
        Supremum of the absolute error
    """
    if not isinstance(target, PiecewiseLinearTarget):
        raise ValidationError(f"Unsupported target: {type(target).__name__}")
    points, pieces = _pieces(net, target, interval)
    worst = net.arithmetic.scalar(0)
    for a, b, value in pieces:
        right_of_a, left_of_b = target.limits(a, b)
        worst = max(worst, abs(value - right_of_a), abs(value - left_of_b))
    for p in points[:-1]:
        worst = max(worst, abs(realize(net, [p])[0] - target(p)))
    return worst


def l2_error_sq(net: Network, target: PiecewiseLinearTarget, interval) -> Scalar:
    """
    Exact integral of |realize - target|^2 over the interval

    On a piece of length D where the error goes linearly from d0 to d1 the
    integral is D (d0^2 + d0 d1 + d1^2) / 3.
    """
    if not isinstance(target, PiecewiseLinearTarget):
        raise ValidationError(f"Unsupported target: {type(target).__name__}")
    _, pieces = _pieces(net, target, interval)
    total = net.arithmetic.scalar(0)
    for a, b, value in pieces:
        right_of_a, left_of_b = target.limits(a, b)
        d0, d1 = right_of_a - value, left_of_b - value
        total += (b - a) * (d0 * d0 + d0 * d1 + d1 * d1) / 3
    return total


def l2_error_exact(net: Network, K: int, epsilon) -> Scalar:
    """Squared L2 error of a network against the staircase on [0, K)"""
    target = staircase_target(K, epsilon, net.arithmetic)
    return l2_error_sq(net, target, (0, K))


@dataclass(frozen=True)
class ApproxReport:
    """
    Outcome of a grid approximation

    sup_error is exact when sup_is_exact is set, else it is the guaranteed
    bound gamma * cell_width / 2.
    """
    sup_error: Scalar
    l2_error_sq: Optional[Scalar]
    widths: Tuple[int, int]
    breakpoints: Tuple[Tuple[Scalar, ...], ...]
    gamma: Scalar
    epsilon: Scalar
    N: int
    sup_is_exact: bool
    arithmetic: Arithmetic = EXACT

    def to_dict(self) -> Dict:
        serialize = self.arithmetic.serialize
        return {
            "sup_error": serialize(self.sup_error),
            "sup_is_exact": self.sup_is_exact,
            "l2_error_sq": None if self.l2_error_sq is None else serialize(self.l2_error_sq),
            "widths": list(self.widths),
            "N": self.N,
            "gamma": serialize(self.gamma),
            "epsilon": serialize(self.epsilon),
            "breakpoints": [[serialize(r) for r in grid] for grid in self.breakpoints],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def cells_per_side(gamma, epsilon, diam) -> int:
    """max(ceil(diam * gamma / epsilon), 1), computed on exact fractions"""
    gamma, epsilon, diam = (EXACT.scalar(v) for v in (gamma, epsilon, diam))
    if not epsilon > 0:
        raise ValidationError(f"epsilon must be positive, got {epsilon}")
    if gamma < 0:
        raise ValidationError(f"Lipschitz constant must be non-negative, got {gamma}")
    return max(math.ceil(diam * gamma / epsilon), 1)


def lipschitz_network(
    f: Callable,
    gamma,
    epsilon,
    box: Sequence[Tuple[Union[int, float, Fraction], Union[int, float, Fraction]]],
    arithmetic: Arithmetic = EXACT
) -> Tuple[Network, ApproxReport]:
    """
    Step network approximating a Lipschitz function to within epsilon

    The box is cut into N^n equal cells, N = max(ceil(diam gamma / epsilon), 1)
    with diam the longest side; each cell takes the value of f at its center.

    Args:
        f: function of a point (list of scalars)
        gamma: Lipschitz constant in the sup norm
        epsilon: target accuracy
        box: (lo, hi) per coordinate
        arithmetic: numeric mode

    Returns:
        (network, report)
    """
    if not box:
        raise ValidationError("The box needs at least one coordinate")
    gamma, epsilon = arithmetic.scalar(gamma), arithmetic.scalar(epsilon)
    sides = [arithmetic.scalar(hi) - arithmetic.scalar(lo) for lo, hi in box]
    diam = max(sides)
    N = cells_per_side(gamma, epsilon, diam)

    grids = uniform_grid(box, N, arithmetic)
    draft = StepFunctionSpec.create(grids, [0] * N ** len(box), arithmetic=arithmetic)
    values = [f(draft.cell_center(index)) for index in draft.cells()]
    spec = StepFunctionSpec.create(grids, values, arithmetic=arithmetic)
    net = step_network(spec, arithmetic)

    if len(box) == 1 and isinstance(f, PiecewiseLinearTarget):
        interval = (grids[0][0], grids[0][-1])
        sup_error = sup_error_exact(net, f, interval)
        l2 = l2_error_sq(net, f, interval)
        exact = True
    else:
        sup_error = gamma * diam / N / 2
        l2 = None
        exact = False

    report = ApproxReport(
        sup_error=sup_error,
        l2_error_sq=l2,
        widths=spec.widths,
        breakpoints=grids,
        gamma=gamma,
        epsilon=epsilon,
        N=N,
        sup_is_exact=exact,
        arithmetic=arithmetic,
    )
    logger.info(f"Lipschitz approximant: N={N}, widths {spec.widths}, sup error {sup_error}")
    return net, report


@dataclass(frozen=True)
class ScalingRow:
    width: int
    measured: Scalar
    predicted: Scalar

    @property
    def relative_gap(self) -> float:
        if self.predicted == 0:
            return 0.0 if self.measured == 0 else math.inf
        return float(abs(self.measured - self.predicted) / self.predicted)


def ramp_error_scaling(gamma, widths: Sequence[int], arithmetic: Arithmetic = EXACT) -> List[ScalingRow]:
    """
    Measured sup error of the grid approximant of gamma * x on [0, 1)
    for each first-layer width w, next to the prediction gamma / (2 (w - 1))
    """
    gamma = arithmetic.scalar(gamma)
    target = ramp_target(gamma, (0, 1), arithmetic)
    rows = []
    for width in widths:
        if width < 2:
            raise ValidationError(f"First-layer width must be at least 2, got {width}")
        N = width - 1
        grids = uniform_grid([(0, 1)], N, arithmetic)
        values = [target((grids[0][i] + grids[0][i + 1]) / 2) for i in range(N)]
        net = step_network(StepFunctionSpec.create(grids, values, arithmetic=arithmetic), arithmetic)
        measured = sup_error_exact(net, target, (0, 1))
        rows.append(ScalingRow(width=width, measured=measured, predicted=gamma / (2 * N)))
        logger.debug(f"width {width}: measured {measured}, predicted {gamma / (2 * N)}")
    return rows
