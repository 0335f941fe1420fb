"""
Activation and constant region counts of whole networks
Exact in the plane, sampled with a low-discrepancy sequence otherwise
"""
import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy.stats import qmc

from src.errors import ValidationError
from src.snn_core.network import Network
from src.snn_core.simulator import decode, decode_batch, simulate, simulate_batch
from .arrangement import Box, CellComplex2D, build_cell_complex, family_lines
from .bounds import count_bound
from .families import first_layer_families


@dataclass
class CountReport:
    """
    Region counts of one network

    Attributes:
        layer_counts: distinct spike trains of layer l, for l = 1..layer
        distinct_outputs: number of distinct decoded outputs
        connected_constant_regions: components after merging adjacent cells with equal output (exact only)
        pattern_components: components after merging adjacent cells with equal layer trains (exact only)
        bound: count_bound of the first layer
        method: "exact2d" or "sampled"
        samples: number of sampled points (sampled only)
        seed: sampling seed (sampled only)
    """
    layer_counts: List[int]
    distinct_outputs: int
    bound: int
    method: str
    connected_constant_regions: Optional[int] = None
    pattern_components: Optional[int] = None
    samples: Optional[int] = None
    seed: Optional[int] = None
    complex: Optional[CellComplex2D] = field(default=None, repr=False)

    @property
    def layer(self) -> int:
        return len(self.layer_counts)

    def to_dict(self) -> Dict:
        return {
            "layer_counts": list(self.layer_counts),
            "distinct_outputs": self.distinct_outputs,
            "connected_constant_regions": self.connected_constant_regions,
            "pattern_components": self.pattern_components,
            "bound": self.bound,
            "method": self.method,
            "samples": self.samples,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _resolve_layer(net: Network, layer: Optional[int]) -> int:
    layer = net.L if layer is None else layer
    if not 1 <= layer <= net.L:
        raise ValidationError(f"Layer must lie in 1..{net.L}, got {layer}")
    return layer


def _first_layer_bound(net: Network) -> int:
    return count_bound(net.layers[0].width, net.n_in, net.T)


def constant_regions_2d(net: Network, box: Optional[Box] = None, layer: Optional[int] = None) -> CountReport:
    """
    Exact region counts of a network on 2D inputs

    The first-layer arrangement is clipped to the box; every cell is
    evaluated at its representative point.

    Args:
        net: network with n_in = 2
        box: ((x_lo, x_hi), (y_lo, y_hi)); box enclosing every vertex if omitted
        layer: last layer whose trains are counted (defaults to L)

    Returns:
        CountReport with method "exact2d"
    """
    if net.n_in != 2:
        raise ValidationError(f"Exact region counting needs n_in = 2, got {net.n_in}")
    layer = _resolve_layer(net, layer)
    lines = family_lines(first_layer_families(net))
    complex_ = build_cell_complex(lines, box)

    per_layer: List[List[bytes]] = [[] for _ in range(layer)]
    outputs = []
    for cell in complex_.cells:
        trace = simulate(net, list(cell.representative))
        for index in range(layer):
            per_layer[index].append(trace.spikes[index].key())
        cell.pattern = tuple(tuple(int(bit) for bit in row) for row in trace.spikes[layer - 1].bits)
        cell.output = tuple(decode(net.decoder, trace.output_train, net.arithmetic))
        outputs.append(cell.output)

    report = CountReport(
        layer_counts=[len(set(keys)) for keys in per_layer],
        distinct_outputs=len(set(outputs)),
        connected_constant_regions=complex_.components(outputs),
        pattern_components=complex_.components(per_layer[-1]),
        bound=_first_layer_bound(net),
        method="exact2d",
        complex=complex_,
    )
    logger.info(f"Exact 2D regions: {complex_.count} cells, layer counts {report.layer_counts}, "
                f"{report.connected_constant_regions} constant regions")
    return report


def sample_points(box: Sequence[Tuple[float, float]], N: int, seed: int = 0) -> np.ndarray:
    """N scrambled Halton points scaled to the box"""
    if N < 1:
        raise ValidationError(f"Sample count must be positive, got {N}")
    lows = [float(lo) for lo, _ in box]
    highs = [float(hi) for _, hi in box]
    sampler = qmc.Halton(d=len(box), scramble=True, seed=seed)
    return qmc.scale(sampler.random(N), lows, highs)


def sample_patterns(
    net: Network,
    box: Sequence[Tuple[float, float]],
    N: int,
    layer: Optional[int] = None,
    seed: int = 0,
    chunk: int = 65536
) -> CountReport:
    """
    Lower bounds on the region counts from N quasi-uniform points

    Args:
        net: network (any input dimension)
        box: (lo, hi) per input coordinate
        N: number of points
        layer: last layer whose trains are counted (defaults to L)
        seed: sampling seed
        chunk: points simulated per batch

    Returns:
        CountReport with method "sampled"
    """
    if len(box) != net.n_in:
        raise ValidationError(f"Box has {len(box)} sides, network expects {net.n_in} inputs")
    layer = _resolve_layer(net, layer)
    points = sample_points(box, N, seed)

    seen = [set() for _ in range(layer)]
    outputs = set()
    for start in range(0, N, chunk):
        batch = points[start:start + chunk]
        trains = simulate_batch(net, batch)
        for index in range(layer):
            flat = trains[index].reshape(len(batch), -1)
            seen[index].update(row.tobytes() for row in np.unique(flat, axis=0))
        decoded = decode_batch(net, trains[-1])
        outputs.update(tuple(row) for row in np.unique(decoded, axis=0))

    report = CountReport(
        layer_counts=[len(keys) for keys in seen],
        distinct_outputs=len(outputs),
        bound=_first_layer_bound(net),
        method="sampled",
        samples=N,
        seed=seed,
    )
    logger.info(f"Sampled {N} points: layer counts {report.layer_counts}, {report.distinct_outputs} outputs")
    return report
