"""
Exact forward simulation of discrete-time LIF spiking networks
Encoding, layer recurrence, decoding and trace replay
"""
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from loguru import logger

from src.errors import ValidationError
from .arithmetic import Arithmetic
from .network import (
    SPIKE_TIME_TRANSFORMS,
    CountDecoder,
    DecoderSpec,
    FirstSpikeTimeDecoder,
    LayerParams,
    MembranePotentialDecoder,
    Network,
    RateDecoder,
)


@dataclass(frozen=True)
class SpikeTrain:
    """Binary spike matrix, neuron-major (n x T)"""
    bits: np.ndarray

    def __post_init__(self):
        bits = np.asarray(self.bits)
        if bits.ndim != 2:
            raise ValidationError(f"Spike train must be a matrix, got shape {bits.shape}")
        if not np.isin(bits, (0, 1)).all():
            raise ValidationError("Spike train entries must be 0 or 1")
        bits = bits.astype(np.int8)
        bits.flags.writeable = False
        object.__setattr__(self, "bits", bits)

    @property
    def n(self) -> int:
        return self.bits.shape[0]

    @property
    def T(self) -> int:
        return self.bits.shape[1]

    def key(self) -> bytes:
        """Hashable identity of the pattern"""
        return np.asarray(self.bits.shape, dtype=np.int64).tobytes() + self.bits.tobytes()

    def bitstrings(self) -> List[str]:
        return ["".join(str(int(bit)) for bit in row) for row in self.bits]

    def __eq__(self, other) -> bool:
        return isinstance(other, SpikeTrain) and np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash(self.key())


@dataclass(frozen=True)
class SimulationTrace:
    """
    Per-layer spike trains and membrane potentials of one run

    potentials[l] has shape (n_l, T + 1); column 0 is u(0).
    """
    input_train: np.ndarray
    spikes: Tuple[SpikeTrain, ...]
    potentials: Tuple[np.ndarray, ...]

    @property
    def output_train(self) -> SpikeTrain:
        return self.spikes[-1]

    def layer_pattern(self, layer: int) -> SpikeTrain:
        """Spike train of a 1-based layer index"""
        return self.spikes[layer - 1]


def encode_direct(x, T: int, arithmetic: Optional[Arithmetic] = None) -> np.ndarray:
    """
    Direct encoding: repeat x at every time step

    Args:
        x: input vector
        T: latency
        arithmetic: numeric mode (plain float array if omitted)

    Returns:
        Matrix n_in x T whose columns all equal x
    """
    if T < 1:
        raise ValidationError(f"Latency T must be at least 1, got {T}")
    x = arithmetic.array(x) if arithmetic else np.asarray(x, dtype=np.float64)
    x = x.reshape(-1)
    return np.repeat(x[:, None], T, axis=1)


def _run_layer(layer: LayerParams, drive: np.ndarray, arithmetic: Arithmetic):
    """LIF recurrence for one layer; drive is the presynaptic time series (n_in x T)"""
    T = drive.shape[1]
    spikes = np.zeros((layer.width, T), dtype=np.int8)
    potentials = np.empty((layer.width, T + 1), dtype=arithmetic.dtype)
    u = np.array(layer.u0, dtype=arithmetic.dtype)
    potentials[:, 0] = u
    for t in range(T):
        current = layer.W.dot(drive[:, t]) + layer.b
        membrane = layer.beta * u + current
        s = arithmetic.heaviside(membrane - layer.theta)
        u = membrane - layer.theta * arithmetic.cast_bits(s)
        spikes[:, t] = s
        potentials[:, t + 1] = u
    return spikes, potentials


def simulate_train(net: Network, s0) -> SimulationTrace:
    """
    Simulate the network on an explicit input time series

    Args:
        net: network
        s0: input activations, n_in x T (binary spikes or encoded reals)

    Returns:
        SimulationTrace with one entry per layer
    """
    arithmetic = net.arithmetic
    drive = arithmetic.array(s0)
    if drive.shape != (net.n_in, net.T):
        raise ValidationError(f"Input train has shape {drive.shape}, expected ({net.n_in}, {net.T})")

    spikes, potentials = [], []
    for layer in net.layers:
        layer_spikes, layer_potentials = _run_layer(layer, drive, arithmetic)
        spikes.append(SpikeTrain(layer_spikes))
        layer_potentials.flags.writeable = False
        potentials.append(layer_potentials)
        drive = arithmetic.cast_bits(layer_spikes)
    return SimulationTrace(input_train=np.asarray(s0), spikes=tuple(spikes), potentials=tuple(potentials))


def simulate(net: Network, x) -> SimulationTrace:
    """
    Simulate the network on a static input under direct encoding

    Args:
        net: network
        x: input vector of length n_in

    Returns:
        SimulationTrace
    """
    x = np.asarray(x, dtype=object).reshape(-1)
    if x.shape[0] != net.n_in:
        raise ValidationError(f"Input has dimension {x.shape[0]}, network expects {net.n_in}")
    return simulate_train(net, encode_direct(x, net.T, net.arithmetic))


def decode(spec: DecoderSpec, train: SpikeTrain, arithmetic: Arithmetic) -> np.ndarray:
    """
    Map the final-layer spike train to the output vector

    Args:
        spec: decoder description
        train: final-layer spike train (n_L x T)
        arithmetic: numeric mode of the result

    Returns:
        Output vector
    """
    bits = train.bits
    T = train.T

    if isinstance(spec, MembranePotentialDecoder):
        if spec.a.shape[0] != T:
            raise ValidationError(f"Decoder expects T={spec.a.shape[0]}, train has {T} steps")
        weighted = arithmetic.cast_bits(bits).dot(spec.a)
        return spec.V.dot(weighted) + spec.c * arithmetic.total(spec.a)

    if isinstance(spec, RateDecoder):
        counts = bits.sum(axis=1)
        return arithmetic.array([arithmetic.scalar(int(count)) / T for count in counts])

    if isinstance(spec, CountDecoder):
        return arithmetic.array([int(count) for count in bits.sum(axis=1)])

    if isinstance(spec, FirstSpikeTimeDecoder):
        silent = arithmetic.scalar(T + 1 if spec.f0 is None else spec.f0)
        transform = SPIKE_TIME_TRANSFORMS[spec.transform]
        times = []
        for row in bits:
            fired = np.flatnonzero(row)
            first = arithmetic.scalar(int(fired[0]) + 1) if fired.size else silent
            times.append(transform(first))
        return arithmetic.array(times)

    raise ValidationError(f"Unsupported decoder: {spec!r}")


def realize(net: Network, x) -> np.ndarray:
    """
    Network output R(net)(x)

    Args:
        net: network
        x: input vector

    Returns:
        Decoded output vector
    """
    trace = simulate(net, x)
    return decode(net.decoder, trace.output_train, net.arithmetic)


def replay_trace(net: Network, trace: SimulationTrace) -> Optional[Tuple[int, int]]:
    """
    Re-derive the LIF recurrence from a stored trace

    Args:
        net: network that produced the trace
        trace: simulation trace

    Returns:
        None if the trace is consistent, else the first violating (layer, t), both 1-based
    """
    arithmetic = net.arithmetic
    drive = arithmetic.array(trace.input_train)
    for index, layer in enumerate(net.layers, start=1):
        bits = trace.spikes[index - 1].bits
        potentials = trace.potentials[index - 1]
        if not all(arithmetic.eq(a, b) for a, b in zip(potentials[:, 0], layer.u0)):
            return index, 0
        for t in range(net.T):
            membrane = layer.beta * potentials[:, t] + layer.W.dot(drive[:, t]) + layer.b
            expected_spikes = arithmetic.heaviside(membrane - layer.theta)
            expected_u = membrane - layer.theta * arithmetic.cast_bits(expected_spikes)
            if not np.array_equal(expected_spikes, bits[:, t]):
                return index, t + 1
            if not all(arithmetic.eq(a, b) for a, b in zip(expected_u, potentials[:, t + 1])):
                return index, t + 1
        drive = arithmetic.cast_bits(bits)
    return None


def simulate_batch(net: Network, X) -> List[np.ndarray]:
    """
    Vectorized float simulation of many static inputs

    Parameters are converted to float64; the Heaviside test uses the
    network's tolerance. Used by the sampling estimators.

    Args:
        net: network (either mode)
        X: inputs, shape (N, n_in)

    Returns:
        List over layers of int8 arrays with shape (N, n_l, T)
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != net.n_in:
        raise ValidationError(f"Batch must have shape (N, {net.n_in}), got {X.shape}")
    tolerance = net.arithmetic.tolerance
    N = X.shape[0]
    drive = np.repeat(X[:, :, None], net.T, axis=2)
    layer_spikes = []
    for layer in net.layers:
        W = np.asarray(layer.W, dtype=np.float64)
        b = np.asarray(layer.b, dtype=np.float64)
        beta = float(layer.beta)
        theta = float(layer.theta)
        u = np.tile(np.asarray(layer.u0, dtype=np.float64), (N, 1))
        spikes = np.zeros((N, layer.width, net.T), dtype=np.int8)
        for t in range(net.T):
            membrane = beta * u + drive[:, :, t] @ W.T + b
            s = (membrane - theta >= -tolerance).astype(np.int8)
            u = membrane - theta * s
            spikes[:, :, t] = s
        layer_spikes.append(spikes)
        drive = spikes.astype(np.float64)
    logger.debug(f"Batch-simulated {N} inputs through {net.L} layers")
    return layer_spikes


def decode_batch(net: Network, final_spikes: np.ndarray) -> np.ndarray:
    """
    Float decoding of a batch of final-layer trains

    Args:
        net: network
        final_spikes: int8 array (N, n_L, T)

    Returns:
        Outputs, shape (N, n_out)
    """
    spec = net.decoder
    spikes = final_spikes.astype(np.float64)
    T = net.T
    if isinstance(spec, MembranePotentialDecoder):
        a = np.asarray(spec.a, dtype=np.float64)
        V = np.asarray(spec.V, dtype=np.float64)
        c = np.asarray(spec.c, dtype=np.float64)
        return (spikes @ a) @ V.T + c * a.sum()
    if isinstance(spec, RateDecoder):
        return spikes.mean(axis=2)
    if isinstance(spec, CountDecoder):
        return spikes.sum(axis=2)
    if isinstance(spec, FirstSpikeTimeDecoder):
        silent = float(T + 1 if spec.f0 is None else spec.f0)
        fired = final_spikes.any(axis=2)
        first = np.where(fired, final_spikes.argmax(axis=2) + 1.0, silent)
        transform = SPIKE_TIME_TRANSFORMS[spec.transform]
        return np.vectorize(lambda value: float(transform(value)))(first)
    raise ValidationError(f"Unsupported decoder: {spec!r}")
