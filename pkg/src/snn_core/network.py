"""
Parameter containers for discrete-time LIF spiking networks
Layers, coding schemes and the network bundle itself
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Optional, Tuple, Union

import numpy as np
from loguru import logger

from src.errors import ValidationError
from .arithmetic import EXACT, Arithmetic, Scalar


def _frozen(values: np.ndarray) -> np.ndarray:
    values.flags.writeable = False
    return values


@dataclass(frozen=True)
class LayerParams:
    """
    One LIF layer: weights, bias, initial potential, leak and threshold

    Attributes:
        W: weight matrix, shape (n_out, n_in)
        b: bias vector, shape (n_out,)
        u0: initial membrane potential, shape (n_out,)
        beta: leak in [0, 1]
        theta: firing threshold > 0
    """
    W: np.ndarray
    b: np.ndarray
    u0: np.ndarray
    beta: Scalar
    theta: Scalar

    @classmethod
    def create(
        cls,
        W,
        b=None,
        u0=None,
        beta=1,
        theta=1,
        arithmetic: Arithmetic = EXACT
    ) -> "LayerParams":
        """
        Build a layer, coercing every entry into the given arithmetic

        Args:
            W: weight matrix (nested lists or array)
            b: bias vector, zeros if omitted
            u0: initial membrane potential, zeros if omitted
            beta: leak term
            theta: threshold
            arithmetic: numeric mode of the layer

        Returns:
            Validated LayerParams
        """
        W = arithmetic.array(W)
        if W.ndim != 2:
            raise ValidationError(f"Weight matrix must be 2-dimensional, got shape {W.shape}")
        n = W.shape[0]
        b = arithmetic.zeros(n) if b is None else arithmetic.array(b)
        u0 = arithmetic.zeros(n) if u0 is None else arithmetic.array(u0)
        return cls(
            W=W,
            b=b,
            u0=u0,
            beta=arithmetic.scalar(beta),
            theta=arithmetic.scalar(theta),
        )

    def __post_init__(self):
        if self.W.ndim != 2:
            raise ValidationError(f"Weight matrix must be 2-dimensional, got shape {self.W.shape}")
        n = self.W.shape[0]
        if self.b.shape != (n,):
            raise ValidationError(f"Bias has shape {self.b.shape}, expected ({n},)")
        if self.u0.shape != (n,):
            raise ValidationError(f"Initial potential has shape {self.u0.shape}, expected ({n},)")
        if not 0 <= self.beta <= 1:
            raise ValidationError(f"Leak beta must lie in [0, 1], got {self.beta}")
        if not self.theta > 0:
            raise ValidationError(f"Threshold theta must be positive, got {self.theta}")
        for values in (self.W, self.b, self.u0):
            _frozen(values)

    @property
    def width(self) -> int:
        return self.W.shape[0]

    @property
    def fan_in(self) -> int:
        return self.W.shape[1]

    def scaled(self, factor: Scalar) -> "LayerParams":
        """Multiply W, b, u0 and theta by a positive factor (spike trains are unchanged)"""
        if not factor > 0:
            raise ValidationError(f"Scaling factor must be positive, got {factor}")
        return LayerParams(
            W=self.W * factor,
            b=self.b * factor,
            u0=self.u0 * factor,
            beta=self.beta,
            theta=self.theta * factor,
        )


@dataclass(frozen=True)
class EncoderSpec:
    """Input encoder; direct encoding repeats x at every time step"""
    variant: str = "direct"

    def __post_init__(self):
        if self.variant != "direct":
            raise ValidationError(f"Unsupported encoder variant: {self.variant!r}")


@dataclass(frozen=True)
class MembranePotentialDecoder:
    """Affine read-out sum_t a_t (V s(t) + c)"""
    a: np.ndarray
    V: np.ndarray
    c: np.ndarray
    variant: str = field(default="membrane_potential", init=False)

    def __post_init__(self):
        if self.a.ndim != 1:
            raise ValidationError("Decoder weights a must be a vector")
        if self.V.ndim != 2:
            raise ValidationError("Decoder matrix V must be 2-dimensional")
        if self.c.shape != (self.V.shape[0],):
            raise ValidationError(f"Decoder offset c has shape {self.c.shape}, expected ({self.V.shape[0]},)")
        for values in (self.a, self.V, self.c):
            _frozen(values)

    @property
    def n_out(self) -> int:
        return self.V.shape[0]


@dataclass(frozen=True)
class RateDecoder:
    """Average firing rate per output neuron"""
    variant: str = field(default="rate", init=False)


@dataclass(frozen=True)
class CountDecoder:
    """Spike count per output neuron"""
    variant: str = field(default="count", init=False)


SPIKE_TIME_TRANSFORMS: Dict[str, Callable[[Scalar], Scalar]] = {
    "reciprocal": lambda value: 1 / value,
    "identity": lambda value: value,
    "negate": lambda value: -value,
}


@dataclass(frozen=True)
class FirstSpikeTimeDecoder:
    """
    First firing time per neuron, f0 for silent neurons, then a named transform

    f0 of None means T + 1.
    """
    f0: Optional[Scalar] = None
    transform: str = "reciprocal"
    variant: str = field(default="first_spike_time", init=False)

    def __post_init__(self):
        if self.transform not in SPIKE_TIME_TRANSFORMS:
            raise ValidationError(
                f"Unknown spike-time transform {self.transform!r}; "
                f"expected one of {sorted(SPIKE_TIME_TRANSFORMS)}"
            )
        if self.transform == "reciprocal" and self.f0 is not None and self.f0 == 0:
            raise ValidationError("f0 = 0 has no reciprocal; pick another f0 or transform")


DecoderSpec = Union[MembranePotentialDecoder, RateDecoder, CountDecoder, FirstSpikeTimeDecoder]


def membrane_decoder(
    V,
    c=None,
    a=None,
    T: int = 1,
    arithmetic: Arithmetic = EXACT
) -> MembranePotentialDecoder:
    """
    Membrane-potential decoder with default a_t = 1 and c = 0

    Args:
        V: read-out matrix (n_out x n_L)
        c: offset vector, zeros if omitted
        a: temporal weights, all ones if omitted
        T: latency, used for the default a
        arithmetic: numeric mode

    Returns:
        MembranePotentialDecoder
    """
    V = arithmetic.array(V)
    if V.ndim == 1:
        V = V.reshape(1, -1)
    c = arithmetic.zeros(V.shape[0]) if c is None else arithmetic.array(c)
    a = arithmetic.array([1] * T) if a is None else arithmetic.array(a)
    return MembranePotentialDecoder(a=a, V=V, c=c)


def membrane_rate_weights(beta_out, T: int, arithmetic: Arithmetic = EXACT) -> np.ndarray:
    """
    Temporal weights of a time-averaged leaky read-out layer

    A non-firing output layer u(t) = beta_out u(t-1) + V s(t) + c with
    u(0) = 0, averaged over T steps, equals the membrane decoder with
    a_t = (1/T) sum_{j=0}^{T-t} beta_out^j.

    Args:
        beta_out: leak of the read-out layer
        T: latency
        arithmetic: numeric mode

    Returns:
        Vector a of length T
    """
    beta_out = arithmetic.scalar(beta_out)
    if not 0 <= beta_out <= 1:
        raise ValidationError(f"Read-out leak must lie in [0, 1], got {beta_out}")
    horizon = arithmetic.scalar(T)
    weights = []
    for t in range(1, T + 1):
        weights.append(arithmetic.total(beta_out ** j for j in range(T - t + 1)) / horizon)
    return arithmetic.array(weights)


@dataclass(frozen=True)
class Network:
    """
    Discrete-time LIF spiking network with coding schemes

    Attributes:
        layers: ordered layers, input side first
        T: latency (number of time steps)
        encoder: input encoder
        decoder: output decoder
        arithmetic: numeric mode every parameter is expressed in
    """
    layers: Tuple[LayerParams, ...]
    T: int
    encoder: EncoderSpec
    decoder: DecoderSpec
    arithmetic: Arithmetic = EXACT

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if not self.layers:
            raise ValidationError("A network needs at least one layer")
        if not isinstance(self.T, int) or self.T < 1:
            raise ValidationError(f"Latency T must be a positive integer, got {self.T!r}")
        for index in range(1, len(self.layers)):
            previous, current = self.layers[index - 1], self.layers[index]
            if current.fan_in != previous.width:
                raise ValidationError(
                    f"Layer {index + 1} expects {current.fan_in} inputs "
                    f"but layer {index} has {previous.width} neurons"
                )
        decoder = self.decoder
        if isinstance(decoder, MembranePotentialDecoder):
            if decoder.a.shape != (self.T,):
                raise ValidationError(f"Decoder weights a have length {decoder.a.shape[0]}, expected T={self.T}")
            if decoder.V.shape[1] != self.layers[-1].width:
                raise ValidationError(
                    f"Decoder matrix V has {decoder.V.shape[1]} columns, "
                    f"expected {self.layers[-1].width}"
                )

    @property
    def L(self) -> int:
        return len(self.layers)

    @property
    def n_in(self) -> int:
        return self.layers[0].fan_in

    @property
    def widths(self) -> Tuple[int, ...]:
        return tuple(layer.width for layer in self.layers)

    @property
    def n_out(self) -> int:
        if isinstance(self.decoder, MembranePotentialDecoder):
            return self.decoder.n_out
        return self.layers[-1].width

    def with_layers(self, layers) -> "Network":
        return Network(layers=tuple(layers), T=self.T, encoder=self.encoder,
                       decoder=self.decoder, arithmetic=self.arithmetic)

    def with_decoder(self, decoder: DecoderSpec) -> "Network":
        return Network(layers=self.layers, T=self.T, encoder=self.encoder,
                       decoder=decoder, arithmetic=self.arithmetic)

    def summary(self) -> Dict:
        """Short description used by logs and the CLI"""
        return {
            "mode": self.arithmetic.mode.value,
            "T": self.T,
            "L": self.L,
            "n_in": self.n_in,
            "widths": list(self.widths),
            "decoder": self.decoder.variant,
        }


def build_network(
    layers,
    T: int,
    decoder: Optional[DecoderSpec] = None,
    arithmetic: Arithmetic = EXACT
) -> Network:
    """
    Assemble a network; the default decoder sums the last layer's spikes

    Args:
        layers: LayerParams in order
        T: latency
        decoder: output decoder (membrane potential V = I, a = 1, c = 0 if omitted)
        arithmetic: numeric mode

    Returns:
        Validated Network
    """
    layers = tuple(layers)
    if decoder is None:
        width = layers[-1].width
        decoder = membrane_decoder(np.eye(width, dtype=int).tolist(), T=T, arithmetic=arithmetic)
    network = Network(layers=layers, T=T, encoder=EncoderSpec(), decoder=decoder, arithmetic=arithmetic)
    logger.debug(f"Built network: {network.summary()}")
    return network


def random_network(
    rng: np.random.Generator,
    n_in: int,
    widths,
    T: int,
    arithmetic: Arithmetic = EXACT,
    denominator: int = 64
) -> Network:
    """
    Random network with weights on a rational grid (exactly representable in both modes)

    Args:
        rng: numpy random generator
        n_in: input dimension
        widths: neurons per layer
        T: latency
        arithmetic: numeric mode
        denominator: power-of-two grid denominator, keeps floats exact

    Returns:
        Network with a random membrane decoder
    """
    def grid(low, high, size):
        return [Fraction(int(v), denominator) for v in rng.integers(low * denominator, high * denominator + 1, size=size)]

    layers = []
    fan_in = n_in
    for width in widths:
        W = np.array(grid(-2, 2, width * fan_in), dtype=object).reshape(width, fan_in)
        b = grid(-1, 1, width)
        u0 = grid(-1, 1, width)
        beta = Fraction(int(rng.integers(0, denominator + 1)), denominator)
        theta = Fraction(int(rng.integers(denominator // 4, 2 * denominator + 1)), denominator)
        layers.append(LayerParams.create(W, b, u0, beta, theta, arithmetic))
        fan_in = width
    V = np.array(grid(-2, 2, widths[-1]), dtype=object).reshape(1, -1)
    decoder = membrane_decoder(V, c=grid(-1, 1, 1), T=T, arithmetic=arithmetic)
    return build_network(layers, T, decoder, arithmetic)
