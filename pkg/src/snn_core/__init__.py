"""Discrete-time LIF Network Core"""
from .arithmetic import Arithmetic, NumericMode, EXACT, FLOAT, arithmetic_for
from .network import (
    LayerParams, EncoderSpec, MembranePotentialDecoder, RateDecoder, CountDecoder,
    FirstSpikeTimeDecoder, Network, build_network, membrane_decoder, membrane_rate_weights,
    random_network,
)
from .simulator import (
    SpikeTrain, SimulationTrace, encode_direct, simulate, simulate_train, simulate_batch,
    decode, decode_batch, realize, replay_trace,
)
from .unrolling import HeavisideUnrolling, UnrolledLayer, unroll_to_heaviside
from .network_io import save_network, load_network, network_to_document, FORMAT_VERSION

__all__ = [
    'Arithmetic', 'NumericMode', 'EXACT', 'FLOAT', 'arithmetic_for',
    'LayerParams', 'EncoderSpec', 'MembranePotentialDecoder', 'RateDecoder', 'CountDecoder',
    'FirstSpikeTimeDecoder', 'Network', 'build_network', 'membrane_decoder', 'membrane_rate_weights',
    'random_network',
    'SpikeTrain', 'SimulationTrace', 'encode_direct', 'simulate', 'simulate_train', 'simulate_batch',
    'decode', 'decode_batch', 'realize', 'replay_trace',
    'HeavisideUnrolling', 'UnrolledLayer', 'unroll_to_heaviside',
    'save_network', 'load_network', 'network_to_document', 'FORMAT_VERSION',
]
