"""
Network file format
JSON documents validated through pydantic models
"""
import json
from pathlib import Path
from typing import List, Literal, Optional, Union

import numpy as np
import pydantic
from loguru import logger
from pydantic import BaseModel, Field

from src.errors import NetworkFileError
from .arithmetic import Arithmetic, arithmetic_for
from .network import (
    CountDecoder,
    DecoderSpec,
    EncoderSpec,
    FirstSpikeTimeDecoder,
    LayerParams,
    MembranePotentialDecoder,
    Network,
    RateDecoder,
    membrane_decoder,
)

FORMAT_VERSION = 1

Number = Union[str, float, int]


class LayerDocument(BaseModel):
    """One layer as stored on disk; W is row-major"""
    W: List[List[Number]]
    b: List[Number]
    u0: List[Number]
    beta: Number
    theta: Number


class EncoderDocument(BaseModel):
    variant: Literal["direct"] = "direct"


class DecoderDocument(BaseModel):
    variant: Literal["membrane_potential", "rate", "count", "first_spike_time"]
    a: Optional[List[Number]] = None
    V: Optional[List[List[Number]]] = None
    c: Optional[List[Number]] = None
    f0: Optional[Number] = None
    transform: str = "reciprocal"


class NetworkDocument(BaseModel):
    """Top-level network file"""
    version: int
    mode: Literal["exact", "float"]
    T: int = Field(ge=1)
    encoder: EncoderDocument
    decoder: DecoderDocument
    layers: List[LayerDocument] = Field(min_length=1)
    metadata: dict = Field(default_factory=dict)


def _decoder_document(decoder: DecoderSpec, arithmetic: Arithmetic) -> DecoderDocument:
    if isinstance(decoder, MembranePotentialDecoder):
        return DecoderDocument(
            variant=decoder.variant,
            a=arithmetic.serialize_array(decoder.a),
            V=arithmetic.serialize_array(decoder.V),
            c=arithmetic.serialize_array(decoder.c),
        )
    if isinstance(decoder, FirstSpikeTimeDecoder):
        f0 = None if decoder.f0 is None else arithmetic.serialize(decoder.f0)
        return DecoderDocument(variant=decoder.variant, f0=f0, transform=decoder.transform)
    return DecoderDocument(variant=decoder.variant)


def network_to_document(net: Network, metadata: Optional[dict] = None) -> NetworkDocument:
    """Convert a network into its file model"""
    arithmetic = net.arithmetic
    layers = [
        LayerDocument(
            W=arithmetic.serialize_array(layer.W),
            b=arithmetic.serialize_array(layer.b),
            u0=arithmetic.serialize_array(layer.u0),
            beta=arithmetic.serialize(layer.beta),
            theta=arithmetic.serialize(layer.theta),
        )
        for layer in net.layers
    ]
    return NetworkDocument(
        version=FORMAT_VERSION,
        mode=arithmetic.mode.value,
        T=net.T,
        encoder=EncoderDocument(variant=net.encoder.variant),
        decoder=_decoder_document(net.decoder, arithmetic),
        layers=layers,
        metadata=metadata or {},
    )


def _decoder_from_document(doc: DecoderDocument, T: int, arithmetic: Arithmetic) -> DecoderSpec:
    if doc.variant == "membrane_potential":
        if doc.V is None:
            raise NetworkFileError("Membrane-potential decoder is missing its matrix V")
        return membrane_decoder(doc.V, c=doc.c, a=doc.a, T=T, arithmetic=arithmetic)
    if doc.variant == "rate":
        return RateDecoder()
    if doc.variant == "count":
        return CountDecoder()
    f0 = None if doc.f0 is None else arithmetic.scalar(doc.f0)
    return FirstSpikeTimeDecoder(f0=f0, transform=doc.transform)


def network_from_document(doc: NetworkDocument, tolerance: Optional[float] = None) -> Network:
    """
    Rebuild a network from its file model

    Args:
        doc: parsed document
        tolerance: float-mode tolerance override

    Returns:
        Network (invariant violations raise ValidationError)
    """
    if doc.version != FORMAT_VERSION:
        raise NetworkFileError(f"Unsupported network file version {doc.version} (expected {FORMAT_VERSION})")
    arithmetic = arithmetic_for(doc.mode) if tolerance is None else arithmetic_for(doc.mode, tolerance)
    layers = [
        LayerParams.create(
            np.array(layer.W, dtype=object),
            layer.b,
            layer.u0,
            layer.beta,
            layer.theta,
            arithmetic,
        )
        for layer in doc.layers
    ]
    decoder = _decoder_from_document(doc.decoder, doc.T, arithmetic)
    return Network(layers=tuple(layers), T=doc.T, encoder=EncoderSpec(doc.encoder.variant),
                   decoder=decoder, arithmetic=arithmetic)


def save_network(net: Network, path: Union[str, Path], metadata: Optional[dict] = None) -> Path:
    """
    Write a network as JSON

    Args:
        net: network
        path: destination file
        metadata: extra run information embedded in the file

    Returns:
        Path written
    """
    path = Path(path)
    doc = network_to_document(net, metadata)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(doc.model_dump(), indent=2) + "\n", encoding="utf-8")
    except OSError as e:
        logger.error(f"Could not write network file {path}: {e}")
        raise NetworkFileError(f"Could not write network file {path}: {e}") from e
    logger.info(f"Saved network to {path} ({net.summary()})")
    return path


def load_network(path: Union[str, Path], tolerance: Optional[float] = None) -> Network:
    """
    Read a network file

    Args:
        path: JSON file written by save_network
        tolerance: float-mode tolerance override

    Returns:
        Network
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        logger.error(f"Could not read network file {path}: {e}")
        raise NetworkFileError(f"Could not read network file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise NetworkFileError(f"Network file {path} is not valid JSON: {e}") from e

    try:
        doc = NetworkDocument.model_validate(raw)
    except pydantic.ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise NetworkFileError(f"Malformed network file {path}: {location}: {first['msg']}") from e

    net = network_from_document(doc, tolerance)
    logger.info(f"Loaded network from {path} ({net.summary()})")
    return net
