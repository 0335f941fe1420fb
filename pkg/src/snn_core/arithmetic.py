"""
Scalar arithmetic for the two numeric modes.
Exact mode works on fractions.Fraction, float mode on float64 with a tolerance.
"""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Union

import numpy as np

from src.errors import ValidationError

Scalar = Union[Fraction, float]
DEFAULT_TOLERANCE = 1e-9


class NumericMode(str, Enum):
    """Numeric mode of a computation"""
    EXACT = "exact"
    FLOAT = "float"


@dataclass(frozen=True)
class Arithmetic:
    """
    Arithmetic context shared by every object of one computation

    A network, a partition or an arrangement built in one mode only ever
    sees scalars of that mode.
    """
    mode: NumericMode = NumericMode.EXACT
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self):
        object.__setattr__(self, "mode", NumericMode(self.mode))
        if self.tolerance <= 0:
            raise ValidationError(f"Tolerance must be positive, got {self.tolerance}")

    @property
    def exact(self) -> bool:
        return self.mode is NumericMode.EXACT

    @property
    def dtype(self):
        return object if self.exact else np.float64

    def scalar(self, value) -> Scalar:
        """
        Coerce a number or a "p/q" string into this mode

        Args:
            value: int, float, Fraction, numpy number or string

        Returns:
            Fraction in exact mode, float in float mode
        """
        if isinstance(value, str):
            value = value.strip()
            if self.exact:
                return Fraction(value)
            return float(Fraction(value)) if "/" in value else float(value)

        if isinstance(value, np.generic):
            value = value.item()

        if self.exact:
            if isinstance(value, Rational):
                return Fraction(value)
            # decimal reading of the float, 0.7 -> 7/10
            return Fraction(repr(float(value)))
        return float(value)

    def array(self, values) -> np.ndarray:
        """Build an array of scalars in this mode (any shape)"""
        raw = np.asarray(values, dtype=object)
        if raw.ndim == 0:
            return np.array(self.scalar(raw.item()), dtype=self.dtype)
        out = np.empty(raw.shape, dtype=self.dtype)
        for index, value in np.ndenumerate(raw):
            out[index] = self.scalar(value)
        return out

    def zeros(self, shape) -> np.ndarray:
        if self.exact:
            out = np.empty(shape, dtype=object)
            out.fill(Fraction(0))
            return out
        return np.zeros(shape, dtype=np.float64)

    def cast_bits(self, bits: np.ndarray) -> np.ndarray:
        """Lift a binary int8 array into this mode for mixed products"""
        if self.exact:
            return np.asarray(bits, dtype=np.int64).astype(object)
        return np.asarray(bits, dtype=np.float64)

    def heaviside(self, z: np.ndarray) -> np.ndarray:
        """
        Heaviside step H(z) = 1 iff z >= 0 (boundary fires)

        Float mode fires from -tolerance upward.
        """
        z = np.asarray(z)
        if self.exact:
            return np.fromiter((1 if v >= 0 else 0 for v in z.ravel()), dtype=np.int8,
                               count=z.size).reshape(z.shape)
        return (z >= -self.tolerance).astype(np.int8)

    def fires(self, z: Scalar) -> bool:
        if self.exact:
            return z >= 0
        return z >= -self.tolerance

    def eq(self, a: Scalar, b: Scalar) -> bool:
        if self.exact:
            return a == b
        return abs(a - b) <= self.tolerance

    def lt(self, a: Scalar, b: Scalar) -> bool:
        """Strictly less, with coincident values treated as equal"""
        return a < b and not self.eq(a, b)

    def total(self, values: Iterable[Scalar]) -> Scalar:
        acc = self.scalar(0)
        for value in values:
            acc = acc + value
        return acc

    def serialize(self, value) -> Union[str, float]:
        """Scalar to its file form: "p/q" in exact mode, double in float mode"""
        value = self.scalar(value)
        return str(value) if self.exact else float(value)

    def serialize_array(self, values: np.ndarray):
        values = np.asarray(values, dtype=object)
        if values.ndim == 0:
            return self.serialize(values.item())
        return [self.serialize_array(row) for row in values]


EXACT = Arithmetic(NumericMode.EXACT)
FLOAT = Arithmetic(NumericMode.FLOAT)


def arithmetic_for(mode: Union[str, NumericMode], tolerance: float = DEFAULT_TOLERANCE) -> Arithmetic:
    """Arithmetic context from a mode name"""
    try:
        parsed = NumericMode(mode)
    except ValueError as e:
        raise ValidationError(f"Unknown numeric mode: {mode!r} (expected 'exact' or 'float')") from e
    return Arithmetic(parsed, tolerance)
