"""
Closed-form region bounds
"""
from functools import lru_cache
from math import comb

from src.errors import ValidationError


def count_bound(n1: int, n_in: int, T: int) -> int:
    """
    Maximum number of activation (and constant) regions of a first layer

    sum_{i=0}^{n_in} ((T^2 + T)/2)^i C(n1, i) if n1 >= n_in, else ((T^2 + T + 2)/2)^n1
    """
    if min(n1, n_in, T) < 1:
        raise ValidationError(f"n1, n_in and T must be positive, got ({n1}, {n_in}, {T})")
    per_neuron = (T * T + T) // 2
    if n1 >= n_in:
        return r_regions_closed(n1, n_in, per_neuron)
    return (per_neuron + 1) ** n1


def r_regions_closed(n: int, d: int, k: int) -> int:
    """Regions cut by n families of k parallel hyperplanes in general position in R^d"""
    _check(n, d, k)
    return sum(k ** i * comb(n, i) for i in range(d + 1))


@lru_cache(maxsize=None)
def _recursive(n: int, d: int, k: int) -> int:
    if n == 0 or d == 0:
        return 1
    return _recursive(n - 1, d, k) + k * _recursive(n - 1, d - 1, k)


def r_regions_recursive(n: int, d: int, k: int) -> int:
    """Same count through r_{n,d} = r_{n-1,d} + k r_{n-1,d-1}"""
    _check(n, d, k)
    return _recursive(n, d, k)


def _check(n: int, d: int, k: int):
    if n < 0 or d < 0 or k < 1:
        raise ValidationError(f"Need n, d >= 0 and k >= 1, got ({n}, {d}, {k})")
