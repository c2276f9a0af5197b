"""
ElementSet helpers over frozen bitarrays.
"""
from typing import Iterable, Iterator, List

from bitarray import frozenbitarray as fbarray
from bitarray.util import zeros as bazeros


def from_indices(indices: Iterable[int], length: int) -> fbarray:
    """Return the bitset of the given indices."""
    bar = bazeros(length)
    for i in indices:
        bar[i] = True
    return fbarray(bar)


def from_mask(mask) -> fbarray:
    """Convert a boolean sequence (list or numpy vector) to a bitset."""
    return fbarray([bool(v) for v in mask])


def full(length: int) -> fbarray:
    return ~fbarray(bazeros(length))


def empty(length: int) -> fbarray:
    return fbarray(bazeros(length))


def members(bar: fbarray) -> Iterator[int]:
    """Iterate over the set positions."""
    return iter(bar.search(1))


def member_list(bar: fbarray) -> List[int]:
    return list(bar.search(1))


def is_subset(a: fbarray, b: fbarray) -> bool:
    """Test whether `a` is a subset of `b`."""
    return (a & b) == a
