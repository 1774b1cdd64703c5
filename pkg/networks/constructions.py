"""
Batcher's odd-even merge sort.

Sizes that are not a power of two are cut out of the next power of two:
padding channels at the top behave like values smaller than everything and
those at the bottom like values larger than everything, so no comparator
touching them ever moves a real value and they can be dropped.
"""

from .transform import from_comparators


def _sort(indices):
    if len(indices) < 2:
        return
    if len(indices) == 2:
        yield indices[0], indices[1]
        return
    mid = len(indices) // 2
    yield from _sort(indices[:mid])
    yield from _sort(indices[mid:])
    yield from _merge(indices)


def _merge(indices):
    if len(indices) < 2:
        return
    if len(indices) == 2:
        yield indices[0], indices[1]
        return
    yield from _merge(indices[0::2])
    yield from _merge(indices[1::2])
    for a, b in zip(indices[1::2], indices[2::2]):
        yield a, b


def batcher_network(channels):
    """Odd-even merge sorting network on ``channels`` lines, greedily layered."""
    if channels < 2:
        return from_comparators(max(channels, 0), [])
    size = 1 << (channels - 1).bit_length()
    fill = size - channels
    indices = [None] * (fill // 2) + list(range(1, channels + 1)) + [None] * ((fill + 1) // 2)
    comparators = [(a, b) for a, b in _sort(indices) if a is not None and b is not None]
    return from_comparators(channels, comparators)
