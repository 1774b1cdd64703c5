"""Hand-made prefixes: Pb-style and BZ-style first layers and Green filters."""

from core.exceptions import NetworkError
from networks.network import Comparator, ComparatorNetwork, Layer

from .prefix import Prefix


def first_layer_pb(channels):
    """Adjacent pairs ``(2i-1, 2i)``; the last channel stays free when odd."""
    layer = Layer(tuple(Comparator(i, i + 1) for i in range(1, channels, 2)))
    return Prefix(ComparatorNetwork(channels, (layer,)), "pb")


def first_layer_bz(channels):
    """Nested pairs ``(i, n+1-i)`` for ``1 <= i <= n // 2``."""
    layer = Layer(tuple(Comparator(i, channels + 1 - i) for i in range(1, channels // 2 + 1)))
    return Prefix(ComparatorNetwork(channels, (layer,)), "bz")


def green_layers(size, layers, offset=0):
    """
    Layers of a Green filter on ``size = 2^m`` channels starting after
    ``offset``: layer ``k`` compares ``i`` with ``i + 2^(k-1)`` whenever bit
    ``k-1`` of ``i-1`` is clear.
    """
    result = []
    for k in range(1, layers + 1):
        stride = 1 << (k - 1)
        result.append(
            [
                (offset + i, offset + i + stride)
                for i in range(1, size + 1)
                if not ((i - 1) >> (k - 1)) & 1
            ]
        )
    return result


def green_filter(size, layers=None, copies=1, channels=None):
    """
    Green filter prefix on ``size`` channels (a power of two) with ``layers``
    layers (default ``log2(size)``). ``copies`` equal filters are placed side
    by side from channel 1 down, inside a network of ``channels`` lines.
    """
    if size < 2 or size & (size - 1):
        raise NetworkError(f"Green filters need a power-of-two size, got {size}")
    full = size.bit_length() - 1
    layers = full if layers is None else layers
    if not 1 <= layers <= full:
        raise NetworkError(f"a Green filter on {size} channels has 1..{full} layers, got {layers}")
    if copies < 1:
        raise NetworkError("at least one filter copy is required")
    channels = size * copies if channels is None else channels
    if channels < size * copies:
        raise NetworkError(f"{copies} filters of size {size} do not fit into {channels} channels")
    merged = [[] for _ in range(layers)]
    for copy in range(copies):
        for depth, layer in enumerate(green_layers(size, layers, offset=copy * size)):
            merged[depth].extend(layer)
    return Prefix(ComparatorNetwork.build(channels, merged), "green")
