"""Channel permutation, untangling and layering of comparator networks."""

from __future__ import annotations

from itertools import permutations

from core.exceptions import NetworkError

from .network import Comparator, ComparatorNetwork, Layer


def check_permutation(perm, channels):
    """``perm[i - 1]`` is the image of channel ``i``; it must be a bijection on 1..n."""
    perm = tuple(int(p) for p in perm)
    if len(perm) != channels or sorted(perm) != list(range(1, channels + 1)):
        raise NetworkError(f"{list(perm)} is not a permutation of 1..{channels}")
    return perm


def permute_channels(net, perm):
    """
    Relabel every channel ``i`` as ``perm(i)``, keeping min/max orientation.

    The result may contain twisted comparators.
    """
    perm = check_permutation(perm, net.channels)
    return ComparatorNetwork(
        net.channels,
        tuple(
            Layer(tuple(Comparator(perm[c.lo - 1], perm[c.hi - 1]) for c in layer))
            for layer in net.layers
        ),
    )


def untangle(net):
    """
    Turn a possibly twisted network into a standard one of equal depth and size.

    Comparators are scanned in layer order, then position order; a twisted
    comparator on channels ``(a, b)`` is flipped by exchanging the identities
    of ``a`` and ``b`` in it and in every later layer.
    """
    layers = [list(layer.comparators) for layer in net.layers]
    for depth, layer in enumerate(layers):
        for position, comparator in enumerate(layer):
            if comparator.is_standard:
                continue
            a, b = comparator.lo, comparator.hi
            layer[position] = Comparator(b, a)
            for later in layers[depth + 1:]:
                for index, other in enumerate(later):
                    later[index] = Comparator(_swap(other.lo, a, b), _swap(other.hi, a, b))
    return ComparatorNetwork(net.channels, tuple(Layer(tuple(layer)) for layer in layers))


def _swap(channel, a, b):
    if channel == a:
        return b
    if channel == b:
        return a
    return channel


def from_comparators(channels, comparators):
    """
    Layer a flat comparator sequence greedily: each comparator goes into the
    first layer after the last layer that touches one of its channels.
    """
    last_layer = [0] * (channels + 1)
    layers = []
    for pair in comparators:
        comparator = pair if isinstance(pair, Comparator) else Comparator(*pair)
        if comparator.bottom > channels:
            raise NetworkError(f"comparator {comparator} exceeds {channels} channels")
        depth = max(last_layer[comparator.lo], last_layer[comparator.hi]) + 1
        if depth > len(layers):
            layers.append([])
        layers[depth - 1].append(comparator)
        last_layer[comparator.lo] = last_layer[comparator.hi] = depth
    return ComparatorNetwork(channels, tuple(Layer(tuple(layer)) for layer in layers))


def find_untangling_permutation(source, target, limit=8):
    """
    Search all channel permutations for ``pi`` with
    ``untangle(permute_channels(source, pi)) == target``; returns ``None`` if
    there is none. Exhaustive, so only for small channel counts.
    """
    if source.channels != target.channels:
        return None
    if source.channels > limit:
        raise NetworkError(f"permutation search is limited to {limit} channels")
    for perm in permutations(range(1, source.channels + 1)):
        if untangle(permute_channels(source, perm)) == target:
            return perm
    return None
