"""
Two-layer prefixes modulo symmetry.

The first layer is fixed to the BZ-style layer. Two second layers are
equivalent when a channel permutation that maps the first layer onto itself
(comparator for comparator, min end to min end) followed by untangling turns
one into the other. Such a permutation keeps the first layer standard, so
untangling only re-orients the permuted second-layer comparators.
"""

from __future__ import annotations

import logging
from itertools import permutations, product

from core.conf import sortnet_setting
from core.exceptions import NetworkError
from networks.network import Comparator, Layer

from .generators import first_layer_bz
from .prefix import Prefix

logger = logging.getLogger(__name__)


def matchings(channels):
    """Every set of disjoint channel pairs on ``1..channels``, the empty one included."""

    def extend(free):
        if not free:
            yield ()
            return
        first, rest = free[0], free[1:]
        yield from extend(rest)
        for index, partner in enumerate(rest):
            for tail in extend(rest[:index] + rest[index + 1:]):
                yield ((first, partner),) + tail

    yield from extend(tuple(range(1, channels + 1)))


def stabilizer(layer, channels):
    """
    Channel permutations (as image tuples) mapping ``layer`` onto itself with
    orientation kept: comparators are permuted among each other, channels
    the layer leaves free are permuted among each other.
    """
    pairs = [c.channels for c in layer]
    free = [ch for ch in range(1, channels + 1) if ch not in layer.used_channels]
    for pair_order, free_order in product(permutations(pairs), permutations(free)):
        image = [0] * (channels + 1)
        for (lo, hi), (new_lo, new_hi) in zip(pairs, pair_order):
            image[lo], image[hi] = new_lo, new_hi
        for channel, target in zip(free, free_order):
            image[channel] = target
        yield tuple(image[1:])


def act(perm, pairs):
    """Image of a second layer under ``perm``, re-oriented and sorted."""
    return tuple(
        sorted(
            (min(perm[i - 1], perm[j - 1]), max(perm[i - 1], perm[j - 1]))
            for i, j in pairs
        )
    )


def enumerate_two_layer_prefixes(channels, limit=None, drop_redundant=True):
    """
    One representative per equivalence class of second layers over the BZ
    first layer; the representative is the smallest image in its orbit.

    With ``drop_redundant`` second layers repeating a first-layer comparator
    (a no-op) are skipped.
    """
    limit = sortnet_setting("ENUMERATION_LIMIT") if limit is None else limit
    if channels > limit:
        raise NetworkError(f"two-layer enumeration is limited to {limit} channels, got {channels}")
    first = first_layer_bz(channels).network
    first_pairs = {c.channels for c in first.layers[0]}
    group = list(stabilizer(first.layers[0], channels))
    seen = set()
    representatives = []
    for candidate in matchings(channels):
        if drop_redundant and first_pairs.intersection(candidate):
            continue
        if candidate in seen:
            continue
        orbit = {act(perm, candidate) for perm in group}
        seen.update(orbit)
        representatives.append(min(orbit))
    representatives.sort()
    logger.info(
        "%d channels: %d second-layer classes under a stabiliser of order %d",
        channels, len(representatives), len(group),
    )
    return [
        Prefix(first.extended([Layer(tuple(Comparator(i, j) for i, j in pairs))]), "enumerated")
        for pairs in representatives
    ]
