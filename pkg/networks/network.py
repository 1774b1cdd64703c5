"""
Comparator network data model.

Channels are 1-based everywhere in the public API: channel 1 is the topmost
line of a Knuth diagram and receives the minimum of every comparator that
touches it from above. A binary input of width ``n`` is stored as a machine
word where channel ``i`` maps to bit ``i - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import chain

from core.conf import sortnet_setting
from core.exceptions import LayerConflictError, NetworkError


@dataclass(frozen=True, order=True)
class Comparator:
    """
    A two-channel gate: ``lo`` receives the minimum, ``hi`` the maximum.

    A comparator with ``lo > hi`` is *twisted* (min end drawn below the max
    end); it only appears transiently after a channel permutation.
    """

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo == self.hi:
            raise NetworkError(f"comparator connects channel {self.lo} to itself")
        if self.lo < 1 or self.hi < 1:
            raise NetworkError(f"channel indices are 1-based, got ({self.lo}, {self.hi})")

    @property
    def is_standard(self):
        return self.lo < self.hi

    @property
    def top(self):
        return min(self.lo, self.hi)

    @property
    def bottom(self):
        return max(self.lo, self.hi)

    @property
    def channels(self):
        return (self.lo, self.hi)

    def __str__(self):
        return f"({self.lo},{self.hi})"


@dataclass(frozen=True)
class Layer:
    """
    Comparators on pairwise-disjoint channels, executed in parallel.

    Comparators are kept sorted by their upper channel so that two layers with
    the same comparators compare equal regardless of construction order.
    Layers need not be maximal.
    """

    comparators: tuple = ()

    def __post_init__(self):
        comparators = tuple(
            sorted(
                (c if isinstance(c, Comparator) else Comparator(*c) for c in self.comparators),
                key=lambda c: (c.top, c.bottom),
            )
        )
        seen = set()
        for comparator in comparators:
            for channel in comparator.channels:
                if channel in seen:
                    raise LayerConflictError(
                        f"channel {channel} is used twice in layer {_format(comparators)}"
                    )
                seen.add(channel)
        object.__setattr__(self, "comparators", comparators)

    def __iter__(self):
        return iter(self.comparators)

    def __len__(self):
        return len(self.comparators)

    @property
    def used_channels(self):
        return frozenset(chain.from_iterable(c.channels for c in self.comparators))

    @property
    def is_standard(self):
        return all(c.is_standard for c in self.comparators)

    def pairs(self):
        return [list(c.channels) for c in self.comparators]

    def __str__(self):
        return _format(self.comparators)


@dataclass(frozen=True)
class ComparatorNetwork:
    """``channels`` lines and an ordered tuple of layers."""

    channels: int
    layers: tuple = field(default=())

    def __post_init__(self):
        limit = sortnet_setting("MAX_CHANNELS")
        if not 0 <= self.channels <= limit:
            raise NetworkError(
                f"networks have between 0 and {limit} channels, got {self.channels}"
            )
        layers = tuple(layer if isinstance(layer, Layer) else Layer(tuple(layer)) for layer in self.layers)
        for depth, layer in enumerate(layers, start=1):
            for comparator in layer:
                if comparator.bottom > self.channels:
                    raise NetworkError(
                        f"comparator {comparator} in layer {depth} exceeds {self.channels} channels"
                    )
        object.__setattr__(self, "layers", layers)

    @classmethod
    def build(cls, channels, layers):
        """Build a network from nested ``[[(lo, hi), ...], ...]`` lists."""
        return cls(channels, tuple(Layer(tuple(Comparator(lo, hi) for lo, hi in layer)) for layer in layers))

    @classmethod
    def empty(cls, channels):
        return cls(channels, ())

    @property
    def depth(self):
        return len(self.layers)

    @property
    def size(self):
        return sum(len(layer) for layer in self.layers)

    @property
    def is_standard(self):
        return all(layer.is_standard for layer in self.layers)

    def comparators(self):
        """All comparators in layer order, then position order."""
        return [comparator for layer in self.layers for comparator in layer]

    def head(self, depth):
        """The first ``depth`` layers as a network of its own."""
        return ComparatorNetwork(self.channels, self.layers[:depth])

    def extended(self, layers):
        return ComparatorNetwork(self.channels, self.layers + tuple(layers))

    def require_standard(self):
        for depth, layer in enumerate(self.layers, start=1):
            for comparator in layer:
                if not comparator.is_standard:
                    raise NetworkError(
                        f"twisted comparator {comparator} in layer {depth}; untangle the network first"
                    )
        return self

    def __str__(self):
        return " / ".join(str(layer) for layer in self.layers) or "(empty)"


@dataclass(frozen=True)
class BitVector:
    """One binary word of ``width`` channels; channel ``i`` is bit ``i - 1``."""

    width: int
    bits: int

    def __post_init__(self):
        if self.width < 0 or self.bits < 0 or self.bits >> self.width:
            raise NetworkError(f"value {self.bits} does not fit into {self.width} channels")

    @classmethod
    def from_string(cls, text):
        """Parse ``"0101"``; the first character is channel 1."""
        text = text.strip()
        if any(ch not in "01" for ch in text):
            raise NetworkError(f"not a binary vector: {text!r}")
        bits = sum(1 << i for i, ch in enumerate(text) if ch == "1")
        return cls(len(text), bits)

    @classmethod
    def from_channels(cls, values):
        values = list(values)
        return cls(len(values), sum(1 << i for i, v in enumerate(values) if v))

    def channel(self, index):
        return (self.bits >> (index - 1)) & 1

    def channels(self):
        return [self.channel(i) for i in range(1, self.width + 1)]

    def ones(self):
        return bin(self.bits).count("1")

    def sorted_copy(self):
        """The sorted vector with the same number of ones: 0^(n-k) 1^k."""
        ones = self.ones()
        full = (1 << self.width) - 1
        return BitVector(self.width, full ^ ((1 << (self.width - ones)) - 1))

    def __str__(self):
        return "".join(str(v) for v in self.channels())


@dataclass(frozen=True)
class Window:
    """
    For ``x = 0^a x' 1^b`` with maximal ``a`` and ``b``: the unsorted middle.

    The all-zero vector has ``a = n, b = 0`` and the all-one vector
    ``a = 0, b = n``; both have size 0.
    """

    a: int
    b: int
    size: int

    def channels(self, width):
        """The 1-based channels inside the window."""
        return range(self.a + 1, width - self.b + 1) if self.size else range(0)


def is_sorted(x):
    """True iff ``x`` is of the form ``0^a 1^b`` read from channel 1 down."""
    mask = (1 << x.width) - 1
    return ((x.bits << 1) & mask) & ~x.bits == 0


def window(x):
    n, bits = x.width, x.bits
    full = (1 << n) - 1
    if bits == 0:
        return Window(n, 0, 0)
    if bits == full:
        return Window(0, n, 0)
    a = (bits & -bits).bit_length() - 1
    b = 0
    while b < n and (bits >> (n - 1 - b)) & 1:
        b += 1
    return Window(a, b, max(0, n - a - b))


def _format(comparators):
    return "{" + ",".join(str(c) for c in comparators) + "}"
