"""
Evaluation of comparator networks.

Exhaustive evaluation is bit-sliced: every channel is a numpy array of
``uint64`` words in which bit ``t`` holds that channel's value for input
number ``t``. On binary values a comparator is ``min = AND``, ``max = OR``,
so one pass over the comparators evaluates all ``2^n`` inputs at once.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.conf import sortnet_setting
from core.exceptions import ExhaustiveLimitError, NetworkError

from .network import BitVector

logger = logging.getLogger(__name__)

ALL_ONES = np.uint64(0xFFFFFFFFFFFFFFFF)
WORD_BITS = 64


@dataclass(frozen=True)
class Verdict:
    """Outcome of exhaustive 0-1 verification."""

    is_sorting: bool
    counterexample: Optional[BitVector] = None
    inputs_checked: int = 0

    def __str__(self):
        return "sorting" if self.is_sorting else f"counterexample {self.counterexample}"


def check_limit(channels, limit=None):
    limit = sortnet_setting("EXHAUSTIVE_LIMIT") if limit is None else limit
    if channels > limit:
        raise ExhaustiveLimitError(
            f"{channels} channels exceed the exhaustive evaluation limit of {limit}"
        )


def apply_network(net, x, standard_only=False):
    """Apply ``net`` to a single binary input and return the output vector."""
    if x.width != net.channels:
        raise NetworkError(f"input has width {x.width}, network has {net.channels} channels")
    if standard_only:
        net.require_standard()
    bits = x.bits
    for layer in net.layers:
        for comparator in layer:
            lo, hi = comparator.lo - 1, comparator.hi - 1
            if (bits >> lo) & 1 and not (bits >> hi) & 1:
                bits ^= (1 << lo) | (1 << hi)
    return BitVector(x.width, bits)


def apply_to_sequence(net, values):
    """Apply ``net`` to arbitrary comparable values (min on the ``lo`` end)."""
    values = list(values)
    if len(values) != net.channels:
        raise NetworkError(f"got {len(values)} values for {net.channels} channels")
    for layer in net.layers:
        for comparator in layer:
            lo, hi = comparator.lo - 1, comparator.hi - 1
            if values[hi] < values[lo]:
                values[lo], values[hi] = values[hi], values[lo]
    return values


def input_planes(channels):
    """Bit planes of all ``2^channels`` inputs in numeric order."""
    total = 1 << channels
    words = max(1, total // WORD_BITS)
    planes = np.empty((channels, words), dtype=np.uint64)
    index = np.arange(words, dtype=np.uint64)
    for i in range(channels):
        if i < 6:
            pattern = sum(1 << t for t in range(WORD_BITS) if (t >> i) & 1)
            planes[i, :] = np.uint64(pattern)
        else:
            selected = ((index >> np.uint64(i - 6)) & np.uint64(1)).astype(bool)
            planes[i, :] = np.where(selected, ALL_ONES, np.uint64(0))
    if total < WORD_BITS:
        planes &= np.uint64((1 << total) - 1)
    return planes


def valid_mask(channels):
    total = 1 << channels
    words = max(1, total // WORD_BITS)
    mask = np.full(words, ALL_ONES, dtype=np.uint64)
    if total < WORD_BITS:
        mask[0] = np.uint64((1 << total) - 1)
    return mask


def run_planes(net, planes):
    """Push bit planes through ``net``; returns new planes."""
    planes = planes.copy()
    for layer in net.layers:
        for comparator in layer:
            lo, hi = comparator.lo - 1, comparator.hi - 1
            upper, lower = planes[lo].copy(), planes[hi]
            planes[lo] = upper & lower
            planes[hi] = upper | lower
    return planes


def unsorted_mask(planes, channels):
    """Word mask of the inputs whose output planes are not sorted."""
    mask = np.zeros(planes.shape[1] if channels else 1, dtype=np.uint64)
    for i in range(channels - 1):
        mask |= planes[i] & ~planes[i + 1]
    return mask & valid_mask(channels)


def mask_indices(mask, channels):
    """Input numbers (ascending) whose bit is set in a word mask."""
    total = 1 << channels
    bits = np.unpackbits(mask.astype("<u8").view(np.uint8), bitorder="little")[:total]
    return np.flatnonzero(bits).astype(np.uint64)


def planes_to_words(planes, channels):
    """Output word of every input, indexed by input number."""
    total = 1 << channels
    words = np.zeros(total, dtype=np.uint64)
    for i in range(channels):
        bits = np.unpackbits(planes[i].astype("<u8").view(np.uint8), bitorder="little")[:total]
        words |= bits.astype(np.uint64) << np.uint64(i)
    return words


def output_words(net, limit=None):
    """Output of ``net`` for every input, indexed by input number."""
    check_limit(net.channels, limit)
    return planes_to_words(run_planes(net, input_planes(net.channels)), net.channels)


def verify_sorting(net, limit=None):
    """Exhaustive 0-1 check; the counterexample is the smallest failing input."""
    check_limit(net.channels, limit)
    net.require_standard()
    n = net.channels
    planes = run_planes(net, input_planes(n))
    mask = unsorted_mask(planes, n)
    checked = 1 << n
    nonzero = np.flatnonzero(mask)
    if nonzero.size == 0:
        logger.debug("network %s sorts all %d inputs", net, checked)
        return Verdict(True, None, checked)
    word_index = int(nonzero[0])
    word = int(mask[word_index])
    bit = (word & -word).bit_length() - 1
    return Verdict(False, BitVector(n, word_index * WORD_BITS + bit), checked)


def window_sizes(words, channels):
    """Vectorised window size of every word in ``words``."""
    words = np.asarray(words, dtype=np.uint64)
    leading = np.zeros(words.shape, dtype=np.int64)
    trailing = np.zeros(words.shape, dtype=np.int64)
    alive = np.ones(words.shape, dtype=bool)
    for k in range(channels):
        alive &= ((words >> np.uint64(k)) & np.uint64(1)) == 0
        leading += alive
    alive = np.ones(words.shape, dtype=bool)
    for k in range(channels - 1, -1, -1):
        alive &= ((words >> np.uint64(k)) & np.uint64(1)) == 1
        trailing += alive
    return np.maximum(0, channels - leading - trailing)


def distinct_outputs(net, limit=None):
    """Sorted numpy array of the distinct output words of ``net``."""
    return np.unique(output_words(net, limit))


def output_set(net, limit=None):
    return frozenset(BitVector(net.channels, int(w)) for w in distinct_outputs(net, limit))


def window_sum(net, limit=None):
    """Sum of window sizes over the distinct outputs of ``net``."""
    outputs = distinct_outputs(net, limit)
    return int(window_sizes(outputs, net.channels).sum())
