"""
Choice of the inputs that drive the synthesis loop.

Inputs are ranked by window size, smallest first, and then by their numeric
value. When a prefix is given the window is measured on the prefix output,
which is what the encoding sees; for an empty prefix it is the window of the
input itself.
"""

from __future__ import annotations

import re

import numpy as np

from core.exceptions import SortnetError
from networks.network import BitVector
from networks.simulation import (
    check_limit,
    input_planes,
    mask_indices,
    output_words,
    run_planes,
    unsorted_mask,
    window_sizes,
)

STRATEGIES = ("small-window-first", "random")
RANDOM_STRATEGY = re.compile(r"^random(?:\((\d+)\))?$")


def _ranked(indices, measured, channels):
    sizes = window_sizes(measured, channels)
    order = np.lexsort((indices, sizes))
    return indices[order]


def find_counterexamples(net, exclude=(), count=1, prefix_depth=0, limit=None):
    """Up to ``count`` unsorted inputs outside ``exclude`` of minimal window size."""
    n = net.channels
    check_limit(n, limit)
    failing = mask_indices(unsorted_mask(run_planes(net, input_planes(n)), n), n)
    if len(exclude):
        excluded = np.fromiter((x.bits for x in exclude), dtype=np.uint64)
        failing = failing[~np.isin(failing, excluded)]
    if failing.size == 0:
        return []
    if prefix_depth:
        measured = output_words(net.head(prefix_depth), limit)[failing.astype(np.int64)]
    else:
        measured = failing
    return [BitVector(n, int(bits)) for bits in _ranked(failing, measured, n)[:count]]


def find_counterexample(net, exclude=(), prefix_depth=0, limit=None):
    found = find_counterexamples(net, exclude, 1, prefix_depth, limit)
    return found[0] if found else None


def parse_strategy(strategy, seed=0):
    """``"small-window-first"``, ``"random"`` or ``"random(<seed>)"``."""
    if strategy == "small-window-first":
        return strategy, seed
    match = RANDOM_STRATEGY.match(strategy or "")
    if not match:
        raise SortnetError(f"unknown input strategy {strategy!r}, expected one of {', '.join(STRATEGIES)}")
    return "random", int(match.group(1)) if match.group(1) else seed


def initial_inputs(n, prefix, count, strategy="small-window-first", seed=0, limit=None):
    """
    ``count`` distinct inputs the prefix leaves unsorted. Inputs with the same
    prefix output produce the same constraints, so only the smallest input
    of each distinct unsorted output is a candidate; asking for more than
    there are returns all of them.
    """
    if count < 0:
        raise SortnetError("the initial input count must not be negative")
    if count == 0:
        return []
    strategy, seed = parse_strategy(strategy, seed)
    words = output_words(prefix.network, limit)
    outputs, first = np.unique(words, return_index=True)
    unsorted = window_sizes(outputs, n) > 0
    outputs = outputs[unsorted]
    candidates = first[unsorted].astype(np.uint64)
    if strategy == "random":
        chosen = np.random.default_rng(seed).permutation(candidates)[:count]
    else:
        chosen = _ranked(candidates, outputs, n)[:count]
    return [BitVector(n, int(bits)) for bits in chosen]
