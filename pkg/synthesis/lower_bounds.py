"""
Lower bounds by prefix sweep: if no network of depth ``d`` extends any
prefix of a set that covers all networks up to symmetry, no sorting network
of depth ``d`` exists.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from core.exceptions import NetworkError
from networks.serialization import network_to_dict
from prefixes.enumeration import enumerate_two_layer_prefixes
from prefixes.generators import first_layer_bz

from .loop import FOUND, UNKNOWN, LoopConfig, synthesize

logger = logging.getLogger(__name__)

NONE_EXTENDS = "no-network"
NETWORK_FOUND = "network-found"
INCONCLUSIVE = "inconclusive"

COVERAGE_ASSUMPTION = "the prefix set covers every sorting network of this size up to symmetry"
NO_LAST_LAYER_NOTE = "no constraints on the last layers were added to the instances"


@dataclass(frozen=True)
class PrefixRecord:
    prefix_id: str
    label: str
    layers: dict
    verdict: str
    iterations: int
    inputs: int
    seconds: float

    def as_dict(self):
        return {
            "prefix": self.prefix_id,
            "label": self.label,
            "layers": self.layers,
            "verdict": self.verdict,
            "iterations": self.iterations,
            "inputs": self.inputs,
            "seconds": round(self.seconds, 3),
        }


@dataclass
class LowerBoundReport:
    channels: int
    depth: int
    mode: str
    backend: str
    records: list = field(default_factory=list)
    assumptions: list = field(default_factory=lambda: [COVERAGE_ASSUMPTION])
    notes: list = field(default_factory=lambda: [NO_LAST_LAYER_NOTE])
    seconds: float = 0.0

    @property
    def verdict(self):
        verdicts = {record.verdict for record in self.records}
        if UNKNOWN in verdicts or not verdicts:
            return INCONCLUSIVE
        if FOUND in verdicts:
            return NETWORK_FOUND
        return NONE_EXTENDS

    @property
    def summary(self):
        if self.verdict == NONE_EXTENDS:
            return f"no sorting network of depth {self.depth} extends any given prefix"
        if self.verdict == NETWORK_FOUND:
            return f"a sorting network of depth {self.depth} extends at least one prefix"
        return "inconclusive: at least one prefix ran out of budget"

    def as_dict(self):
        return {
            "channels": self.channels,
            "depth": self.depth,
            "mode": self.mode,
            "solver": self.backend,
            "verdict": self.verdict,
            "summary": self.summary,
            "assumptions": list(self.assumptions),
            "notes": list(self.notes),
            "seconds": round(self.seconds, 3),
            "prefixes": [record.as_dict() for record in self.records],
        }

    def table(self):
        header = f"{'prefix':<14}{'verdict':<12}{'iterations':>11}{'inputs':>8}{'seconds':>10}"
        rows = [header, "-" * len(header)]
        for r in self.records:
            rows.append(f"{r.prefix_id:<14}{r.verdict:<12}{r.iterations:>11}{r.inputs:>8}{r.seconds:>10.2f}")
        rows.append(self.summary)
        return "\n".join(rows) + "\n"


def lower_bound_prefixes(n):
    """BZ first layer alone for up to four channels, enumerated two-layer prefixes beyond."""
    if n <= 4:
        return [first_layer_bz(n)]
    return enumerate_two_layer_prefixes(n)


def _run(job):
    n, d, prefix, config = job
    outcome = synthesize(n, d, prefix, 0, config)
    return PrefixRecord(
        prefix.digest(),
        prefix.label,
        network_to_dict(prefix.network),
        outcome.verdict,
        outcome.iterations,
        len(outcome.inputs),
        outcome.seconds,
    )


def prove_lower_bound(n, d, prefixes=None, config=None, workers=1):
    """
    Run the loop on every prefix and collect a report; the overall verdict
    is ``no-network`` only if every prefix came out unsatisfiable.
    """
    prefixes = lower_bound_prefixes(n) if prefixes is None else list(prefixes)
    if not prefixes:
        raise NetworkError("a lower-bound sweep needs at least one prefix")
    if workers < 1:
        raise NetworkError("the worker count must be positive")
    config = config or LoopConfig.from_settings()
    started = time.perf_counter()
    jobs = [(n, d, prefix, config) for prefix in prefixes]
    report = LowerBoundReport(n, d, config.mode, config.backend)
    if workers == 1:
        records = [_run(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run, jobs))
    report.records.extend(records)
    report.seconds = time.perf_counter() - started
    logger.info(
        "%d channels, depth %d: %d prefixes, %s",
        n, d, len(records), report.verdict,
    )
    return report

