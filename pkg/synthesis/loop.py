"""
The counterexample-guided synthesis loop.

Starting from a few inputs, the loop encodes "some network extending the
prefix sorts these inputs", solves, and checks the decoded network on all
inputs. Unsorted inputs of minimal window size are added and the loop goes
on until a sorting network is found or the instance becomes unsatisfiable.
An unsatisfiable instance is a proof for all inputs, because its inputs are
a subset of them.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field, replace
from typing import Optional

from django.core.exceptions import ValidationError

from core.conf import sortnet_setting
from core.exceptions import EncodingError, NetworkError
from encoding.encoder import MODES, decode_model, encode_problem
from networks.network import BitVector
from networks.serialization import network_to_dict
from networks.simulation import check_limit, verify_sorting
from prefixes.prefix import Prefix, prefix_from_dict, prefix_to_dict
from solvers.results import Budget
from solvers.sessions import BACKENDS, open_session

from .counterexamples import find_counterexamples, initial_inputs

logger = logging.getLogger(__name__)

FOUND = "found"
NO_NETWORK = "no-network"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class LoopConfig:
    mode: str = "improved"
    batch_size: int = 1
    reencode_every: int = 64
    strategy: str = "small-window-first"
    backend: str = "internal"
    command: Optional[str] = None
    budget: Budget = field(default_factory=Budget)
    probe: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.mode not in MODES:
            raise EncodingError(f"unknown encoding mode {self.mode!r}")
        if self.backend not in BACKENDS:
            raise EncodingError(f"unknown solver backend {self.backend!r}")
        if self.batch_size < 1:
            raise EncodingError("the counterexample batch size must be positive")

    @classmethod
    def from_settings(cls, **overrides):
        synthesis = sortnet_setting("SYNTHESIS")
        values = {
            "mode": synthesis["MODE"],
            "batch_size": synthesis["BATCH_SIZE"],
            "reencode_every": synthesis["REENCODE_EVERY"],
            "strategy": synthesis["INITIAL_STRATEGY"],
            "probe": sortnet_setting("SOLVER.PROBE"),
            "seed": sortnet_setting("SOLVER.SEED"),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@dataclass
class LoopState:
    channels: int
    depth: int
    prefix: Prefix
    mode: str
    inputs: list = field(default_factory=list)
    iteration: int = 0
    instance: object = None
    last_result: object = None

    def to_dict(self):
        return {
            "channels": self.channels,
            "depth": self.depth,
            "prefix": prefix_to_dict(self.prefix),
            "mode": self.mode,
            "inputs": [str(x) for x in self.inputs],
            "iteration": self.iteration,
        }

    @classmethod
    def from_dict(cls, data):
        try:
            prefix = prefix_from_dict(data["prefix"])
            inputs = [BitVector.from_string(text) for text in data["inputs"]]
            state = cls(int(data["channels"]), int(data["depth"]), prefix, data["mode"], inputs, int(data["iteration"]))
        except (KeyError, TypeError, ValueError, NetworkError) as exc:
            raise ValidationError(f"Malformed loop state: {exc}", code="invalid") from exc
        if state.mode not in MODES or prefix.channels != state.channels:
            raise ValidationError("Loop state does not describe a consistent problem.", code="invalid")
        if len(set(inputs)) != len(inputs) or any(x.width != state.channels for x in inputs):
            raise ValidationError("Loop state inputs must be distinct vectors of the channel width.", code="invalid")
        return state

    def save(self, path):
        with open(path, "w") as stream:
            json.dump(self.to_dict(), stream, indent=2)

    @classmethod
    def load(cls, path):
        with open(path) as stream:
            try:
                data = json.load(stream)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"Not valid JSON: {exc}", code="invalid") from exc
        return cls.from_dict(data)


@dataclass
class SynthesisOutcome:
    verdict: str
    network: object
    iterations: int
    inputs: list
    seconds: float
    state: LoopState = None
    stats: dict = field(default_factory=dict)

    def __post_init__(self):
        if (self.network is not None) != (self.verdict == FOUND):
            raise EncodingError("a network is present exactly for found outcomes")

    def as_dict(self):
        return {
            "verdict": self.verdict,
            "network": network_to_dict(self.network) if self.network is not None else None,
            "iterations": self.iterations,
            "inputs": len(self.inputs),
            "seconds": round(self.seconds, 3),
            "stats": self.stats,
        }


def _session(inst, config):
    return open_session(inst, config.backend, config.command, config.probe, config.seed)


def synthesize(n, d, prefix=None, initial=0, config=None, state=None):
    """
    Run the loop for ``n`` channels and depth ``d``. ``initial`` is a count of
    inputs picked by the configured strategy or an explicit list of inputs;
    ``state`` continues an earlier run instead.
    """
    config = config or LoopConfig.from_settings()
    check_limit(n)
    if state is None:
        prefix = prefix or Prefix.empty(n)
        if prefix.channels != n:
            raise NetworkError(f"prefix has {prefix.channels} channels, expected {n}")
        if prefix.depth > d:
            raise NetworkError(f"prefix depth {prefix.depth} exceeds the target depth {d}")
        if isinstance(initial, int):
            inputs = initial_inputs(n, prefix, initial, config.strategy, config.seed)
        else:
            inputs = list(initial)
            if len(set(inputs)) != len(inputs):
                raise EncodingError("initial inputs must be distinct")
        state = LoopState(n, d, prefix, config.mode, inputs)
    prefix = state.prefix
    started = time.perf_counter()
    inst = encode_problem(state.channels, state.depth, prefix, state.inputs, state.mode)
    session = _session(inst, config)
    appended = 0

    while True:
        state.iteration += 1
        result = session.solve(config.budget)
        state.instance, state.last_result = inst, result
        logger.info(
            "iteration %d: %d inputs, %d clauses, %s",
            state.iteration, len(state.inputs), inst.num_clauses, result.status,
        )
        logger.debug("solver statistics: %s", result.stats)
        if not result.is_sat:
            verdict = NO_NETWORK if result.is_unsat else UNKNOWN
            return _outcome(verdict, None, state, started)

        net = decode_model(inst, result.model)
        examples = find_counterexamples(net, state.inputs, config.batch_size, prefix.depth)
        if not examples:
            verdict = verify_sorting(net)
            if not verdict.is_sorting:
                raise EncodingError(f"decoded network fails on encoded input {verdict.counterexample}")
            return _outcome(FOUND, net, state, started)

        state.inputs.extend(examples)
        appended += 1
        if config.reencode_every and appended >= config.reencode_every:
            inst = encode_problem(state.channels, state.depth, prefix, state.inputs, state.mode)
            session = _session(inst, config)
            appended = 0
        else:
            session.add_clauses(inst.add_inputs(examples), inst.num_vars)


def _outcome(verdict, net, state, started):
    inst = state.instance
    return SynthesisOutcome(
        verdict,
        net,
        state.iteration,
        list(state.inputs),
        time.perf_counter() - started,
        state,
        inst.stats() if inst is not None else {},
    )


def resume(state, config=None):
    """Continue an interrupted run from a LoopState or the path of its JSON file."""
    if not isinstance(state, LoopState):
        state = LoopState.load(state)
    config = config or LoopConfig.from_settings(mode=state.mode)
    if config.mode != state.mode:
        config = replace(config, mode=state.mode)
    return synthesize(state.channels, state.depth, config=config, state=state)


def fresh_resolve(outcome, config=None):
    """Encode the final input set of ``outcome`` from scratch and solve it again."""
    state = outcome.state
    config = config or LoopConfig.from_settings(mode=state.mode)
    inst = encode_problem(state.channels, state.depth, state.prefix, state.inputs, state.mode)
    return _session(inst, config).solve(config.budget)
