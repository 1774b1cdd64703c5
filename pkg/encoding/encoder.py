"""
CNF encoding of "a depth-``d`` network on ``n`` channels that extends the
prefix ``P`` sorts every input of ``X``".

For an input ``x`` the prefix is simulated first: ``z = P(x)`` with window
``0^a z' 1^b``. Only channels ``a < i <= n - b`` carry value variables;
channels above the window are the constant 0, channels below it the
constant 1. The values before the first free layer are ``z`` and the values
after layer ``d`` are the sorted copy of ``z``; all of these constants are
substituted while clauses are built. A clause made true by a constant is
dropped, a literal made false is removed.

Both encodings share the ``valid`` clauses (each channel is used at most once
per free layer). They differ in how the effect of a layer on a window
channel is written down:

``original``
    a frame pair that keeps the value when no in-window comparator touches
    the channel, the disjunction of the touching comparators inlined, plus
    three clauses per comparator end.

``improved``
    two propagation clauses through ``oneDown`` / ``oneUp`` auxiliaries
    (``0`` can only move down through a comparator whose min end is the
    channel, ``1`` only up) and the two comparator clauses per end those
    leave uncovered.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from core.exceptions import EncodingError, LayerConflictError, NetworkError
from networks.network import Comparator, Layer, window
from networks.simulation import apply_network

from .varmap import VarMap

logger = logging.getLogger(__name__)

MODES = ("original", "improved")


def _neg(term):
    return (not term) if isinstance(term, bool) else -term


def _clause(terms):
    """
    Simplify a disjunction of literals and boolean constants. Returns ``None``
    for a satisfied (or tautological) clause, otherwise the literal list.
    """
    literals = []
    for term in terms:
        if term is True:
            return None
        if term is False:
            continue
        if -term in literals:
            return None
        if term not in literals:
            literals.append(term)
    return literals


class _Collector:
    """Ordered set of clauses; duplicates within one input are dropped."""

    def __init__(self):
        self.clauses = []
        self._seen = set()
        self.unsat = False

    def add(self, terms):
        literals = _clause(terms)
        if literals is None:
            return
        key = tuple(sorted(literals))
        if key in self._seen:
            return
        self._seen.add(key)
        if not literals:
            self.unsat = True
        self.clauses.append(literals)

    def extend(self, clauses):
        for clause in clauses:
            self.add(clause)


def encode_valid(n, d, prefix_depth, varmap):
    """``(-g v -g')`` for every two comparators of a free layer sharing a channel."""
    if d <= prefix_depth:
        raise EncodingError(f"depth {d} leaves no free layer after a prefix of depth {prefix_depth}")
    out = _Collector()
    for k in range(prefix_depth + 1, d + 1):
        for i in range(1, n + 1):
            touching = [varmap.g[(k, min(i, j), max(i, j))] for j in range(1, n + 1) if j != i]
            for first in range(len(touching)):
                for second in range(first + 1, len(touching)):
                    out.add([-touching[first], -touching[second]])
    return out.clauses


class _InputFrame:
    """Values of one input on every (layer, channel): constants or variables."""

    def __init__(self, index, x, n, d, prefix, varmap):
        self.n, self.d, self.p = n, d, prefix.depth
        self.varmap = varmap
        self.index = index
        self.z = apply_network(prefix.network, x)
        self.win = window(self.z)
        self.y = self.z.sorted_copy()

    @property
    def channels(self):
        return self.win.channels(self.n)

    def value(self, k, i):
        if i <= self.win.a:
            return False
        if i > self.n - self.win.b:
            return True
        if k == self.p:
            return bool(self.z.channel(i))
        if k == self.d:
            return bool(self.y.channel(i))
        return self.varmap.v[(self.index, k, i)]


def _check_input(x, n):
    if x.width != n:
        raise NetworkError(f"input {x} has width {x.width}, expected {n}")


def encode_sorts_original(index, x, n, d, prefix, varmap):
    """
    Sorting constraints of input number ``index`` in the original form. The
    value variables of the input must already be allocated.
    """
    _check_input(x, n)
    frame = _InputFrame(index, x, n, d, prefix, varmap)
    out = _Collector()
    if frame.win.size == 0:
        return out.clauses
    if frame.p == d:
        out.add([])
        return out.clauses
    window_channels = list(frame.channels)
    g = varmap.g
    for k in range(frame.p + 1, d + 1):
        for i in window_channels:
            above = [j for j in window_channels if j < i]
            below = [j for j in window_channels if j > i]
            cur, prev = frame.value(k, i), frame.value(k - 1, i)
            gates = [g[(k, j, i)] for j in above] + [g[(k, i, j)] for j in below]
            out.add(gates + [_neg(prev), cur])
            out.add(gates + [prev, _neg(cur)])
            # i is the max end of (j, i): v_i = v_j OR v_i
            for j in above:
                gate, other = g[(k, j, i)], frame.value(k - 1, j)
                out.add([-gate, _neg(cur), other, prev])
                out.add([-gate, cur, _neg(other)])
                out.add([-gate, cur, _neg(prev)])
            # i is the min end of (i, j): v_i = v_i AND v_j
            for j in below:
                gate, other = g[(k, i, j)], frame.value(k - 1, j)
                out.add([-gate, _neg(cur), prev])
                out.add([-gate, _neg(cur), other])
                out.add([-gate, cur, _neg(prev), _neg(other)])
    return out.clauses


def encode_sorts_improved(index, x, n, d, prefix, varmap):
    """
    Sorting constraints of input number ``index`` in the improved form.

    The returned list also holds the definitions of every ``oneDown`` /
    ``oneUp`` auxiliary created while encoding this input; ranges already
    defined by an earlier input are reused without new clauses. A range with
    a single comparator is that comparator's variable and an empty range is
    the constant false.
    """
    _check_input(x, n)
    frame = _InputFrame(index, x, n, d, prefix, varmap)
    out = _Collector()
    if frame.win.size == 0:
        return out.clauses
    if frame.p == d:
        out.add([])
        return out.clauses
    window_channels = list(frame.channels)
    low, high = window_channels[0], window_channels[-1]
    g = varmap.g
    for k in range(frame.p + 1, d + 1):
        for i in window_channels:
            cur, prev = frame.value(k, i), frame.value(k - 1, i)
            down, definitions = varmap.one_down(k, i, high)
            out.extend(definitions)
            up, definitions = varmap.one_up(k, low, i)
            out.extend(definitions)
            out.add([_neg(prev), down, cur])
            out.add([prev, up, _neg(cur)])
            for j in window_channels:
                other = frame.value(k - 1, j)
                if j < i:
                    gate = g[(k, j, i)]
                    out.add([-gate, cur, _neg(other)])
                    out.add([-gate, _neg(cur), other, prev])
                elif j > i:
                    gate = g[(k, i, j)]
                    out.add([-gate, _neg(cur), other])
                    out.add([-gate, cur, _neg(prev), _neg(other)])
    return out.clauses


ENCODERS = {"original": encode_sorts_original, "improved": encode_sorts_improved}


@dataclass
class CnfInstance:
    channels: int
    depth: int
    prefix: object
    mode: str
    varmap: VarMap
    clauses: list = field(default_factory=list)
    inputs: list = field(default_factory=list)
    trivially_unsat: bool = False

    @property
    def num_vars(self):
        return self.varmap.num_vars

    @property
    def num_clauses(self):
        return len(self.clauses)

    @property
    def num_literals(self):
        return sum(len(clause) for clause in self.clauses)

    def stats(self):
        return {"variables": self.num_vars, "clauses": self.num_clauses, "literals": self.num_literals}

    def provenance(self):
        return {
            "channels": self.channels,
            "depth": self.depth,
            "prefix": self.prefix.digest(),
            "prefix_label": self.prefix.label,
            "mode": self.mode,
            "inputs": [str(x) for x in self.inputs],
        }

    def add_inputs(self, inputs):
        """
        Append the sorting constraints of ``inputs`` and return the new
        clauses. Value blocks of the whole batch are numbered before any
        auxiliary the batch creates.
        """
        inputs = list(inputs)
        known = set(self.inputs)
        for x in inputs:
            _check_input(x, self.channels)
            if x in known:
                raise EncodingError(f"input {x} is already part of the instance")
            known.add(x)
        start = len(self.inputs)
        frames = []
        for offset, x in enumerate(inputs):
            index = start + offset
            z = apply_network(self.prefix.network, x)
            self.varmap.allocate_values(index, str(x), window(z).channels(self.channels))
            frames.append((index, x))
        encode = ENCODERS[self.mode]
        added = []
        for index, x in frames:
            clauses = encode(index, x, self.channels, self.depth, self.prefix, self.varmap)
            if any(not clause for clause in clauses):
                self.trivially_unsat = True
            added.extend(clauses)
        self.inputs.extend(inputs)
        self.clauses.extend(added)
        return added


def encode_problem(n, d, prefix, inputs=(), mode="improved"):
    """Conjunction of ``valid`` and the chosen ``sorts`` constraints for every input."""
    if mode not in MODES:
        raise EncodingError(f"unknown encoding mode {mode!r}, expected one of {', '.join(MODES)}")
    if prefix.channels != n:
        raise EncodingError(f"prefix has {prefix.channels} channels, expected {n}")
    if prefix.depth > d:
        raise EncodingError(f"prefix depth {prefix.depth} exceeds the network depth {d}")
    varmap = VarMap(n, prefix.depth, d)
    inst = CnfInstance(n, d, prefix, mode, varmap)
    if d > prefix.depth:
        inst.clauses.extend(encode_valid(n, d, prefix.depth, varmap))
    inst.add_inputs(inputs)
    logger.debug(
        "encoded n=%d d=%d prefix=%s mode=%s: %d inputs, %d vars, %d clauses",
        n, d, prefix.label, mode, len(inst.inputs), inst.num_vars, inst.num_clauses,
    )
    return inst


def _true_variables(assignment):
    if isinstance(assignment, dict):
        return {var for var, value in assignment.items() if value}
    return {lit for lit in assignment if lit > 0}


def decode_model(inst, assignment):
    """
    Network made of the prefix and one layer per free layer holding the
    comparators whose ``g`` variable is true. ``assignment`` is a mapping
    ``var -> bool`` or an iterable of signed literals.
    """
    true_vars = _true_variables(assignment)
    varmap = inst.varmap
    layers = []
    for k in varmap.free_layers:
        comparators = [
            Comparator(i, j)
            for (layer, i, j), var in varmap.g.items()
            if layer == k and var in true_vars
        ]
        try:
            layers.append(Layer(tuple(comparators)))
        except LayerConflictError as exc:
            raise EncodingError(f"model violates the once constraint in layer {k}: {exc}") from exc
    return inst.prefix.network.extended(layers)


def decode_sidecar(sidecar, prefix_network, assignment):
    """Decode an external model with the variable roles of a sidecar document."""
    true_vars = _true_variables(assignment)
    layers = {k: [] for k in range(sidecar["prefix_depth"] + 1, sidecar["depth"] + 1)}
    for var, role in sidecar["roles"].items():
        if role["role"] == "g" and int(var) in true_vars:
            layers[role["layer"]].append(Comparator(role["i"], role["j"]))
    try:
        return prefix_network.extended(Layer(tuple(layers[k])) for k in sorted(layers))
    except LayerConflictError as exc:
        raise EncodingError(f"model violates the once constraint: {exc}") from exc


def force_network(inst, net):
    """
    Unit clauses fixing every free layer to the corresponding layer of
    ``net``; ``net`` must start with the instance prefix.
    """
    if net.channels != inst.channels or net.depth > inst.depth:
        raise EncodingError(f"cannot force a {net.channels}-channel depth-{net.depth} network here")
    net.require_standard()
    if net.head(inst.prefix.depth) != inst.prefix.network:
        raise EncodingError("the network does not start with the instance prefix")
    chosen = set()
    for k, layer in enumerate(net.layers, start=1):
        if k > inst.prefix.depth:
            chosen.update((k, c.lo, c.hi) for c in layer.comparators)
    return [[var] if key in chosen else [-var] for key, var in inst.varmap.g.items()]


def varmap_sidecar(inst):
    data = inst.varmap.sidecar()
    data["provenance"] = inst.provenance()
    return data

