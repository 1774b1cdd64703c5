"""
Variable numbering for one synthesis instance.

Numbering is fixed so DIMACS output is reproducible: the comparator block
``g(k, i, j)`` comes first (layer-major, then ``i``, then ``j``), then one
value block ``v(x, k, i)`` per input in input order, then the ``oneDown`` /
``oneUp`` auxiliaries in order of first use.
"""

from __future__ import annotations


class VarMap:
    def __init__(self, channels, prefix_depth, depth):
        self.channels = channels
        self.prefix_depth = prefix_depth
        self.depth = depth
        self.num_vars = 0
        self.g = {}
        self.v = {}
        self.aux = {}
        self.roles = {}
        for k in self.free_layers:
            for i in range(1, channels + 1):
                for j in range(i + 1, channels + 1):
                    self.g[(k, i, j)] = self._new({"role": "g", "layer": k, "i": i, "j": j})

    @property
    def free_layers(self):
        return range(self.prefix_depth + 1, self.depth + 1)

    def _new(self, role):
        self.num_vars += 1
        self.roles[self.num_vars] = role
        return self.num_vars

    def allocate_values(self, index, label, window_channels):
        """
        Value variables of input number ``index`` for the inner layers; the
        values before the first free layer and after the last one are
        constants and get no variable.
        """
        for k in range(self.prefix_depth + 1, self.depth):
            for i in window_channels:
                self.v[(index, k, i)] = self._new(
                    {"role": "v", "input": label, "layer": k, "channel": i}
                )

    def one_down(self, k, i, j):
        """
        Literal for ``oneDown(k, i, j)``: some comparator ``g(k, i, l)`` with
        ``i < l <= j``. Returns ``(literal, new_clauses)``; the literal is
        ``False`` for an empty range and the comparator variable itself for a
        single-element range.
        """
        return self._range("oneDown", k, i, j, [self.g[(k, i, l)] for l in range(i + 1, j + 1)])

    def one_up(self, k, i, j):
        """Literal for ``oneUp(k, i, j)``: some comparator ``g(k, l, j)`` with ``i <= l < j``."""
        return self._range("oneUp", k, i, j, [self.g[(k, l, j)] for l in range(i, j)])

    def _range(self, role, k, i, j, gates):
        if not gates:
            return False, []
        if len(gates) == 1:
            return gates[0], []
        key = (role, k, i, j)
        if key in self.aux:
            return self.aux[key], []
        var = self._new({"role": role, "layer": k, "from": i, "to": j})
        self.aux[key] = var
        clauses = [[-var] + gates] + [[var, -gate] for gate in gates]
        return var, clauses

    def comparator_of(self, var):
        role = self.roles.get(var)
        if role and role["role"] == "g":
            return role["layer"], role["i"], role["j"]
        return None

    def sidecar(self):
        return {
            "variables": self.num_vars,
            "channels": self.channels,
            "prefix_depth": self.prefix_depth,
            "depth": self.depth,
            "roles": {str(var): role for var, role in self.roles.items()},
        }
