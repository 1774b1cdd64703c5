"""
Solver sessions: a clause set that grows between solve calls.

The embedded solver keeps its learnt clauses across calls. An external
solver is stateless, so its session re-sends the whole clause set each time.
"""

from __future__ import annotations

from core.conf import sortnet_setting

from .cdcl import CdclSolver
from .external import resolve_command, run_external, solve_external
from .results import Budget

BACKENDS = ("internal", "external")


class InternalSession:
    backend = "internal"

    def __init__(self, num_vars, clauses, probe_vars=None, seed=None):
        self.solver = CdclSolver(num_vars, clauses, seed=seed)
        self.probe_vars = probe_vars

    def add_clauses(self, clauses, num_vars):
        self.solver.add_clauses(clauses, num_vars)

    def solve(self, budget=None):
        return self.solver.solve(budget, self.probe_vars)


class ExternalSession:
    backend = "external"

    def __init__(self, num_vars, clauses, command=None, timeout=None):
        self.argv = resolve_command(command)
        self.timeout = timeout
        self.num_vars = num_vars
        self.clauses = [list(clause) for clause in clauses]

    def add_clauses(self, clauses, num_vars):
        self.clauses.extend(list(clause) for clause in clauses)
        self.num_vars = max(self.num_vars, num_vars)

    def solve(self, budget=None):
        seconds = budget.seconds if budget else None
        return run_external(self.num_vars, self.clauses, self.argv, seconds or self.timeout)


def probe_variables(inst):
    return list(inst.varmap.g.values())


def open_session(inst, backend="internal", command=None, probe=None, seed=None):
    """Start a session on the current clauses of ``inst``."""
    if backend == "external":
        return ExternalSession(inst.num_vars, inst.clauses, command)
    probe = sortnet_setting("SOLVER.PROBE") if probe is None else probe
    return InternalSession(inst.num_vars, inst.clauses, probe_variables(inst) if probe else None, seed)


def solve(inst, budget=None, backend="internal", command=None, probe=None):
    """Decide a CnfInstance; ``budget`` is a Budget or ``None``."""
    budget = budget or Budget()
    if backend == "external":
        return solve_external(inst, command, budget.seconds)
    return open_session(inst, backend, command, probe).solve(budget)
