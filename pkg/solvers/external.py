"""
Adapter for external DIMACS solvers following the SAT competition output
conventions: an ``s SATISFIABLE`` / ``s UNSATISFIABLE`` / ``s UNKNOWN`` status
line and ``v`` lines listing the model, 0-terminated.
"""

from __future__ import annotations

import logging
import os
import shlex
import subprocess
import tempfile
import time

from django.core.exceptions import ImproperlyConfigured

from core.conf import sortnet_setting
from core.exceptions import SolverError, SolverIntegrityError
from encoding.dimacs import clauses_to_dimacs

from .results import SAT, UNKNOWN, UNSAT, SolveResult, check_model

logger = logging.getLogger(__name__)

STATUS_LINES = {"SATISFIABLE": SAT, "UNSATISFIABLE": UNSAT, "UNKNOWN": UNKNOWN}


def resolve_command(command=None):
    command = command or sortnet_setting("EXTERNAL_SOLVER")
    if not command:
        raise ImproperlyConfigured(
            "No external SAT solver configured; pass a command or set SORTNET_SAT_SOLVER."
        )
    argv = shlex.split(command) if isinstance(command, str) else list(command)
    if not argv:
        raise ImproperlyConfigured("The external SAT solver command is empty.")
    return argv


def parse_output(text, num_vars):
    """Return ``(status, model)`` from competition-style solver output."""
    status = None
    literals = []
    for line in text.splitlines():
        if line.startswith("s "):
            word = line[2:].strip()
            if word not in STATUS_LINES:
                raise SolverError(f"unparsable status line {line!r}")
            status = STATUS_LINES[word]
        elif line.startswith("v "):
            try:
                literals.extend(int(token) for token in line[2:].split())
            except ValueError as exc:
                raise SolverError(f"unparsable model line {line!r}") from exc
    if status is None:
        raise SolverError("solver output has no status line")
    if status != SAT:
        return status, None
    model = {var: False for var in range(1, num_vars + 1)}
    for lit in literals:
        if lit == 0:
            continue
        if abs(lit) > num_vars:
            raise SolverError(f"model mentions variable {abs(lit)} beyond {num_vars}")
        model[abs(lit)] = lit > 0
    return status, model


def run_external(num_vars, clauses, command=None, timeout=None):
    argv = resolve_command(command)
    timeout = sortnet_setting("EXTERNAL_TIMEOUT") if timeout is None else timeout
    started = time.perf_counter()
    handle, path = tempfile.mkstemp(suffix=".cnf", prefix="sortnet-")
    try:
        with os.fdopen(handle, "w") as stream:
            stream.write(clauses_to_dimacs(num_vars, clauses))
        try:
            completed = subprocess.run(
                argv + [path], capture_output=True, text=True, timeout=timeout, check=False
            )
        except FileNotFoundError as exc:
            raise ImproperlyConfigured(f"External SAT solver {argv[0]!r} was not found.") from exc
        except PermissionError as exc:
            raise ImproperlyConfigured(f"External SAT solver {argv[0]!r} is not executable.") from exc
        except subprocess.TimeoutExpired:
            logger.warning("external solver %s timed out after %s seconds", argv[0], timeout)
            return SolveResult(UNKNOWN, None, {"seconds": round(time.perf_counter() - started, 6)})
    finally:
        os.unlink(path)

    try:
        status, model = parse_output(completed.stdout, num_vars)
    except SolverError as exc:
        raise SolverError(
            f"{argv[0]} exited with {completed.returncode}: {exc}; stderr: {completed.stderr.strip()[:200]}"
        ) from exc
    if model is not None:
        try:
            check_model(clauses, num_vars, model)
        except SolverIntegrityError as exc:
            raise SolverIntegrityError(f"model from {argv[0]} rejected: {exc}") from exc
    stats = {"seconds": round(time.perf_counter() - started, 6), "returncode": completed.returncode}
    logger.debug("external solver %s: %s in %.3fs", argv[0], status, stats["seconds"])
    return SolveResult(status, model, stats)


def solve_external(inst, solver_command=None, timeout=None):
    """Solve a CnfInstance with an external DIMACS solver process."""
    return run_external(inst.num_vars, inst.clauses, solver_command, timeout)
