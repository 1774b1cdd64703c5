"""DIMACS CNF text through ``pysat.formula.CNF``."""

import io
import re

from pysat.formula import CNF

from core.exceptions import SolverError

HEADER = re.compile(r"^p\s+cnf\s+(\d+)\s+(\d+)\s*$")


def clauses_to_dimacs(num_vars, clauses):
    formula = CNF(from_clauses=clauses)
    formula.nv = num_vars
    buffer = io.StringIO()
    formula.to_fp(buffer)
    return buffer.getvalue()


def write_dimacs(inst):
    """Header ``p cnf <vars> <clauses>`` and one 0-terminated clause per line."""
    return clauses_to_dimacs(inst.num_vars, inst.clauses)


def read_dimacs(text):
    """
    Parse DIMACS text into ``(num_vars, clauses)``. The variable count is the
    header's when present, otherwise the largest variable used.
    """
    declared = None
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith("p"):
            match = HEADER.match(stripped)
            if not match:
                raise SolverError(f"malformed DIMACS header {stripped!r}")
            declared = int(match.group(1))
    try:
        formula = CNF(from_string=text)
    except ValueError as exc:
        raise SolverError(f"malformed DIMACS clause: {exc}") from exc
    clauses = [list(clause) for clause in formula.clauses]
    used = max((abs(lit) for clause in clauses for lit in clause), default=0)
    if declared is not None and used > declared:
        raise SolverError(f"variable {used} exceeds the declared count {declared}")
    return (used if declared is None else declared), clauses
