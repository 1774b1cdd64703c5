from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from core.exceptions import SolverError, SolverIntegrityError

SAT = "sat"
UNSAT = "unsat"
UNKNOWN = "unknown"
STATUSES = (SAT, UNSAT, UNKNOWN)


@dataclass(frozen=True)
class Budget:
    """Conflict and wall-clock limits; ``None`` means unlimited."""

    conflicts: Optional[int] = None
    seconds: Optional[float] = None

    @property
    def unlimited(self):
        return self.conflicts is None and self.seconds is None


@dataclass
class SolveResult:
    """
    Outcome of one solver call. ``model`` maps every variable to a boolean
    and is present exactly when the status is ``sat``.
    """

    status: str
    model: Optional[dict] = None
    stats: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise SolverError(f"unknown solver status {self.status!r}")
        if (self.model is not None) != (self.status == SAT):
            raise SolverError("a model is present exactly for satisfiable results")

    @property
    def is_sat(self):
        return self.status == SAT

    @property
    def is_unsat(self):
        return self.status == UNSAT

    def true_literals(self):
        return sorted(var for var, value in (self.model or {}).items() if value)

    def as_dict(self):
        return {"status": self.status, "stats": dict(self.stats)}


def validate_clauses(num_vars, clauses):
    for number, clause in enumerate(clauses, start=1):
        for lit in clause:
            if not isinstance(lit, int) or lit == 0:
                raise SolverError(f"clause {number} contains the invalid literal {lit!r}")
            if abs(lit) > num_vars:
                raise SolverError(f"clause {number} uses variable {abs(lit)} beyond {num_vars}")


def check_model(clauses, num_vars, model):
    """Raise SolverIntegrityError unless ``model`` assigns every variable and satisfies every clause."""
    missing = [var for var in range(1, num_vars + 1) if var not in model]
    if missing:
        raise SolverIntegrityError(f"model leaves {len(missing)} variables unassigned, e.g. {missing[0]}")
    for number, clause in enumerate(clauses, start=1):
        if not any(model[abs(lit)] == (lit > 0) for lit in clause):
            raise SolverIntegrityError(f"model falsifies clause {number}: {clause}")
