"""
Embedded CDCL SAT solver.

Two watched literals per clause, first-UIP conflict analysis with basic
clause minimisation, VSIDS branching with phase saving, geometric restarts
and activity-based deletion of learnt clauses. Clauses can be added between
calls to :meth:`CdclSolver.solve`; learnt clauses stay valid because added
clauses only ever shrink the solution space.

Literals are stored as indices: ``2 * v`` for ``v`` and ``2 * v + 1`` for
``-v``, so ``index ^ 1`` is the negation.
"""

from __future__ import annotations

import heapq
import logging
import random
import time

from core.conf import sortnet_setting
from core.exceptions import SolverError

from .results import SAT, UNKNOWN, UNSAT, Budget, SolveResult, check_model

logger = logging.getLogger(__name__)


def _index(lit):
    return 2 * lit if lit > 0 else -2 * lit + 1


class _Clause:
    __slots__ = ("lits", "learnt", "activity", "deleted")

    def __init__(self, lits, learnt=False):
        self.lits = lits
        self.learnt = learnt
        self.activity = 0.0
        self.deleted = False


class CdclSolver:
    def __init__(
        self,
        num_vars=None,
        clauses=(),
        *,
        clause_decay=None,
        var_decay=None,
        restart_first=None,
        restart_factor=None,
        learnt_fraction=None,
        random_freq=None,
        seed=None,
    ):
        options = sortnet_setting("SOLVER")
        self.clause_decay = options["CLAUSE_DECAY"] if clause_decay is None else clause_decay
        self.var_decay = options["VAR_DECAY"] if var_decay is None else var_decay
        self.restart_first = options["RESTART_FIRST"] if restart_first is None else restart_first
        self.restart_factor = options["RESTART_FACTOR"] if restart_factor is None else restart_factor
        self.learnt_fraction = options["LEARNT_FRACTION"] if learnt_fraction is None else learnt_fraction
        self.random_freq = options.get("RANDOM_FREQ", 0.0) if random_freq is None else random_freq
        self.rng = random.Random(options["SEED"] if seed is None else seed)

        self.num_vars = 0
        self.value = [0, 0]
        self.level = [0]
        self.reason = [None]
        self.activity = [0.0]
        self.polarity = [False]
        self.seen = [False]
        self.watches = [[], []]
        self.heap = []
        self.trail = []
        self.trail_lim = []
        self.qhead = 0
        self.clauses = []
        self.learnts = []
        self.original = []
        self.ok = True
        self.var_inc = 1.0
        self.cla_inc = 1.0
        self.max_learnts = None
        self.stats = {"conflicts": 0, "decisions": 0, "propagations": 0, "restarts": 0, "failed_literals": 0}
        self.add_clauses(clauses, num_vars)

    # -- construction ----------------------------------------------------

    def ensure_vars(self, num_vars):
        for var in range(self.num_vars + 1, num_vars + 1):
            self.value.extend((0, 0))
            self.level.append(0)
            self.reason.append(None)
            self.activity.append(0.0)
            self.polarity.append(False)
            self.seen.append(False)
            self.watches.extend(([], []))
            heapq.heappush(self.heap, (-0.0, var))
        self.num_vars = max(self.num_vars, num_vars)

    def add_clauses(self, clauses, num_vars=None):
        """Add problem clauses; allowed before the first and between solve calls."""
        clauses = [list(clause) for clause in clauses]
        for number, clause in enumerate(clauses, start=1):
            if any(not isinstance(lit, int) or lit == 0 for lit in clause):
                raise SolverError(f"clause {number} contains a zero or non-integer literal: {clause}")
        used = max((abs(lit) for clause in clauses for lit in clause), default=0)
        if num_vars is not None and used > num_vars:
            raise SolverError(f"variable {used} exceeds the declared count {num_vars}")
        self.ensure_vars(max(used, num_vars or 0))
        self._cancel_until(0)
        for clause in clauses:
            self.original.append(clause)
            if self.ok:
                self._add_clause(clause)

    def _add_clause(self, clause):
        value = self.value
        lits = []
        for lit in clause:
            index = _index(lit)
            if value[index] == 1 or (index ^ 1) in lits:
                return
            if value[index] == -1 or index in lits:
                continue
            lits.append(index)
        if not lits:
            self.ok = False
        elif len(lits) == 1:
            self._enqueue(lits[0], None)
            if self._propagate() is not None:
                self.ok = False
        else:
            c = _Clause(lits)
            self.clauses.append(c)
            self._attach(c)

    def _attach(self, c):
        self.watches[c.lits[0]].append(c)
        self.watches[c.lits[1]].append(c)

    # -- assignment ------------------------------------------------------

    @property
    def decision_level(self):
        return len(self.trail_lim)

    def _enqueue(self, index, reason):
        var = index >> 1
        self.value[index] = 1
        self.value[index ^ 1] = -1
        self.level[var] = len(self.trail_lim)
        self.reason[var] = reason
        self.trail.append(index)

    def _cancel_until(self, level):
        if len(self.trail_lim) <= level:
            return
        limit = self.trail_lim[level]
        for index in reversed(self.trail[limit:]):
            var = index >> 1
            self.value[index] = self.value[index ^ 1] = 0
            self.reason[var] = None
            self.polarity[var] = not index & 1
            heapq.heappush(self.heap, (-self.activity[var], var))
        del self.trail[limit:]
        del self.trail_lim[level:]
        self.qhead = limit

    def _propagate(self):
        """Unit propagation; returns a conflicting clause or ``None``."""
        value = self.value
        watches = self.watches
        trail = self.trail
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            self.stats["propagations"] += 1
            false_lit = p ^ 1
            pending = watches[false_lit]
            kept = watches[false_lit] = []
            position = 0
            total = len(pending)
            while position < total:
                c = pending[position]
                position += 1
                if c.deleted:
                    continue
                lits = c.lits
                if lits[0] == false_lit:
                    lits[0], lits[1] = lits[1], false_lit
                first = lits[0]
                if value[first] == 1:
                    kept.append(c)
                    continue
                for k in range(2, len(lits)):
                    if value[lits[k]] != -1:
                        lits[1], lits[k] = lits[k], false_lit
                        watches[lits[1]].append(c)
                        break
                else:
                    kept.append(c)
                    if value[first] == -1:
                        kept.extend(pending[position:])
                        self.qhead = len(trail)
                        return c
                    self._enqueue(first, c)
        return None

    # -- heuristics ------------------------------------------------------

    def _bump_var(self, var):
        self.activity[var] += self.var_inc
        if self.activity[var] > 1e100:
            self.activity = [a * 1e-100 for a in self.activity]
            self.var_inc *= 1e-100
            self._rebuild_heap()
        elif self.value[2 * var] == 0:
            heapq.heappush(self.heap, (-self.activity[var], var))

    def _bump_clause(self, c):
        c.activity += self.cla_inc
        if c.activity > 1e20:
            for learnt in self.learnts:
                learnt.activity *= 1e-20
            self.cla_inc *= 1e-20

    def _decay(self):
        self.var_inc /= self.var_decay
        self.cla_inc /= self.clause_decay

    def _rebuild_heap(self):
        self.heap = [(-self.activity[v], v) for v in range(1, self.num_vars + 1) if self.value[2 * v] == 0]
        heapq.heapify(self.heap)

    def _pick_branch(self):
        if self.random_freq and self.rng.random() < self.random_freq and self.num_vars:
            var = self.rng.randint(1, self.num_vars)
            if self.value[2 * var] == 0:
                return var
        if len(self.heap) > 4 * self.num_vars + 64:
            self._rebuild_heap()
        while self.heap:
            _, var = heapq.heappop(self.heap)
            if self.value[2 * var] == 0:
                return var
        return None

    # -- learning --------------------------------------------------------

    def _analyze(self, confl):
        seen, level, reason, trail = self.seen, self.level, self.reason, self.trail
        current = len(self.trail_lim)
        learnt = [0]
        counter = 0
        p = None
        c = confl
        index = len(trail) - 1
        while True:
            if c.learnt:
                self._bump_clause(c)
            for q in c.lits if p is None else c.lits[1:]:
                var = q >> 1
                if not seen[var] and level[var] > 0:
                    seen[var] = True
                    self._bump_var(var)
                    if level[var] >= current:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[trail[index] >> 1]:
                index -= 1
            p = trail[index]
            index -= 1
            c = reason[p >> 1]
            seen[p >> 1] = False
            counter -= 1
            if counter == 0:
                break
        learnt[0] = p ^ 1

        minimized = [learnt[0]]
        for q in learnt[1:]:
            r = reason[q >> 1]
            if r is None or not all(seen[l >> 1] or level[l >> 1] == 0 for l in r.lits[1:]):
                minimized.append(q)
        for q in learnt:
            seen[q >> 1] = False

        if len(minimized) == 1:
            return minimized, 0
        best = max(range(1, len(minimized)), key=lambda i: level[minimized[i] >> 1])
        minimized[1], minimized[best] = minimized[best], minimized[1]
        return minimized, level[minimized[1] >> 1]

    def _locked(self, c):
        first = c.lits[0]
        return self.reason[first >> 1] is c and self.value[first] == 1

    def _reduce_db(self):
        self.learnts.sort(key=lambda c: c.activity)
        threshold = self.cla_inc / max(1, len(self.learnts))
        half = len(self.learnts) // 2
        kept = []
        for position, c in enumerate(self.learnts):
            if len(c.lits) > 2 and not self._locked(c) and (position < half or c.activity < threshold):
                c.deleted = True
            else:
                kept.append(c)
        logger.debug("learnt clause database reduced from %d to %d", len(self.learnts), len(kept))
        self.learnts = kept

    # -- search ----------------------------------------------------------

    def probe(self, variables):
        """
        Failed-literal probing at level 0: a literal whose assignment
        propagates to a conflict is fixed to its negation. Returns ``False``
        when the formula turns out unsatisfiable.
        """
        self._cancel_until(0)
        if not self.ok or self._propagate() is not None:
            self.ok = False
            return False
        for var in variables:
            if var > self.num_vars:
                continue
            for index in (2 * var, 2 * var + 1):
                if self.value[index] != 0:
                    break
                self.trail_lim.append(len(self.trail))
                self._enqueue(index, None)
                confl = self._propagate()
                self._cancel_until(0)
                if confl is None:
                    continue
                self.stats["failed_literals"] += 1
                self._enqueue(index ^ 1, None)
                if self._propagate() is not None:
                    self.ok = False
                    return False
                break
        return True

    def _search(self, limit, budget, started, conflicts_before):
        conflicts = 0
        while True:
            confl = self._propagate()
            if confl is not None:
                self.stats["conflicts"] += 1
                conflicts += 1
                if not self.trail_lim:
                    self.ok = False
                    return UNSAT
                learnt, backtrack = self._analyze(confl)
                self._cancel_until(backtrack)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    c = _Clause(learnt, learnt=True)
                    self.learnts.append(c)
                    self._attach(c)
                    self._bump_clause(c)
                    self._enqueue(learnt[0], c)
                self._decay()
                if budget.conflicts is not None and self.stats["conflicts"] - conflicts_before >= budget.conflicts:
                    return UNKNOWN
                if budget.seconds is not None and time.perf_counter() - started >= budget.seconds:
                    return UNKNOWN
                continue
            if conflicts >= limit:
                return None
            if len(self.learnts) - len(self.trail) >= self.max_learnts:
                self._reduce_db()
            var = self._pick_branch()
            if var is None:
                return SAT
            self.stats["decisions"] += 1
            self.trail_lim.append(len(self.trail))
            self._enqueue(2 * var if self.polarity[var] else 2 * var + 1, None)

    def solve(self, budget=None, probe_vars=None):
        """
        Decide the current clause set. ``unknown`` is only returned when a
        budget is given and runs out; a satisfying model is checked against
        every problem clause before it is returned.
        """
        budget = budget or Budget()
        started = time.perf_counter()
        conflicts_before = self.stats["conflicts"]
        self._cancel_until(0)
        status = None
        if not self.ok or self._propagate() is not None:
            self.ok = False
            status = UNSAT
        elif probe_vars and not self.probe(probe_vars):
            status = UNSAT
        if self.max_learnts is None:
            self.max_learnts = max(len(self.clauses) * self.learnt_fraction, 100)
        restarts = 0
        while status is None:
            limit = int(self.restart_first * self.restart_factor ** restarts)
            status = self._search(limit, budget, started, conflicts_before)
            if status is None:
                restarts += 1
                self.stats["restarts"] += 1
                self.max_learnts *= 1.1
                self._cancel_until(0)

        model = None
        if status == SAT:
            model = {var: self.value[2 * var] == 1 for var in range(1, self.num_vars + 1)}
        self._cancel_until(0)
        if model is not None:
            check_model(self.original, self.num_vars, model)
        stats = dict(self.stats, learnts=len(self.learnts), seconds=round(time.perf_counter() - started, 6))
        logger.debug("%s after %d conflicts, %d decisions", status, stats["conflicts"], stats["decisions"])
        return SolveResult(status, model, stats)


def solve_clauses(num_vars, clauses, budget=None, probe_vars=None, **options):
    return CdclSolver(num_vars, clauses, **options).solve(budget, probe_vars)
