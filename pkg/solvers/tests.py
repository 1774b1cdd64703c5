import random
import sys
import tempfile
from io import StringIO
from itertools import product
from pathlib import Path

from django.core.exceptions import ImproperlyConfigured
from django.core.management import CommandError, call_command
from django.test import SimpleTestCase, override_settings, tag
from pysat.solvers import Minisat22

from core.exceptions import SolverError, SolverIntegrityError
from encoding.encoder import encode_problem
from networks.network import BitVector
from prefixes.generators import first_layer_bz
from prefixes.prefix import Prefix

from .cdcl import CdclSolver, solve_clauses
from .external import parse_output, resolve_command, run_external, solve_external
from .results import SAT, UNKNOWN, UNSAT, Budget, SolveResult, check_model
from .sessions import open_session, solve

# Prints the competition answer for a one-variable formula, whatever the file holds.
FAKE_SOLVER = "import sys; print('c fake'); print('s SATISFIABLE'); print('v -1 0')"


def all_inputs(n):
    return [BitVector.from_string("".join(bits)) for bits in product("01", repeat=n)]


def brute_force(num_vars, clauses):
    for values in product((False, True), repeat=num_vars):
        if all(any(values[abs(lit) - 1] == (lit > 0) for lit in clause) for clause in clauses):
            return True
    return False


def random_formula(rng, num_vars, num_clauses, width=3):
    return [
        [rng.choice((1, -1)) * var for var in rng.sample(range(1, num_vars + 1), width)]
        for _ in range(num_clauses)
    ]


class ResultTests(SimpleTestCase):
    def test_model_present_exactly_for_sat(self):
        with self.assertRaises(SolverError):
            SolveResult(SAT)
        with self.assertRaises(SolverError):
            SolveResult(UNSAT, {1: True})
        with self.assertRaises(SolverError):
            SolveResult("maybe")

    def test_check_model(self):
        check_model([[1, 2], [-1]], 2, {1: False, 2: True})
        with self.assertRaises(SolverIntegrityError):
            check_model([[1, 2], [-1]], 2, {1: True, 2: True})
        with self.assertRaises(SolverIntegrityError):
            check_model([[1]], 2, {1: True})

    def test_budget(self):
        self.assertTrue(Budget().unlimited)
        self.assertFalse(Budget(conflicts=10).unlimited)


class CdclTests(SimpleTestCase):
    def test_contradiction(self):
        self.assertEqual(solve_clauses(1, [[1], [-1]]).status, UNSAT)

    def test_small_sat(self):
        result = solve_clauses(2, [[1, 2], [-1]])
        self.assertEqual(result.status, SAT)
        self.assertEqual(result.model, {1: False, 2: True})

    def test_empty_formula(self):
        result = solve_clauses(3, [])
        self.assertTrue(result.is_sat)
        self.assertEqual(len(result.model), 3)

    def test_empty_clause(self):
        self.assertTrue(solve_clauses(1, [[]]).is_unsat)

    def test_invalid_literal(self):
        with self.assertRaises(SolverError):
            solve_clauses(2, [[1, 0]])
        with self.assertRaises(SolverError):
            solve_clauses(1, [[2]])

    def test_agrees_with_truth_tables(self):
        rng = random.Random(3)
        for _ in range(150):
            num_vars = rng.randint(3, 8)
            clauses = random_formula(rng, num_vars, rng.randint(1, 5 * num_vars))
            result = solve_clauses(num_vars, clauses)
            self.assertEqual(result.is_sat, brute_force(num_vars, clauses), clauses)
            if result.is_sat:
                check_model(clauses, num_vars, result.model)

    def test_pigeonhole_is_unsat(self):
        holes = 4
        var = lambda p, h: p * holes + h + 1  # noqa: E731
        clauses = [[var(p, h) for h in range(holes)] for p in range(holes + 1)]
        for h in range(holes):
            for p in range(holes + 1):
                for q in range(p + 1, holes + 1):
                    clauses.append([-var(p, h), -var(q, h)])
        self.assertTrue(solve_clauses((holes + 1) * holes, clauses).is_unsat)

    def test_conflict_budget(self):
        holes = 7
        var = lambda p, h: p * holes + h + 1  # noqa: E731
        clauses = [[var(p, h) for h in range(holes)] for p in range(holes + 1)]
        for h in range(holes):
            for p in range(holes + 1):
                for q in range(p + 1, holes + 1):
                    clauses.append([-var(p, h), -var(q, h)])
        result = solve_clauses((holes + 1) * holes, clauses, Budget(conflicts=5))
        self.assertEqual(result.status, UNKNOWN)
        self.assertIsNone(result.model)

    def test_incremental_clauses(self):
        solver = CdclSolver(3, [[1, 2, 3]])
        self.assertTrue(solver.solve().is_sat)
        solver.add_clauses([[-1], [-2]])
        result = solver.solve()
        self.assertEqual(result.model[3], True)
        solver.add_clauses([[-3]])
        self.assertTrue(solver.solve().is_unsat)

    def test_new_variables_between_calls(self):
        solver = CdclSolver(1, [[1]])
        solver.add_clauses([[-1, 2]], 2)
        self.assertEqual(solver.solve().model, {1: True, 2: True})

    def test_probing(self):
        clauses = [[-1, 2], [-1, -2], [1, 3]]
        result = solve_clauses(3, clauses, probe_vars=[1, 2, 3])
        self.assertTrue(result.is_sat)
        self.assertFalse(result.model[1])
        self.assertGreaterEqual(result.stats["failed_literals"], 1)

    def test_seed_is_deterministic(self):
        rng = random.Random(11)
        clauses = random_formula(rng, 30, 100)
        first = solve_clauses(30, clauses, seed=5)
        second = solve_clauses(30, clauses, seed=5)
        self.assertEqual(first.model, second.model)


class SessionTests(SimpleTestCase):
    def test_four_channels_depth_two_unsat(self):
        inst = encode_problem(4, 2, Prefix.empty(4), all_inputs(4))
        self.assertTrue(solve(inst).is_unsat)

    def test_four_channels_depth_three_sat(self):
        inst = encode_problem(4, 3, first_layer_bz(4), all_inputs(4))
        self.assertTrue(solve(inst, probe=True).is_sat)

    def test_session_grows(self):
        inst = encode_problem(3, 2, Prefix.empty(3))
        session = open_session(inst)
        self.assertTrue(session.solve().is_sat)
        added = inst.add_inputs(all_inputs(3))
        session.add_clauses(added, inst.num_vars)
        self.assertTrue(session.solve().is_unsat)

    @tag("slow")
    def test_five_channels_depth_four_unsat_after_bz(self):
        inst = encode_problem(5, 4, first_layer_bz(5), all_inputs(5))
        self.assertTrue(solve(inst).is_unsat)


class ExternalTests(SimpleTestCase):
    def test_parse_sat(self):
        status, model = parse_output("c hello\ns SATISFIABLE\nv 1 -2\nv 3 0\n", 4)
        self.assertEqual(status, SAT)
        self.assertEqual(model, {1: True, 2: False, 3: True, 4: False})

    def test_parse_unsat(self):
        self.assertEqual(parse_output("s UNSATISFIABLE\n", 2), (UNSAT, None))

    def test_parse_errors(self):
        with self.assertRaises(SolverError):
            parse_output("c nothing\n", 1)
        with self.assertRaises(SolverError):
            parse_output("s PERHAPS\n", 1)
        with self.assertRaises(SolverError):
            parse_output("s SATISFIABLE\nv 5 0\n", 2)

    @override_settings(SORTNET={"EXTERNAL_SOLVER": None})
    def test_missing_command(self):
        with self.assertRaises(ImproperlyConfigured):
            resolve_command()

    def test_command_is_split(self):
        self.assertEqual(resolve_command("kissat -q --relaxed"), ["kissat", "-q", "--relaxed"])

    def test_command_not_found(self):
        with self.assertRaises(ImproperlyConfigured):
            run_external(1, [[1]], "/nonexistent/solver-binary")

    def test_fake_solver(self):
        result = run_external(1, [[-1]], [sys.executable, "-c", FAKE_SOLVER])
        self.assertEqual(result.status, SAT)
        self.assertEqual(result.model, {1: False})

    def test_fake_solver_wrong_model(self):
        with self.assertRaises(SolverIntegrityError):
            run_external(1, [[1]], [sys.executable, "-c", FAKE_SOLVER])


class SolveCommandTests(SimpleTestCase):
    def test_dimacs_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "f.cnf"
            path.write_text("p cnf 2 2\n1 2 0\n-1 0\n")
            out = StringIO()
            call_command("solve", str(path), "--competition", stdout=out)
            self.assertEqual(out.getvalue().splitlines(), ["s SATISFIABLE", "v -1 2", "v 0"])

    def test_problem_unsat(self):
        out = StringIO()
        call_command("solve", "-n", "4", "-d", "2", "--initial", "20", "--expect", "unsat", stdout=out)
        self.assertIn("UNSAT", out.getvalue())

    def test_problem_sat_prints_network(self):
        out = StringIO()
        call_command("solve", "-n", "3", "-d", "3", "--initial", "8", stdout=out)
        self.assertIn("the network sorts all inputs", out.getvalue())

    def test_expect_mismatch(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "f.cnf"
            path.write_text("p cnf 1 2\n1 0\n-1 0\n")
            with self.assertRaises(CommandError) as ctx:
                call_command("solve", str(path), "--expect", "sat", stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 1)

    def test_file_and_problem_together(self):
        with self.assertRaises(CommandError) as ctx:
            call_command("solve", "x.cnf", "-n", "3", "-d", "2", stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 2)

    def test_command_without_external(self):
        with self.assertRaises(CommandError) as ctx:
            call_command("solve", "-n", "3", "-d", "2", "--command", "kissat", stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 2)


class ReferenceSolverTests(SimpleTestCase):
    @tag("slow")
    def test_agrees_with_minisat(self):
        rng = random.Random(17)
        for _ in range(1000):
            num_vars = rng.randint(3, 20)
            clauses = random_formula(rng, num_vars, rng.randint(1, 5 * num_vars))
            with Minisat22(bootstrap_with=clauses) as reference:
                expected = reference.solve()
            self.assertEqual(solve_clauses(num_vars, clauses).is_sat, expected, clauses)


MINISAT_WRAPPER = """\
import sys

from pysat.formula import CNF
from pysat.solvers import Minisat22

formula = CNF(from_file=sys.argv[1])
with Minisat22(bootstrap_with=formula.clauses) as solver:
    if solver.solve():
        print("s SATISFIABLE")
        print("v " + " ".join(str(lit) for lit in solver.get_model()) + " 0")
    else:
        print("s UNSATISFIABLE")
"""


class ExternalAgreementTests(SimpleTestCase):
    """A real DIMACS solver process behind the external adapter."""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.tmp = tempfile.TemporaryDirectory()
        script = Path(cls.tmp.name) / "minisat_wrapper.py"
        script.write_text(MINISAT_WRAPPER)
        cls.command = [sys.executable, str(script)]

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()
        super().tearDownClass()

    def assert_agree(self, count, seed):
        rng = random.Random(seed)
        for _ in range(count):
            # 85 clauses over 20 variables sits near the 3-SAT phase transition
            clauses = random_formula(rng, 20, 85)
            external = run_external(20, clauses, self.command)
            self.assertEqual(external.status, solve_clauses(20, clauses).status, clauses)

    def test_unsat_pair(self):
        result = run_external(1, [[1], [-1]], self.command)
        self.assertEqual(result.status, UNSAT)
        self.assertIsNone(result.model)

    def test_sat_model_is_checked(self):
        result = run_external(2, [[1, 2], [-1]], self.command)
        self.assertEqual(result.model, {1: False, 2: True})

    def test_agrees_with_internal_solver(self):
        self.assert_agree(20, seed=7)

    @tag("slow")
    def test_agrees_with_internal_solver_near_phase_transition(self):
        self.assert_agree(200, seed=7)

    def test_problem_instances_through_external_backend(self):
        unsat = encode_problem(4, 2, Prefix.empty(4), all_inputs(4))
        self.assertTrue(solve(unsat, backend="external", command=self.command).is_unsat)
        sat = encode_problem(4, 3, first_layer_bz(4), all_inputs(4))
        self.assertTrue(solve(sat, backend="external", command=self.command).is_sat)

    def test_solve_external(self):
        inst = encode_problem(3, 2, Prefix.empty(3), all_inputs(3))
        self.assertTrue(solve_external(inst, self.command).is_unsat)
