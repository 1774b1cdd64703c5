import json
import random
import tempfile
from io import StringIO
from itertools import product
from pathlib import Path

from django.core.management import call_command
from django.test import SimpleTestCase, tag

from core.exceptions import EncodingError, NetworkError, SolverError
from networks.network import BitVector, ComparatorNetwork, is_sorted
from networks.simulation import apply_network, verify_sorting
from prefixes.generators import first_layer_bz, first_layer_pb
from prefixes.prefix import Prefix
from solvers.cdcl import solve_clauses
from synthesis.counterexamples import initial_inputs

from .dimacs import read_dimacs, write_dimacs
from .encoder import (
    decode_model,
    decode_sidecar,
    encode_problem,
    encode_valid,
    force_network,
    varmap_sidecar,
)
from .varmap import VarMap


def all_inputs(n):
    return [BitVector.from_string("".join(bits)) for bits in product("01", repeat=n)]


def bv(text):
    return BitVector.from_string(text)


def satisfiable(inst, extra=()):
    return solve_clauses(inst.num_vars, list(inst.clauses) + list(extra)).is_sat


class VarMapTests(SimpleTestCase):
    def test_comparator_block_comes_first(self):
        varmap = VarMap(3, 0, 1)
        self.assertEqual(varmap.g, {(1, 1, 2): 1, (1, 1, 3): 2, (1, 2, 3): 3})
        self.assertEqual(varmap.comparator_of(2), (1, 1, 3))

    def test_no_comparators_in_prefix_layers(self):
        varmap = VarMap(4, 1, 2)
        self.assertEqual({k for k, _, _ in varmap.g}, {2})

    def test_single_element_range_is_the_comparator(self):
        varmap = VarMap(3, 0, 1)
        self.assertEqual(varmap.one_down(1, 2, 3), (varmap.g[(1, 2, 3)], []))
        self.assertEqual(varmap.one_up(1, 2, 2), (False, []))

    def test_ranges_are_defined_once(self):
        varmap = VarMap(3, 0, 1)
        var, clauses = varmap.one_down(1, 1, 3)
        self.assertEqual(var, 4)
        self.assertEqual(clauses, [[-4, 1, 2], [4, -1], [4, -2]])
        self.assertEqual(varmap.one_down(1, 1, 3), (4, []))


class ValidTests(SimpleTestCase):
    def test_clause_counts(self):
        for n, expected in ((2, 0), (3, 3), (4, 12)):
            clauses = encode_valid(n, 1, 0, VarMap(n, 0, 1))
            self.assertEqual(len(clauses), expected, n)

    def test_counts_scale_with_free_layers(self):
        self.assertEqual(len(encode_valid(4, 3, 1, VarMap(4, 1, 3))), 24)

    def test_valid_clauses_are_binary_negative(self):
        for clause in encode_valid(5, 1, 0, VarMap(5, 0, 1)):
            self.assertEqual(len(clause), 2)
            self.assertTrue(all(lit < 0 for lit in clause))


class SortsTests(SimpleTestCase):
    def test_two_channels_one_input(self):
        for mode in ("original", "improved"):
            inst = encode_problem(2, 1, Prefix.empty(2), [bv("10")], mode)
            self.assertEqual(inst.clauses, [[1]], mode)

    def test_sorted_input_adds_nothing(self):
        for mode in ("original", "improved"):
            inst = encode_problem(2, 1, Prefix.empty(2), [bv("01")], mode)
            self.assertEqual(inst.clauses, [], mode)
            self.assertEqual(inst.num_vars, 1)

    def test_input_sorted_by_the_prefix_adds_nothing(self):
        inst = encode_problem(4, 3, first_layer_pb(4), [bv("0010"), bv("1011")])
        self.assertEqual(inst.num_clauses, len(encode_valid(4, 3, 1, VarMap(4, 1, 3))))

    def test_values_only_inside_the_window(self):
        inst = encode_problem(4, 3, first_layer_pb(4), [bv("0101")])
        self.assertEqual(set(inst.varmap.v), {(0, 2, 2), (0, 2, 3)})

    def test_no_free_layer_left(self):
        inst = encode_problem(2, 1, Prefix(ComparatorNetwork.build(2, [[(1, 2)]])), [bv("10")])
        self.assertEqual(inst.clauses, [])
        inst = encode_problem(2, 0, Prefix.empty(2), [bv("10")])
        self.assertTrue(inst.trivially_unsat)

    def test_improved_is_smaller(self):
        inputs = all_inputs(5)
        original = encode_problem(5, 4, Prefix.empty(5), inputs, "original")
        improved = encode_problem(5, 4, Prefix.empty(5), inputs, "improved")
        self.assertLess(improved.num_clauses, original.num_clauses)
        self.assertLess(improved.num_literals, original.num_literals)

    def test_modes_agree_on_satisfiability(self):
        cases = [
            (3, 3, Prefix.empty(3), True),
            (3, 2, Prefix.empty(3), False),
            (4, 3, first_layer_bz(4), True),
            (4, 2, first_layer_bz(4), False),
            (4, 2, Prefix.empty(4), False),
        ]
        for n, d, prefix, expected in cases:
            for mode in ("original", "improved"):
                inst = encode_problem(n, d, prefix, all_inputs(n), mode)
                self.assertEqual(satisfiable(inst), expected, (n, d, mode))

    def test_models_decode_to_sorting_networks(self):
        for mode in ("original", "improved"):
            inst = encode_problem(4, 3, first_layer_pb(4), all_inputs(4), mode)
            result = solve_clauses(inst.num_vars, inst.clauses)
            net = decode_model(inst, result.model)
            self.assertEqual(net.head(1), first_layer_pb(4).network)
            self.assertTrue(verify_sorting(net).is_sorting, mode)

    def test_forced_network_satisfiable_iff_it_sorts_the_inputs(self):
        sorting = ComparatorNetwork.build(3, [[(1, 2)], [(2, 3)], [(1, 2)]])
        broken = ComparatorNetwork.build(3, [[(1, 2)], [(1, 3)], [(1, 2)]])
        for mode in ("original", "improved"):
            inst = encode_problem(3, 3, Prefix.empty(3), all_inputs(3), mode)
            self.assertTrue(satisfiable(inst, force_network(inst, sorting)), mode)
            self.assertFalse(satisfiable(inst, force_network(inst, broken)), mode)

    def test_forced_network_partial_input_set(self):
        broken = ComparatorNetwork.build(3, [[(1, 2)], [(1, 3)], [(1, 2)]])
        counterexample = verify_sorting(broken).counterexample
        inst = encode_problem(3, 3, Prefix.empty(3), [counterexample])
        self.assertFalse(satisfiable(inst, force_network(inst, broken)))

    def test_duplicate_input_rejected(self):
        inst = encode_problem(3, 2, Prefix.empty(3), [bv("100")])
        with self.assertRaises(EncodingError):
            inst.add_inputs([bv("100")])

    def test_width_mismatch(self):
        with self.assertRaises(NetworkError):
            encode_problem(3, 2, Prefix.empty(3), [bv("10")])

    def test_argument_errors(self):
        with self.assertRaises(EncodingError):
            encode_problem(3, 2, Prefix.empty(3), mode="fancy")
        with self.assertRaises(EncodingError):
            encode_problem(3, 2, Prefix.empty(4))
        with self.assertRaises(EncodingError):
            encode_problem(4, 1, Prefix(ComparatorNetwork.build(4, [[(1, 2)], [(3, 4)]])))

    def test_add_inputs_returns_new_clauses(self):
        inst = encode_problem(3, 3, Prefix.empty(3))
        before = inst.num_clauses
        added = inst.add_inputs([bv("100"), bv("110")])
        self.assertEqual(inst.num_clauses, before + len(added))
        self.assertEqual(len(inst.inputs), 2)


class DecodeTests(SimpleTestCase):
    def test_decode_single_comparator(self):
        inst = encode_problem(2, 1, Prefix.empty(2), [bv("10")])
        self.assertEqual(decode_model(inst, {1: True}), ComparatorNetwork.build(2, [[(1, 2)]]))
        self.assertEqual(decode_model(inst, [1]), ComparatorNetwork.build(2, [[(1, 2)]]))

    def test_decode_conflicting_model(self):
        inst = encode_problem(3, 1, Prefix.empty(3))
        with self.assertRaises(EncodingError):
            decode_model(inst, {1: True, 2: True, 3: False})

    def test_decode_with_sidecar(self):
        inst = encode_problem(4, 3, first_layer_bz(4), all_inputs(4))
        result = solve_clauses(inst.num_vars, inst.clauses)
        sidecar = json.loads(json.dumps(varmap_sidecar(inst)))
        net = decode_sidecar(sidecar, first_layer_bz(4).network, result.model)
        self.assertEqual(net, decode_model(inst, result.model))

    def test_sidecar_provenance(self):
        inst = encode_problem(3, 2, first_layer_pb(3), [bv("010")])
        data = varmap_sidecar(inst)
        self.assertEqual(data["provenance"]["prefix_label"], "pb")
        self.assertEqual(data["provenance"]["inputs"], ["010"])
        self.assertEqual(data["roles"]["1"], {"role": "g", "layer": 2, "i": 1, "j": 2})

    def test_force_network_completeness(self):
        net = ComparatorNetwork.build(3, [[(1, 2)], [(2, 3)]])
        inst = encode_problem(3, 2, Prefix.empty(3))
        units = force_network(inst, net)
        self.assertEqual(len(units), len(inst.varmap.g))
        self.assertEqual(sorted(u[0] for u in units if u[0] > 0), [inst.varmap.g[(1, 1, 2)], inst.varmap.g[(2, 2, 3)]])

    def test_force_network_needs_the_prefix(self):
        inst = encode_problem(4, 2, first_layer_bz(4))
        with self.assertRaises(EncodingError):
            force_network(inst, ComparatorNetwork.build(4, [[(1, 2)], [(3, 4)]]))


class DimacsTests(SimpleTestCase):
    def test_empty_instance(self):
        inst = encode_problem(1, 1, Prefix.empty(1))
        self.assertIn("p cnf 0 0", write_dimacs(inst))

    def test_round_trip(self):
        inst = encode_problem(4, 3, first_layer_bz(4), all_inputs(4))
        num_vars, clauses = read_dimacs(write_dimacs(inst))
        self.assertEqual(num_vars, inst.num_vars)
        self.assertEqual(clauses, inst.clauses)

    def test_header_counts(self):
        inst = encode_problem(3, 2, Prefix.empty(3), [bv("110")])
        header = [line for line in write_dimacs(inst).splitlines() if line.startswith("p ")]
        self.assertEqual(header, [f"p cnf {inst.num_vars} {inst.num_clauses}"])

    def test_malformed_header(self):
        with self.assertRaises(SolverError):
            read_dimacs("p cnf x 1\n1 0\n")

    def test_variable_beyond_header(self):
        with self.assertRaises(SolverError):
            read_dimacs("p cnf 1 1\n1 2 0\n")

    def test_missing_header_uses_largest_variable(self):
        self.assertEqual(read_dimacs("1 -3 0\n2 0\n"), (3, [[1, -3], [2]]))


class EncodeCommandTests(SimpleTestCase):
    def test_writes_dimacs_and_sidecar(self):
        with tempfile.TemporaryDirectory() as tmp:
            output = Path(tmp) / "s4.cnf"
            out = StringIO()
            call_command(
                "encode", "-n", "4", "-d", "3", "--prefix", "bz", "--initial", "4",
                "-o", str(output), stdout=out,
            )
            self.assertIn("improved encoding, 4 inputs", out.getvalue())
            num_vars, clauses = read_dimacs(output.read_text())
            sidecar = json.loads((Path(tmp) / "s4.cnf.map.json").read_text())
            self.assertEqual(sidecar["variables"], num_vars)
            self.assertEqual(sidecar["provenance"]["prefix_label"], "bz")
            self.assertEqual(len(sidecar["provenance"]["inputs"]), 4)

    def test_stdout_dimacs(self):
        out = StringIO()
        call_command("encode", "-n", "2", "-d", "1", "--initial", "1", stdout=out)
        self.assertEqual(read_dimacs(out.getvalue()), (1, [[1]]))


class EquisatisfiabilityTests(SimpleTestCase):
    def check_random_instances(self, count, seed):
        rng = random.Random(seed)
        for _ in range(count):
            n, d = rng.randint(2, 5), rng.randint(1, 3)
            prefix = rng.choice([Prefix.empty(n), first_layer_pb(n), first_layer_bz(n)])
            if prefix.depth > d:
                prefix = Prefix.empty(n)
            inputs = rng.sample(all_inputs(n), rng.randint(1, 2 ** n))
            verdicts = []
            for mode in ("original", "improved"):
                inst = encode_problem(n, d, prefix, inputs, mode)
                result = solve_clauses(inst.num_vars, inst.clauses)
                verdicts.append(result.is_sat)
                if result.is_sat:
                    net = decode_model(inst, result.model)
                    self.assertTrue(
                        all(is_sorted(apply_network(net, x)) for x in inputs), (n, d, mode, prefix.label)
                    )
            self.assertEqual(verdicts[0], verdicts[1], (n, d, prefix.label, inputs))

    def test_random_small_instances(self):
        self.check_random_instances(60, seed=1)

    @tag("slow")
    def test_many_random_small_instances(self):
        self.check_random_instances(500, seed=2)

    @tag("slow")
    def test_improved_is_smaller_on_ten_channels(self):
        inputs = initial_inputs(10, first_layer_pb(10), 200, "random(7)")
        original = encode_problem(10, 6, first_layer_pb(10), inputs, "original")
        improved = encode_problem(10, 6, first_layer_pb(10), inputs, "improved")
        self.assertLess(improved.num_clauses, original.num_clauses)
        self.assertLess(improved.num_literals, original.num_literals)
