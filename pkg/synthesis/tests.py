import json
import tempfile
from io import StringIO
from pathlib import Path
from unittest import mock

from django.core.exceptions import ValidationError
from django.core.management import CommandError, call_command
from django.test import SimpleTestCase, TestCase, tag

from core.cli import SOUNDNESS_FAILURE, USAGE_ERROR
from core.exceptions import EncodingError, NetworkError, SortnetError
from networks.network import BitVector, ComparatorNetwork, is_sorted
from networks.simulation import apply_network, verify_sorting
from prefixes.generators import first_layer_bz, first_layer_pb
from prefixes.prefix import Prefix
from reports.models import ProofRun
from solvers.results import Budget, SolveResult

from .counterexamples import find_counterexample, find_counterexamples, initial_inputs, parse_strategy
from .loop import (
    FOUND,
    NO_NETWORK,
    UNKNOWN,
    LoopConfig,
    LoopState,
    SynthesisOutcome,
    fresh_resolve,
    resume,
    synthesize,
)
from .lower_bounds import (
    INCONCLUSIVE,
    NETWORK_FOUND,
    NONE_EXTENDS,
    LowerBoundReport,
    PrefixRecord,
    lower_bound_prefixes,
    prove_lower_bound,
)

FOUR = ComparatorNetwork.build(4, [[(1, 2), (3, 4)], [(1, 3), (2, 4)], [(2, 3)]])

OPTIMAL_DEPTHS = {2: 1, 3: 3, 4: 3, 5: 5, 6: 5, 7: 6, 8: 6}


def bv(text):
    return BitVector.from_string(text)


def record(verdict):
    return PrefixRecord("abc", "bz", {}, verdict, 1, 0, 0.0)


class CounterexampleTests(SimpleTestCase):
    def test_smallest_window_first(self):
        self.assertEqual(find_counterexample(ComparatorNetwork.empty(3)), bv("010"))

    def test_sorting_network_has_none(self):
        self.assertIsNone(find_counterexample(FOUR))

    def test_exclude(self):
        found = find_counterexample(ComparatorNetwork.empty(3), exclude=[bv("010")])
        self.assertEqual(found, bv("101"))

    def test_batch_is_ranked(self):
        found = find_counterexamples(ComparatorNetwork.empty(3), count=10)
        self.assertEqual([str(x) for x in found], ["010", "101", "100", "110"])

    def test_initial_inputs(self):
        self.assertEqual(initial_inputs(3, Prefix.empty(3), 2), [bv("010"), bv("101")])
        self.assertEqual(initial_inputs(3, Prefix.empty(3), 0), [])

    def test_initial_inputs_see_the_prefix(self):
        inputs = initial_inputs(4, first_layer_pb(4), 100)
        self.assertEqual(len(inputs), 4)
        self.assertFalse(any(is_sorted(apply_network(first_layer_pb(4).network, x)) for x in inputs))

    def test_random_strategy_is_reproducible(self):
        first = initial_inputs(5, Prefix.empty(5), 6, "random(4)")
        self.assertEqual(first, initial_inputs(5, Prefix.empty(5), 6, "random(4)"))
        self.assertEqual(len(set(first)), 6)

    def test_parse_strategy(self):
        self.assertEqual(parse_strategy("random(12)"), ("random", 12))
        self.assertEqual(parse_strategy("random", 3), ("random", 3))
        with self.assertRaises(SortnetError):
            parse_strategy("largest-first")


class LoopTests(SimpleTestCase):
    def test_two_channels(self):
        outcome = synthesize(2, 1)
        self.assertEqual(outcome.verdict, FOUND)
        self.assertEqual(outcome.network, ComparatorNetwork.build(2, [[(1, 2)]]))
        self.assertEqual(outcome.inputs, [bv("10")])
        self.assertEqual(outcome.iterations, 2)

    def test_four_channels_depth_three(self):
        outcome = synthesize(4, 3, first_layer_bz(4))
        self.assertEqual(outcome.verdict, FOUND)
        self.assertTrue(verify_sorting(outcome.network).is_sorting)
        self.assertEqual(outcome.network.depth, 3)
        self.assertEqual(outcome.network.head(1), first_layer_bz(4).network)

    def test_four_channels_depth_two(self):
        outcome = synthesize(4, 2, first_layer_bz(4))
        self.assertEqual(outcome.verdict, NO_NETWORK)
        self.assertIsNone(outcome.network)
        self.assertTrue(fresh_resolve(outcome).is_unsat)

    def test_prefix_already_sorting(self):
        outcome = synthesize(2, 1, first_layer_bz(2))
        self.assertEqual(outcome.verdict, FOUND)
        self.assertEqual(outcome.iterations, 1)

    def test_explicit_initial_inputs(self):
        outcome = synthesize(3, 3, initial=[bv("010"), bv("101")])
        self.assertEqual(outcome.verdict, FOUND)
        self.assertEqual(outcome.inputs[:2], [bv("010"), bv("101")])

    def test_reencoding_and_batches_reach_the_same_verdict(self):
        for config in (LoopConfig(reencode_every=1), LoopConfig(batch_size=3), LoopConfig(mode="original")):
            self.assertEqual(synthesize(4, 2, first_layer_pb(4), config=config).verdict, NO_NETWORK)
            self.assertEqual(synthesize(4, 3, first_layer_pb(4), config=config).verdict, FOUND)

    def test_budget_exhaustion(self):
        config = LoopConfig(budget=Budget(seconds=0.0))
        outcome = synthesize(6, 4, first_layer_bz(6), initial=20, config=config)
        self.assertEqual(outcome.verdict, UNKNOWN)

    def test_invalid_problems(self):
        with self.assertRaises(NetworkError):
            synthesize(4, 3, first_layer_bz(5))
        with self.assertRaises(NetworkError):
            synthesize(4, 1, Prefix(FOUR))
        with self.assertRaises(EncodingError):
            synthesize(3, 3, initial=[bv("010"), bv("010")])
        with self.assertRaises(EncodingError):
            LoopConfig(mode="fancy")
        with self.assertRaises(EncodingError):
            LoopConfig(batch_size=0)

    def test_outcome_invariant(self):
        with self.assertRaises(EncodingError):
            SynthesisOutcome(FOUND, None, 1, [], 0.0)
        with self.assertRaises(EncodingError):
            SynthesisOutcome(NO_NETWORK, FOUR, 1, [], 0.0)

    @tag("slow")
    def test_five_channels(self):
        self.assertEqual(synthesize(5, 5, first_layer_bz(5)).verdict, FOUND)
        self.assertEqual(synthesize(5, 4, first_layer_bz(5)).verdict, NO_NETWORK)

    @tag("slow")
    def test_optimal_depths_up_to_eight(self):
        for n, depth in OPTIMAL_DEPTHS.items():
            outcome = synthesize(n, depth, first_layer_bz(n))
            self.assertEqual(outcome.verdict, FOUND, n)
            self.assertTrue(verify_sorting(outcome.network).is_sorting, n)
            if depth > 1:
                self.assertEqual(prove_lower_bound(n, depth - 1).verdict, NONE_EXTENDS, n)

    @tag("slow")
    def test_ten_channels_needs_few_inputs(self):
        outcome = synthesize(10, 7, first_layer_pb(10))
        self.assertEqual(outcome.verdict, FOUND)
        self.assertTrue(verify_sorting(outcome.network).is_sorting)
        self.assertLess(len(outcome.inputs), 300)


class LoopStateTests(SimpleTestCase):
    def test_save_and_load(self):
        state = LoopState(4, 3, first_layer_bz(4), "original", [bv("0010"), bv("1001")], 5)
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "state.json"
            state.save(path)
            loaded = LoopState.load(path)
        self.assertEqual(loaded.to_dict(), state.to_dict())

    def test_resume_keeps_inputs_and_mode(self):
        state = LoopState(4, 3, first_layer_bz(4), "original", [bv("0010")], 1)
        outcome = resume(state)
        self.assertEqual(outcome.verdict, FOUND)
        self.assertEqual(outcome.inputs[0], bv("0010"))
        self.assertEqual(outcome.state.mode, "original")
        self.assertGreater(outcome.iterations, 1)

    def test_malformed_state(self):
        with self.assertRaises(ValidationError):
            LoopState.from_dict({"channels": 4})
        data = LoopState(3, 3, Prefix.empty(3), "improved", [bv("010")]).to_dict()
        data["inputs"] = ["010", "010"]
        with self.assertRaises(ValidationError):
            LoopState.from_dict(data)
        data["inputs"] = ["0101"]
        with self.assertRaises(ValidationError):
            LoopState.from_dict(data)


class LowerBoundTests(SimpleTestCase):
    def test_prefix_sets(self):
        self.assertEqual(lower_bound_prefixes(4), [first_layer_bz(4)])
        self.assertTrue(all(p.depth == 2 for p in lower_bound_prefixes(5)))

    def test_four_channels(self):
        report = prove_lower_bound(4, 2)
        self.assertEqual(report.verdict, NONE_EXTENDS)
        self.assertEqual(len(report.records), 1)
        self.assertIn("covers every sorting network", report.assumptions[0])
        self.assertEqual(prove_lower_bound(4, 3).verdict, NETWORK_FOUND)

    def test_six_channels_depth_four(self):
        report = prove_lower_bound(6, 4)
        self.assertEqual(report.verdict, NONE_EXTENDS)
        self.assertTrue(all(r.verdict == NO_NETWORK for r in report.records))

    @tag("slow")
    def test_parallel_workers(self):
        self.assertEqual(prove_lower_bound(5, 4, workers=2).verdict, NONE_EXTENDS)

    def test_verdict_aggregation(self):
        report = LowerBoundReport(4, 2, "improved", "internal")
        self.assertEqual(report.verdict, INCONCLUSIVE)
        report.records = [record(NO_NETWORK), record(NO_NETWORK)]
        self.assertEqual(report.verdict, NONE_EXTENDS)
        report.records.append(record(FOUND))
        self.assertEqual(report.verdict, NETWORK_FOUND)
        report.records.append(record(UNKNOWN))
        self.assertEqual(report.verdict, INCONCLUSIVE)

    def test_report_table(self):
        report = LowerBoundReport(4, 2, "improved", "internal", [record(NO_NETWORK)])
        table = report.table()
        self.assertIn("abc", table)
        self.assertTrue(table.rstrip().endswith(report.summary))
        self.assertEqual(report.as_dict()["prefixes"][0]["verdict"], NO_NETWORK)

    def test_invalid_arguments(self):
        with self.assertRaises(NetworkError):
            prove_lower_bound(4, 2, [])
        with self.assertRaises(NetworkError):
            prove_lower_bound(4, 2, workers=0)


class SynthesizeCommandTests(SimpleTestCase):
    def test_unsat(self):
        out = StringIO()
        call_command("synthesize", "-n", "4", "-d", "2", "--expect", "unsat", stdout=out)
        self.assertIn("UNSAT: no sorting network on 4 channels of depth 2 extends the prefix", out.getvalue())

    def test_sat_writes_network(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "s4.json"
            out = StringIO()
            call_command(
                "synthesize", "-n", "4", "-d", "3", "--prefix", "bz", "-o", str(path), stdout=out
            )
            self.assertIn("SAT: sorting network on 4 channels of depth 3 found", out.getvalue())
            data = json.loads(path.read_text())
        self.assertEqual(data["channels"], 4)
        self.assertEqual(len(data["layers"]), 3)

    def test_check_re_solves(self):
        out = StringIO()
        call_command("synthesize", "-n", "3", "-d", "2", "--check", stdout=out)
        self.assertIn("fresh re-solve: unsat", out.getvalue())

    def test_check_contradiction_is_not_a_usage_error(self):
        with mock.patch(
            "synthesis.management.commands.synthesize.fresh_resolve",
            return_value=SolveResult(UNKNOWN),
        ):
            with self.assertRaises(CommandError) as ctx:
                call_command("synthesize", "-n", "3", "-d", "2", "--check", stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, SOUNDNESS_FAILURE)
        self.assertNotEqual(SOUNDNESS_FAILURE, USAGE_ERROR)
        self.assertIn("unsound", str(ctx.exception))

    def test_save_and_resume(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "state.json"
            call_command(
                "synthesize", "-n", "4", "-d", "2", "--prefix", "pb", "--save-state", str(path),
                stdout=StringIO(),
            )
            out = StringIO()
            call_command("synthesize", "--resume", str(path), "--expect", "unsat", stdout=out)
        self.assertIn("UNSAT", out.getvalue())

    def test_resume_with_problem_flags(self):
        with self.assertRaises(CommandError) as ctx:
            call_command("synthesize", "--resume", "state.json", "-n", "4", stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 2)

    def test_expect_mismatch(self):
        with self.assertRaises(CommandError) as ctx:
            call_command("synthesize", "-n", "3", "-d", "3", "--expect", "unsat", stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 1)

    def test_external_without_command(self):
        with self.settings(SORTNET={"EXTERNAL_SOLVER": ""}):
            with self.assertRaises(CommandError) as ctx:
                call_command("synthesize", "-n", "3", "-d", "3", "--solver", "external", stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 2)

    def test_bad_strategy(self):
        with self.assertRaises(CommandError) as ctx:
            call_command("synthesize", "-n", "3", "-d", "3", "--strategy", "biggest", stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 2)


class ProveCommandTests(TestCase):
    def test_four_channels(self):
        out = StringIO()
        call_command("prove", "-n", "4", "-d", "2", "--expect", "no-network", stdout=out)
        self.assertIn("no sorting network of depth 2 extends any given prefix", out.getvalue())
        self.assertFalse(ProofRun.objects.exists())

    def test_record_and_export(self):
        with tempfile.TemporaryDirectory() as tmp:
            csv_path = Path(tmp) / "run.csv"
            call_command("prove", "-n", "4", "-d", "2", "--csv", str(csv_path), stdout=StringIO())
            text = csv_path.read_text()
        run = ProofRun.objects.get()
        self.assertEqual(run.verdict, NONE_EXTENDS)
        self.assertEqual(run.prefixes.count(), 1)
        self.assertIn("Prefix,Label,Verdict,Iterations,Inputs,Seconds", text)
        self.assertIn("Assumption,", text)

    def test_prefix_list_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "prefixes.json"
            path.write_text(json.dumps([
                {"channels": 4, "layers": [[[1, 2], [3, 4]]], "label": "pb"},
                {"channels": 4, "layers": [[[1, 4], [2, 3]]], "label": "bz"},
            ]))
            out = StringIO()
            call_command("prove", "-n", "4", "-d", "3", "--prefixes", str(path), "--json", stdout=out)
        text = out.getvalue()
        payload = json.loads(text[text.index("{\n"):])
        self.assertEqual(payload["verdict"], NETWORK_FOUND)
        self.assertEqual(len(payload["prefixes"]), 2)

    def test_channel_mismatch(self):
        with self.assertRaises(CommandError) as ctx:
            call_command("prove", "-n", "5", "-d", "3", "--prefixes", "catalog://s4d3", stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 2)
