import random
from itertools import permutations, product
from io import StringIO

from django.core.exceptions import ValidationError
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings, tag

from core.exceptions import ExhaustiveLimitError, LayerConflictError, NetworkError
from prefixes.generators import first_layer_bz, first_layer_pb, green_filter

from .constructions import batcher_network
from .network import BitVector, Comparator, ComparatorNetwork, Layer, is_sorted, window
from .rendering import render
from .serialization import dumps, loads, network_to_dict
from .simulation import (
    apply_network,
    apply_to_sequence,
    output_set,
    output_words,
    verify_sorting,
    window_sum,
)
from .transform import find_untangling_permutation, from_comparators, permute_channels, untangle

FOUR = ComparatorNetwork.build(4, [[(1, 2), (3, 4)], [(1, 3), (2, 4)], [(2, 3)]])

PB_WINDOW_SUMS = [0, 5, 12, 44, 84, 233, 408, 1016, 1704, 4013, 6564, 14948, 24060, 53585, 85296, 186992]
BZ_WINDOW_SUMS = [0, 4, 10, 36, 72, 196, 358, 876, 1524, 3532, 5962, 13380, 22128, 48628, 79246, 171612]


def bv(text):
    return BitVector.from_string(text)


class DataModelTests(SimpleTestCase):
    def test_layer_rejects_channel_used_twice(self):
        with self.assertRaises(LayerConflictError):
            Layer((Comparator(1, 2), Comparator(2, 3)))

    def test_comparator_rejects_self_loop(self):
        with self.assertRaises(NetworkError):
            Comparator(3, 3)

    def test_comparator_beyond_channels(self):
        with self.assertRaises(NetworkError):
            ComparatorNetwork.build(3, [[(1, 4)]])

    def test_channel_limit(self):
        ComparatorNetwork(64)
        with self.assertRaises(NetworkError):
            ComparatorNetwork(65)

    @override_settings(SORTNET={"MAX_CHANNELS": 8})
    def test_channel_limit_read_from_settings(self):
        ComparatorNetwork(8)
        with self.assertRaises(NetworkError):
            ComparatorNetwork(9)

    def test_depth_and_size(self):
        self.assertEqual(FOUR.depth, 3)
        self.assertEqual(FOUR.size, 5)

    def test_layers_compare_equal_regardless_of_order(self):
        self.assertEqual(Layer(((3, 4), (1, 2))), Layer(((1, 2), (3, 4))))

    def test_bitvector_channel_one_is_first_character(self):
        x = bv("1000")
        self.assertEqual(x.bits, 1)
        self.assertEqual(x.channel(1), 1)
        self.assertEqual(str(x), "1000")

    def test_sorted_copy(self):
        self.assertEqual(str(bv("1010").sorted_copy()), "0011")


class SortednessAndWindowTests(SimpleTestCase):
    def test_is_sorted(self):
        self.assertTrue(is_sorted(bv("0011")))
        self.assertFalse(is_sorted(bv("0101")))
        self.assertTrue(is_sorted(BitVector(0, 0)))

    def test_window_examples(self):
        w = window(bv("010"))
        self.assertEqual((w.a, w.b, w.size), (1, 0, 2))
        w = window(bv("110"))
        self.assertEqual((w.a, w.b, w.size), (0, 0, 3))
        self.assertEqual(window(bv("0011")).size, 0)

    def test_window_of_constant_vectors(self):
        zeros, ones = window(bv("0000")), window(bv("1111"))
        self.assertEqual((zeros.a, zeros.b, zeros.size), (4, 0, 0))
        self.assertEqual((ones.a, ones.b, ones.size), (0, 4, 0))

    def test_window_size_zero_iff_sorted(self):
        for bits in range(1 << 5):
            x = BitVector(5, bits)
            self.assertEqual(window(x).size == 0, is_sorted(x), str(x))

    def test_window_is_maximal(self):
        for bits in range(1 << 5):
            x = BitVector(5, bits)
            w = window(x)
            if w.size:
                self.assertEqual(x.channel(w.a + 1), 1)
                self.assertEqual(x.channel(5 - w.b), 0)

    def test_window_channels(self):
        self.assertEqual(list(window(bv("0100")).channels(4)), [2, 3, 4])
        self.assertEqual(list(window(bv("0011")).channels(4)), [])


class SimulationTests(SimpleTestCase):
    def test_apply_example(self):
        self.assertEqual(str(apply_network(FOUR, bv("1010"))), "0011")

    def test_zero_input_is_fixed(self):
        self.assertEqual(str(apply_network(FOUR, bv("0000"))), "0000")

    def test_empty_network_is_identity(self):
        self.assertEqual(str(apply_network(ComparatorNetwork.empty(4), bv("1010"))), "1010")

    def test_width_mismatch(self):
        with self.assertRaises(NetworkError):
            apply_network(FOUR, bv("101"))

    def test_twisted_comparator_rejected_when_standard_required(self):
        twisted = ComparatorNetwork.build(2, [[(2, 1)]])
        with self.assertRaises(NetworkError):
            apply_network(twisted, bv("10"), standard_only=True)

    def test_bit_sliced_outputs_match_single_evaluation(self):
        net = batcher_network(7)
        words = output_words(net)
        for bits in range(1 << 7):
            self.assertEqual(int(words[bits]), apply_network(net, BitVector(7, bits)).bits)

    def test_verify_small_network(self):
        self.assertTrue(verify_sorting(FOUR).is_sorting)
        self.assertEqual(verify_sorting(FOUR).inputs_checked, 16)

    def test_verify_empty_network_counterexample(self):
        verdict = verify_sorting(ComparatorNetwork.empty(2))
        self.assertFalse(verdict.is_sorting)
        self.assertEqual(str(verdict.counterexample), "10")

    def test_verify_respects_limit(self):
        with self.assertRaises(ExhaustiveLimitError):
            verify_sorting(batcher_network(9), limit=8)

    @override_settings(SORTNET={"EXHAUSTIVE_LIMIT": 6})
    def test_limit_read_from_settings(self):
        with self.assertRaises(ExhaustiveLimitError):
            verify_sorting(batcher_network(7))

    def test_prefix_zeros_and_ones_stay_in_place(self):
        rng = random.Random(3)
        net = batcher_network(8)
        for _ in range(50):
            x = BitVector(8, rng.randrange(1 << 8))
            w = window(x)
            if not w.size:
                continue
            for depth in range(1, net.depth + 1):
                channels = apply_network(net.head(depth), x).channels()
                self.assertEqual(channels[: w.a], [0] * w.a)
                self.assertEqual(channels[8 - w.b:], [1] * w.b)

    def test_monotone(self):
        rng = random.Random(5)
        net = FOUR.head(2)
        for _ in range(200):
            x = rng.randrange(16)
            y = x | rng.randrange(16)
            fx = apply_network(net, BitVector(4, x)).bits
            fy = apply_network(net, BitVector(4, y)).bits
            self.assertEqual(fx & ~fy, 0)

    def test_integer_sequences_agree_with_zero_one_verdict(self):
        rng = random.Random(11)
        for net in (FOUR, batcher_network(6), FOUR.head(2), first_layer_bz(6).network):
            sorts_all = True
            for _ in range(1000):
                values = [rng.randrange(100) for _ in range(net.channels)]
                if apply_to_sequence(net, values) != sorted(values):
                    sorts_all = False
                    break
            self.assertEqual(sorts_all, verify_sorting(net).is_sorting, str(net))

    def test_integer_counterexample_from_binary_counterexample(self):
        net = FOUR.head(2)
        verdict = verify_sorting(net)
        values = verdict.counterexample.channels()
        self.assertNotEqual(apply_to_sequence(net, values), sorted(values))


class OutputSetTests(SimpleTestCase):
    def test_empty_network_outputs_everything(self):
        self.assertEqual(len(output_set(ComparatorNetwork.empty(2))), 4)

    def test_green_filter_four(self):
        outputs = {str(x) for x in output_set(green_filter(4).network)}
        self.assertEqual(outputs, {"0000", "0001", "0011", "0101", "0111", "1111"})

    def test_green_filter_eight(self):
        self.assertEqual(len(output_set(green_filter(8).network)), 20)

    def test_window_sum_of_sorting_network(self):
        self.assertEqual(window_sum(FOUR), 0)

    def test_window_sums_small(self):
        for n in range(2, 12):
            self.assertEqual(window_sum(first_layer_pb(n).network), PB_WINDOW_SUMS[n - 2], f"pb {n}")
            self.assertEqual(window_sum(first_layer_bz(n).network), BZ_WINDOW_SUMS[n - 2], f"bz {n}")

    @tag("slow")
    def test_window_sums_large(self):
        for n in range(12, 18):
            self.assertEqual(window_sum(first_layer_pb(n).network), PB_WINDOW_SUMS[n - 2], f"pb {n}")
            self.assertEqual(window_sum(first_layer_bz(n).network), BZ_WINDOW_SUMS[n - 2], f"bz {n}")


class TransformTests(SimpleTestCase):
    def test_identity_permutation(self):
        self.assertEqual(permute_channels(FOUR, (1, 2, 3, 4)), FOUR)

    def test_swap_twists_comparator(self):
        net = permute_channels(ComparatorNetwork.build(2, [[(1, 2)]]), (2, 1))
        comparator = net.layers[0].comparators[0]
        self.assertEqual((comparator.lo, comparator.hi), (2, 1))
        self.assertFalse(net.is_standard)

    def test_untangle_twisted_comparator(self):
        net = untangle(ComparatorNetwork.build(2, [[(2, 1)]]))
        self.assertEqual(network_to_dict(net)["layers"], [[[1, 2]]])

    def test_untangle_fixes_standard_networks(self):
        self.assertEqual(untangle(FOUR), FOUR)

    def test_not_a_permutation(self):
        with self.assertRaises(NetworkError):
            permute_channels(FOUR, (1, 1, 2, 3))

    def test_reversal_permutes_outputs(self):
        reversal = (4, 3, 2, 1)
        permuted = permute_channels(FOUR, reversal)
        for bits in range(16):
            x = BitVector(4, bits)
            values = x.channels()
            moved = [0] * 4
            for channel, value in enumerate(values, start=1):
                moved[reversal[channel - 1] - 1] = value
            expected = [0] * 4
            for channel, value in enumerate(apply_to_sequence(FOUR, values), start=1):
                expected[reversal[channel - 1] - 1] = value
            self.assertEqual(apply_to_sequence(permuted, moved), expected)

    def test_untangle_after_permute_keeps_sorting_depth_and_size(self):
        for perm in permutations(range(1, 5)):
            net = untangle(permute_channels(FOUR, perm))
            self.assertTrue(net.is_standard)
            self.assertEqual((net.depth, net.size), (FOUR.depth, FOUR.size))
            self.assertTrue(verify_sorting(net).is_sorting, perm)

    def test_untangle_after_permute_six_channels(self):
        net6 = batcher_network(6)
        for perm in permutations(range(1, 7)):
            net = untangle(permute_channels(net6, perm))
            self.assertEqual((net.depth, net.size), (net6.depth, net6.size))
            self.assertTrue(verify_sorting(net).is_sorting, perm)

    def test_pb_and_bz_are_related(self):
        for n in range(2, 9):
            perm = find_untangling_permutation(first_layer_pb(n).network, first_layer_bz(n).network)
            self.assertIsNotNone(perm, n)

    def test_from_comparators_layers_greedily(self):
        net = from_comparators(4, [(1, 2), (3, 4), (1, 3), (2, 4), (2, 3)])
        self.assertEqual(net, FOUR)


class ConstructionTests(SimpleTestCase):
    def test_batcher_sorts(self):
        for n in range(1, 13):
            self.assertTrue(verify_sorting(batcher_network(n)).is_sorting, n)

    def test_batcher_eight_depth(self):
        self.assertEqual(batcher_network(8).depth, 6)


class SerializationTests(SimpleTestCase):
    CANONICAL = '{"channels": 4, "layers": [[[1, 2], [3, 4]], [[1, 3], [2, 4]], [[2, 3]]]}'

    def test_round_trip(self):
        self.assertEqual(dumps(loads(self.CANONICAL)), self.CANONICAL)

    def test_document_shape(self):
        data = network_to_dict(FOUR)
        self.assertEqual(data["channels"], 4)
        self.assertEqual(len(data["layers"]), 3)

    def test_once_violation(self):
        with self.assertRaises(ValidationError):
            loads('{"channels": 3, "layers": [[[1, 2], [2, 3]]]}')

    def test_malformed_documents(self):
        for text in ("[]", "{", '{"channels": "4", "layers": []}', '{"channels": 4, "layers": [[[1]]]}'):
            with self.assertRaises(ValidationError, msg=text):
                loads(text)


class RenderingTests(SimpleTestCase):
    def test_text(self):
        text = render(FOUR, "text")
        self.assertIn("4 channels, depth 3, size 5", text)
        self.assertEqual(text.splitlines()[0][:1], "1")

    def test_svg(self):
        svg = render(FOUR, "svg", "four")
        self.assertTrue(svg.startswith("<svg"))
        self.assertEqual(svg.count("<circle"), 10)
        self.assertIn("<title>four</title>", svg)

    def test_svg_marks_min_end_of_twisted_comparators(self):
        self.assertNotIn('r="6"', render(FOUR, "svg"))
        svg = render(ComparatorNetwork.build(2, [[(2, 1)]]), "svg")
        self.assertEqual(svg.count("<circle"), 3)
        self.assertIn('cy="44" r="6"', svg)

    def test_pdf(self):
        self.assertTrue(render(FOUR, "pdf").startswith(b"%PDF"))

    def test_unknown_format(self):
        with self.assertRaises(ValueError):
            render(FOUR, "png")


class CommandTests(SimpleTestCase):
    def test_verify_catalog_network(self):
        out = StringIO()
        call_command("verify", "catalog://s4d3", stdout=out)
        self.assertIn("sorting network: 4 channels, depth 3", out.getvalue())

    def test_verify_expect_mismatch(self):
        with self.assertRaises(CommandError) as ctx:
            call_command("verify", "catalog://green-4", "--expect", "sorting", stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 1)

    def test_verify_missing_file_is_usage_error(self):
        with self.assertRaises(CommandError) as ctx:
            call_command("verify", "/nonexistent/net.json", stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 2)

    def test_window_sum_command(self):
        out = StringIO()
        call_command("window_sum", "--style", "bz", "-n", "6", stdout=out)
        self.assertEqual(out.getvalue().strip(), "72")

    @tag("slow")
    def test_window_sum_bz_seventeen(self):
        out = StringIO()
        call_command("window_sum", "--style", "bz", "-n", "17", stdout=out)
        self.assertEqual(out.getvalue().strip(), "171612")

    def test_render_text_command(self):
        out = StringIO()
        call_command("render", "catalog://s4d3", stdout=out)
        self.assertIn("depth 3", out.getvalue())

    def test_render_pdf_needs_output(self):
        with self.assertRaises(CommandError):
            call_command("render", "catalog://s4d3", "--format", "pdf", stdout=StringIO())


class ExhaustiveHelpersTests(SimpleTestCase):
    def test_all_inputs_of_sorting_network_sorted(self):
        for bits in product((0, 1), repeat=4):
            self.assertTrue(is_sorted(apply_network(FOUR, BitVector.from_channels(bits))))
