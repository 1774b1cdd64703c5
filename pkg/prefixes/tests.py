import json
from io import StringIO
from itertools import permutations

from django.core.exceptions import ValidationError
from django.core.management import call_command
from django.test import SimpleTestCase, tag

from core.exceptions import NetworkError
from networks.network import ComparatorNetwork
from networks.serialization import network_to_dict
from networks.simulation import output_set, verify_sorting, window_sum

from .enumeration import enumerate_two_layer_prefixes, matchings
from .evolution import EaConfig, evolve, optimize_prefix, prefix_fitness
from .forms import EaConfigForm
from .generators import first_layer_bz, first_layer_pb, green_filter
from .prefix import Prefix, dumps_prefix, loads_prefix


def layers_of(prefix):
    return network_to_dict(prefix.network)["layers"]


def orbit_count(n):
    """Brute-force class count: all permutations that keep the BZ layer, oriented."""
    first = {(i, n + 1 - i) for i in range(1, n // 2 + 1)}
    group = [
        perm for perm in permutations(range(1, n + 1))
        if {(perm[i - 1], perm[j - 1]) for i, j in first} == first
    ]
    classes = set()
    for candidate in matchings(n):
        if first.intersection(candidate):
            continue
        orbit = frozenset(
            tuple(sorted((min(p[i - 1], p[j - 1]), max(p[i - 1], p[j - 1])) for i, j in candidate))
            for p in group
        )
        classes.add(orbit)
    return len(classes)


class FirstLayerTests(SimpleTestCase):
    def test_pb(self):
        self.assertEqual(layers_of(first_layer_pb(6)), [[[1, 2], [3, 4], [5, 6]]])
        self.assertEqual(layers_of(first_layer_pb(5)), [[[1, 2], [3, 4]]])
        self.assertEqual(layers_of(first_layer_pb(1)), [[]])

    def test_bz(self):
        self.assertEqual(layers_of(first_layer_bz(6)), [[[1, 6], [2, 5], [3, 4]]])
        self.assertEqual(layers_of(first_layer_bz(2)), [[[1, 2]]])
        self.assertEqual(layers_of(first_layer_bz(3)), [[[1, 3]]])

    def test_labels(self):
        self.assertEqual(first_layer_pb(4).label, "pb")
        self.assertEqual(first_layer_bz(4).label, "bz")


class GreenFilterTests(SimpleTestCase):
    def test_eight_channels(self):
        self.assertEqual(
            layers_of(green_filter(8)),
            [
                [[1, 2], [3, 4], [5, 6], [7, 8]],
                [[1, 3], [2, 4], [5, 7], [6, 8]],
                [[1, 5], [2, 6], [3, 7], [4, 8]],
            ],
        )

    def test_two_channels_always_sorted(self):
        self.assertTrue(verify_sorting(green_filter(2).network).is_sorting)

    def test_four_channels_output_count(self):
        self.assertEqual(len(output_set(green_filter(4, 2).network)), 6)

    def test_truncated_filter(self):
        self.assertEqual(green_filter(16, 3).depth, 3)

    def test_copies_side_by_side(self):
        prefix = green_filter(8, 3, copies=2, channels=17)
        self.assertEqual(prefix.channels, 17)
        self.assertEqual(prefix.network.size, 24)
        self.assertIn([9, 11], layers_of(prefix)[1])
        self.assertIn([9, 13], layers_of(prefix)[2])

    def test_invalid_arguments(self):
        with self.assertRaises(NetworkError):
            green_filter(6)
        with self.assertRaises(NetworkError):
            green_filter(8, 4)
        with self.assertRaises(NetworkError):
            green_filter(8, copies=3, channels=20)


class PrefixDocumentTests(SimpleTestCase):
    def test_round_trip_keeps_label(self):
        prefix = loads_prefix(dumps_prefix(first_layer_bz(5)))
        self.assertEqual(prefix.label, "bz")
        self.assertEqual(prefix, first_layer_bz(5))

    def test_plain_network_is_custom(self):
        prefix = loads_prefix('{"channels": 2, "layers": [[[1, 2]]]}')
        self.assertEqual(prefix.label, "custom")

    def test_unknown_label(self):
        with self.assertRaises(ValidationError):
            loads_prefix('{"channels": 2, "layers": [], "label": "fancy"}')

    def test_twisted_prefix_rejected(self):
        with self.assertRaises(ValidationError):
            loads_prefix('{"channels": 2, "layers": [[[2, 1]]]}')

    def test_digest_is_stable(self):
        self.assertEqual(first_layer_pb(6).digest(), first_layer_pb(6).digest())
        self.assertNotEqual(first_layer_pb(6).digest(), first_layer_bz(6).digest())
        self.assertEqual(len(first_layer_pb(6).digest()), 12)


class EnumerationTests(SimpleTestCase):
    def test_two_channels(self):
        self.assertEqual(len(enumerate_two_layer_prefixes(2)), 1)
        self.assertEqual(len(enumerate_two_layer_prefixes(2, drop_redundant=False)), 2)

    def test_counts_match_brute_force(self):
        for n in range(3, 7):
            self.assertEqual(len(enumerate_two_layer_prefixes(n)), orbit_count(n), n)

    @tag("slow")
    def test_counts_match_brute_force_up_to_eight(self):
        for n in (7, 8):
            self.assertEqual(len(enumerate_two_layer_prefixes(n)), orbit_count(n), n)

    def test_prefixes_are_two_layers_over_bz(self):
        for prefix in enumerate_two_layer_prefixes(5):
            self.assertEqual(prefix.depth, 2)
            self.assertEqual(prefix.network.layers[0], first_layer_bz(5).network.layers[0])
            self.assertEqual(prefix.label, "enumerated")

    def test_representatives_are_pairwise_inequivalent(self):
        prefixes = enumerate_two_layer_prefixes(6)
        seconds = {tuple(map(tuple, layers_of(p)[1])) for p in prefixes}
        self.assertEqual(len(seconds), len(prefixes))

    def test_limit(self):
        with self.assertRaises(NetworkError):
            enumerate_two_layer_prefixes(11)


class EvolutionTests(SimpleTestCase):
    def test_fitness_of_pb_six(self):
        self.assertEqual(prefix_fitness(first_layer_pb(6).network, 800), 84)

    def test_fitness_sample_takes_largest_windows(self):
        net = first_layer_pb(3).network
        self.assertEqual(prefix_fitness(net, 1), 3)
        self.assertEqual(prefix_fitness(net, 100), window_sum(net))

    def test_optimize_pb_six_reaches_bz(self):
        result = evolve(first_layer_pb(6), EaConfig(seed=1))
        self.assertEqual(result.fitness_before, 84)
        self.assertLessEqual(result.fitness_after, 72)
        self.assertEqual(prefix_fitness(result.prefix.network, 800), result.fitness_after)
        self.assertTrue(result.prefix.network.is_standard)

    @tag("slow")
    def test_optimize_pb_eight_reaches_bz(self):
        prefix = optimize_prefix(first_layer_pb(8), EaConfig(seed=1))
        self.assertLessEqual(prefix_fitness(prefix.network, 800), 358)

    def test_deterministic_for_seed(self):
        cfg = EaConfig(generations=10, seed=7)
        first, second = evolve(first_layer_pb(5), cfg), evolve(first_layer_pb(5), cfg)
        self.assertEqual(first.permutation, second.permutation)
        self.assertEqual(first.prefix, second.prefix)

    def test_never_worse(self):
        prefix = first_layer_bz(6)
        result = evolve(prefix, EaConfig(generations=5))
        self.assertLessEqual(result.fitness_after, result.fitness_before)

    def test_trivial_prefix_unchanged(self):
        prefix = Prefix(ComparatorNetwork.empty(1))
        self.assertEqual(optimize_prefix(prefix), prefix)

    def test_invalid_config(self):
        with self.assertRaises(ValidationError):
            EaConfig(population=0)
        with self.assertRaises(ValidationError) as ctx:
            EaConfig(mutation_rate=1.0)
        self.assertNotIsInstance(ctx.exception, NetworkError)


class EaConfigFormTests(SimpleTestCase):
    def test_blank_form_uses_defaults(self):
        form = EaConfigForm({})
        self.assertTrue(form.is_valid())
        self.assertEqual(form.ea_config(), EaConfig.from_settings())

    def test_from_json_with_override(self):
        form = EaConfigForm.from_json('{"generations": 5, "seed": 3}', seed=9)
        self.assertTrue(form.is_valid())
        cfg = form.ea_config()
        self.assertEqual((cfg.generations, cfg.seed), (5, 9))

    def test_unknown_key(self):
        with self.assertRaises(ValidationError):
            EaConfigForm.from_json('{"elitism": 2}')

    def test_invalid_rate(self):
        form = EaConfigForm({"mutation_rate": 1.5})
        self.assertFalse(form.is_valid())
        self.assertIn("mutation_rate", form.errors)


class CommandTests(SimpleTestCase):
    def test_green_filter_outputs(self):
        out = StringIO()
        call_command("green_filter", "4", "--outputs", stdout=out)
        self.assertIn("6 distinct outputs", out.getvalue())

    def test_enumerate_count(self):
        out = StringIO()
        call_command("enumerate_prefixes", "-n", "2", "--count", stdout=out)
        self.assertEqual(out.getvalue().strip(), "1")

    def test_optimize_prefix_json(self):
        out = StringIO()
        call_command("optimize_prefix", "pb", "-n", "4", "--generations", "3", "--json", stdout=out)
        text = out.getvalue()
        payload = json.loads(text[text.index("{\n"):])
        self.assertEqual(payload["fitness_before"], 12)
        self.assertLessEqual(payload["fitness_after"], 12)
