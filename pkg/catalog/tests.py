import json
import shutil
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import CommandError, call_command
from django.test import SimpleTestCase, TestCase, tag
from django.urls import reverse

from core.exceptions import CatalogError
from networks.simulation import verify_sorting
from prefixes.generators import green_filter

from .library import Catalog, bounds, default_catalog, get, list_ids, resolve

DATA = Path(__file__).parent / "data"


class CatalogTests(SimpleTestCase):
    def test_ids_by_kind(self):
        self.assertEqual(list_ids("sorting"), ["s4d3", "s17d10-left", "s17d10-right", "s20d11"])
        self.assertIn("batcher-8", list_ids())
        self.assertEqual(len(list_ids("prefix")), 4)

    def test_claims_match_networks(self):
        for entry in default_catalog().entries():
            self.assertEqual(entry.network.depth, entry.claimed_depth, entry.id)
            self.assertEqual(entry.network.channels, entry.claimed_channels, entry.id)
            self.assertTrue(entry.network.is_standard, entry.id)

    def test_small_networks_sort(self):
        self.assertTrue(verify_sorting(get("s4d3").network).is_sorting)
        self.assertTrue(verify_sorting(get("batcher-8").network).is_sorting)

    @tag("slow")
    def test_large_networks_sort(self):
        for entry_id in ("s17d10-left", "s17d10-right", "s20d11"):
            self.assertTrue(verify_sorting(get(entry_id).network).is_sorting, entry_id)

    def test_green_filter_head(self):
        head = get("s17d10-left").network.head(3)
        self.assertEqual(head, green_filter(8, 3, copies=2, channels=17).network)

    def test_optimised_prefix_is_the_head_of_its_network(self):
        self.assertEqual(get("s17-opt-prefix").network, get("s17d10-right").network.head(4))

    def test_green_prefixes(self):
        for size in (2, 4, 8):
            self.assertEqual(get(f"green-{size}").network, green_filter(size).network)

    def test_bounds(self):
        self.assertEqual(bounds(17), (10, 10))
        self.assertEqual(bounds(18), (10, 11))
        self.assertEqual(bounds(20), (10, 11))
        self.assertEqual(bounds(17, "old"), (9, 11))
        self.assertEqual(bounds(4), (3, 3))

    def test_bounds_errors(self):
        with self.assertRaises(CatalogError):
            bounds(21)
        with self.assertRaises(CatalogError):
            bounds(4, "ancient")

    def test_resolve(self):
        self.assertEqual(resolve("catalog://s4d3"), get("s4d3").network)
        with self.assertRaises(CatalogError):
            resolve("s4d3")
        with self.assertRaises(CatalogError):
            get("s99d1")


class CatalogIntegrityTests(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.directory = Path(self.tmp.name) / "data"
        shutil.copytree(DATA, self.directory)

    def tearDown(self):
        self.tmp.cleanup()

    def test_checksum_mismatch(self):
        path = self.directory / "s4d3.json"
        path.write_text(path.read_text() + " ")
        with self.assertRaises(CatalogError) as ctx:
            Catalog(self.directory).get("s4d3")
        self.assertIn("checksum mismatch", str(ctx.exception))

    def test_claim_mismatch(self):
        index_path = self.directory / "index.json"
        index = json.loads(index_path.read_text())
        index["entries"][0]["claimed_depth"] = 2
        index_path.write_text(json.dumps(index))
        with self.assertRaises(CatalogError):
            Catalog(self.directory).get("s4d3")

    def test_missing_index(self):
        (self.directory / "index.json").unlink()
        with self.assertRaises(CatalogError):
            Catalog(self.directory)


class CatalogCommandTests(SimpleTestCase):
    def test_list(self):
        out = StringIO()
        call_command("catalog", "list", "--kind", "prefix", stdout=out)
        lines = out.getvalue().splitlines()
        self.assertEqual(len(lines), 4)
        self.assertTrue(lines[0].startswith("green-2"))

    def test_bounds(self):
        out = StringIO()
        call_command("catalog", "bounds", "17", stdout=out)
        self.assertEqual(out.getvalue().split(), ["17", "10", "10"])

    def test_verify(self):
        out = StringIO()
        call_command("catalog", "verify", "s4d3", "--expect", "sorting", stdout=out)
        self.assertIn("s4d3", out.getvalue())

    def test_show(self):
        out = StringIO()
        call_command("catalog", "show", "s4d3", stdout=out)
        self.assertIn("4 channels, depth 3, size 5", out.getvalue())

    def test_usage_errors(self):
        for args in (("show",), ("bounds", "many"), ("show", "s99d1")):
            with self.assertRaises(CommandError) as ctx:
                call_command("catalog", *args, stdout=StringIO())
            self.assertEqual(ctx.exception.returncode, 2, args)


class CatalogViewTests(TestCase):
    def test_entry_list(self):
        response = self.client.get(reverse("catalog:entry_list"))
        self.assertEqual(response.status_code, 200)
        self.assertContains(response, "s17d10-left")
        self.assertEqual(len(response.context["bounds"]), 20)

    def test_entry_detail(self):
        response = self.client.get(reverse("catalog:entry_detail", args=["s4d3"]))
        self.assertEqual(response.status_code, 200)
        self.assertContains(response, "<svg")
        self.assertEqual(response.context["entry"].id, "s4d3")

    def test_entry_json(self):
        response = self.client.get(reverse("catalog:entry_json", args=["s4d3"]))
        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.json()["channels"], 4)
        self.assertIn("s4d3.json", response["Content-Disposition"])

    def test_unknown_entry(self):
        response = self.client.get(reverse("catalog:entry_detail", args=["s99d1"]))
        self.assertEqual(response.status_code, 404)
