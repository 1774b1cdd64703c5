import tempfile
from contextlib import redirect_stderr, redirect_stdout
from io import StringIO
from pathlib import Path

from django.core.exceptions import ValidationError
from django.test import SimpleTestCase, TestCase, override_settings
from django.urls import reverse

import manage
from catalog.library import get as catalog_get
from networks.network import BitVector
from prefixes.generators import first_layer_bz
from prefixes.prefix import dumps_prefix
from solvers.results import Budget

from .cli import load_network, load_prefix, read_inputs
from .conf import sortnet_setting, sortnet_settings
from .exceptions import CatalogError, LayerConflictError, NetworkError, SortnetError
from .forms import RunConfigForm


class SettingsTests(SimpleTestCase):
    def test_defaults(self):
        self.assertEqual(sortnet_setting("EXHAUSTIVE_LIMIT"), 24)
        self.assertEqual(sortnet_setting("SYNTHESIS.MODE"), "improved")
        self.assertIsNone(sortnet_setting("SYNTHESIS.NOPE"))
        self.assertEqual(sortnet_setting("NOPE.DEEPER", 7), 7)

    @override_settings(SORTNET={"SOLVER": {"SEED": 42}})
    def test_nested_override_keeps_siblings(self):
        solver = sortnet_settings()["SOLVER"]
        self.assertEqual(solver["SEED"], 42)
        self.assertEqual(solver["RESTART_FIRST"], 100)

    def test_exception_hierarchy(self):
        self.assertTrue(issubclass(LayerConflictError, NetworkError))
        self.assertTrue(issubclass(CatalogError, SortnetError))


class CliHelperTests(SimpleTestCase):
    def test_builtin_prefixes(self):
        self.assertEqual(load_prefix(None, 4).depth, 0)
        self.assertEqual(load_prefix("none", 4).channels, 4)
        self.assertEqual(load_prefix("bz", 6), first_layer_bz(6))
        self.assertEqual(load_prefix("pb", 5).label, "pb")

    def test_catalog_prefixes(self):
        self.assertEqual(load_prefix("catalog://green-8", 8).label, "green")
        self.assertEqual(load_prefix("catalog://s17-opt-prefix", 17).label, "optimized")
        self.assertEqual(load_prefix("catalog://s4d3", 4).label, "custom")

    def test_files(self):
        with tempfile.TemporaryDirectory() as tmp:
            prefix_path = Path(tmp) / "prefix.json"
            prefix_path.write_text(dumps_prefix(first_layer_bz(5)))
            self.assertEqual(load_prefix(str(prefix_path), 5), first_layer_bz(5))
            self.assertEqual(load_network(str(prefix_path)), first_layer_bz(5).network)
            inputs_path = Path(tmp) / "inputs.txt"
            inputs_path.write_text("# hard inputs\n0101\n\n1100  # second\n")
            self.assertEqual(
                read_inputs(str(inputs_path)),
                [BitVector.from_string("0101"), BitVector.from_string("1100")],
            )

    def test_catalog_network(self):
        self.assertEqual(load_network("catalog://s4d3"), catalog_get("s4d3").network)

    def test_malformed_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "broken.json"
            path.write_text("{not json")
            with self.assertRaises(ValidationError):
                load_prefix(str(path), 4)


class RunConfigFormTests(SimpleTestCase):
    def test_valid(self):
        form = RunConfigForm({"channels": 6, "depth": 4, "mode": "original", "conflicts": 500, "seed": 3})
        self.assertTrue(form.is_valid(), form.errors)
        config = form.loop_config()
        self.assertEqual(config.mode, "original")
        self.assertEqual(config.budget, Budget(500, None))
        self.assertEqual(config.seed, 3)
        self.assertEqual(config.backend, "internal")

    def test_defaults_come_from_settings(self):
        form = RunConfigForm({"channels": 3, "depth": 3})
        self.assertTrue(form.is_valid())
        self.assertEqual(form.loop_config().strategy, "small-window-first")
        self.assertTrue(form.loop_config().budget.unlimited)

    def test_channel_limit(self):
        form = RunConfigForm({"channels": 25, "depth": 10})
        self.assertFalse(form.is_valid())
        self.assertIn("channels", form.errors)

    def test_strategy(self):
        self.assertTrue(RunConfigForm({"channels": 3, "depth": 3, "strategy": "random(5)"}).is_valid())
        form = RunConfigForm({"channels": 3, "depth": 3, "strategy": "fancy"})
        self.assertFalse(form.is_valid())
        self.assertIn("strategy", form.errors)

    @override_settings(SORTNET={"EXTERNAL_SOLVER": ""})
    def test_external_needs_a_command(self):
        form = RunConfigForm({"channels": 3, "depth": 3, "solver": "external"})
        self.assertFalse(form.is_valid())
        self.assertIn("__all__", form.errors)
        form = RunConfigForm({"channels": 3, "depth": 3, "solver": "external", "command": "kissat -q"})
        self.assertTrue(form.is_valid())

    def test_command_needs_external(self):
        form = RunConfigForm({"channels": 3, "depth": 3, "command": "kissat"})
        self.assertFalse(form.is_valid())

    def test_unknown_mode(self):
        form = RunConfigForm({"channels": 3, "depth": 3, "mode": "clever"})
        self.assertFalse(form.is_valid())
        self.assertIn("mode", form.errors)


class EntryPointTests(SimpleTestCase):
    def run_main(self, *args):
        out, err = StringIO(), StringIO()
        with redirect_stdout(out), redirect_stderr(err):
            code = manage.main(["manage.py", *args])
        return code, out.getvalue(), err.getvalue()

    def test_hyphenated_alias(self):
        code, out, _ = self.run_main("window-sum", "--style", "pb", "-n", "3")
        self.assertEqual(code, 0)
        self.assertEqual(out.strip(), "5")

    def test_usage_error_exit_code(self):
        code, _, err = self.run_main("verify", "/nonexistent/net.json")
        self.assertEqual(code, 2)
        self.assertIn("/nonexistent/net.json", err)

    def test_expect_mismatch_exit_code(self):
        code, _, _ = self.run_main("verify", "catalog://green-4", "--expect", "sorting")
        self.assertEqual(code, 1)


class HomeViewTests(TestCase):
    def test_home(self):
        response = self.client.get(reverse("core:home"))
        self.assertEqual(response.status_code, 200)
        self.assertContains(response, "s17d10-left")
        self.assertContains(response, "No proof runs recorded yet")
        self.assertEqual(response.context["exhaustive_limit"], 24)
        self.assertEqual(response.context["default_mode"], "improved")
