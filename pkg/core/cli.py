"""
Shared plumbing for the sortnet management commands.

Exit codes: 0 on success (a negative verdict is still a valid result),
1 when ``--expect`` names a different verdict, 2 on usage and input errors.
"""

import json
import logging
from pathlib import Path

from django.core.exceptions import ImproperlyConfigured, ValidationError
from django.core.management.base import BaseCommand, CommandError

from catalog.library import SCHEME, get as catalog_get
from core.conf import sortnet_setting
from core.exceptions import SortnetError
from encoding.encoder import MODES, encode_problem
from networks.network import BitVector
from networks.serialization import loads
from prefixes.generators import first_layer_bz, first_layer_pb
from prefixes.prefix import Prefix, loads_prefix
from synthesis.counterexamples import initial_inputs

logger = logging.getLogger(__name__)

USAGE_ERROR = 2
EXPECT_MISMATCH = 1
SOUNDNESS_FAILURE = 3

PREFIX_STYLES = {"pb": first_layer_pb, "bz": first_layer_bz}


def read_text(path):
    return Path(path).read_text()


def load_network(reference):
    """Network from a ``catalog://<id>`` reference or a JSON file path."""
    if reference.startswith(SCHEME):
        return catalog_get(reference[len(SCHEME):]).network
    return loads(read_text(reference))


def load_prefix(reference, channels):
    """
    Prefix from ``pb``, ``bz``, ``none``, a catalog reference or a prefix
    JSON file. Plain network documents are read as custom prefixes.
    """
    if reference in (None, "", "none"):
        return Prefix.empty(channels)
    if reference in PREFIX_STYLES:
        return PREFIX_STYLES[reference](channels)
    if reference.startswith(SCHEME):
        entry = catalog_get(reference[len(SCHEME):])
        label = "green" if entry.id.startswith("green") else "optimized" if "opt" in entry.id else "custom"
        return Prefix(entry.network, label)
    return loads_prefix(read_text(reference))


def read_inputs(path):
    """Binary input vectors, one per line; blank lines and ``#`` comments are skipped."""
    vectors = []
    for line in read_text(path).splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            vectors.append(BitVector.from_string(line))
    return vectors


def add_problem_arguments(parser, required=True):
    parser.add_argument("-n", "--channels", type=int, required=required)
    parser.add_argument("-d", "--depth", type=int, required=required)
    parser.add_argument("--prefix", help="pb, bz, none, a prefix JSON file or catalog://<id>")
    parser.add_argument("--mode", choices=MODES)
    inputs = parser.add_mutually_exclusive_group()
    inputs.add_argument("--inputs", help="File of binary input vectors, one per line")
    inputs.add_argument("--initial", type=int, help="Number of inputs picked by --strategy")
    parser.add_argument("--strategy", help="small-window-first, random or random(<seed>)")
    parser.add_argument("--seed", type=int)


def build_instance(options):
    """CnfInstance for the problem flags of ``add_problem_arguments``."""
    n, d = options["channels"], options["depth"]
    if n < 1 or d < 1:
        raise CommandError("-n and -d must be positive", returncode=USAGE_ERROR)
    prefix = load_prefix(options["prefix"], n)
    if options["inputs"]:
        inputs = read_inputs(options["inputs"])
    else:
        inputs = initial_inputs(
            n,
            prefix,
            options["initial"] or 0,
            options["strategy"] or sortnet_setting("SYNTHESIS.INITIAL_STRATEGY"),
            options["seed"] if options["seed"] is not None else sortnet_setting("SOLVER.SEED"),
        )
    mode = options["mode"] or sortnet_setting("SYNTHESIS.MODE")
    return encode_problem(n, d, prefix, inputs, mode)


def describe(exc):
    if isinstance(exc, ValidationError):
        return "; ".join(exc.messages)
    if isinstance(exc, OSError) and exc.filename:
        return f"{exc.strerror or exc}: {exc.filename}"
    return str(exc)


class SortnetCommand(BaseCommand):
    """
    Base class of the sortnet commands. Subclasses implement ``run`` and
    list the verdicts they accept for ``--expect`` in ``expect_choices``.
    """

    requires_system_checks = []
    expect_choices = ()

    def add_arguments(self, parser):
        parser.add_argument(
            "--json", nargs="?", const="-", metavar="PATH",
            help="Also write the result as JSON, to PATH or to stdout",
        )
        if self.expect_choices:
            parser.add_argument(
                "--expect", choices=self.expect_choices,
                help="Exit with status 1 unless the verdict matches",
            )

    def handle(self, *args, **options):
        try:
            self.run(*args, **options)
        except CommandError:
            raise
        except (SortnetError, ValidationError, ImproperlyConfigured, OSError) as exc:
            logger.debug("command failed", exc_info=True)
            raise CommandError(describe(exc), returncode=USAGE_ERROR) from exc

    def run(self, *args, **options):
        raise NotImplementedError("subclasses of SortnetCommand must provide a run() method")

    def emit_json(self, options, payload):
        target = options.get("json")
        if not target:
            return
        text = json.dumps(payload, indent=2)
        if target == "-":
            self.stdout.write(text)
        else:
            Path(target).write_text(text + "\n")

    def check_expect(self, options, verdict):
        expected = options.get("expect")
        if expected and expected != verdict:
            raise CommandError(f"expected {expected}, got {verdict}", returncode=EXPECT_MISMATCH)

    def validate(self, form):
        if not form.is_valid():
            messages = [
                f"{field}: {' '.join(errors)}" if field != "__all__" else " ".join(errors)
                for field, errors in form.errors.items()
            ]
            raise CommandError("; ".join(messages), returncode=USAGE_ERROR)
        return form.cleaned_data
