from django.core.management.base import CommandError

from catalog.library import EDITIONS, KINDS, default_catalog
from core.cli import USAGE_ERROR, SortnetCommand
from networks.rendering import render_text
from networks.serialization import network_to_dict
from networks.simulation import verify_sorting

ACTIONS = ("list", "show", "bounds", "verify")


class Command(SortnetCommand):
    help = "Browse the embedded catalog of networks and depth bounds"
    expect_choices = ("sorting", "not-sorting")

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("action", choices=ACTIONS)
        parser.add_argument("target", nargs="?", help="Entry id for show/verify, channel count for bounds")
        parser.add_argument("--kind", choices=KINDS)
        parser.add_argument("--edition", choices=EDITIONS, default="new")

    def run(self, *args, **options):
        catalog = default_catalog()
        handler = getattr(self, f"do_{options['action']}")
        handler(catalog, options)

    def do_list(self, catalog, options):
        entries = catalog.entries(options["kind"])
        for entry in entries:
            self.stdout.write(
                f"{entry.id:<16}{entry.kind:<14}{entry.claimed_channels:>3} channels  "
                f"depth {entry.claimed_depth:<3} {entry.provenance}"
            )
        self.emit_json(options, [
            {
                "id": entry.id,
                "kind": entry.kind,
                "channels": entry.claimed_channels,
                "depth": entry.claimed_depth,
                "provenance": entry.provenance,
            }
            for entry in entries
        ])

    def do_show(self, catalog, options):
        entry = catalog.get(self.require_target(options))
        self.stdout.write(f"{entry.id}: {entry.provenance}")
        self.stdout.write(render_text(entry.network), ending="")
        self.emit_json(options, {"id": entry.id, "kind": entry.kind, "network": network_to_dict(entry.network)})

    def do_bounds(self, catalog, options):
        table = catalog.bounds_table
        if options["target"]:
            try:
                channels = [int(options["target"])]
            except ValueError:
                raise CommandError("bounds takes a channel count", returncode=USAGE_ERROR)
        else:
            channels = list(table.channels)
        rows = []
        for n in channels:
            lower, upper = table.bounds(n, options["edition"])
            rows.append({"channels": n, "lower": lower, "upper": upper})
            self.stdout.write(f"{n:>3}  {lower:>3}  {upper:>3}")
        self.emit_json(options, {"edition": options["edition"], "bounds": rows})

    def do_verify(self, catalog, options):
        if options["target"]:
            entries = [catalog.get(options["target"])]
        else:
            entries = catalog.entries("sorting")
        results = {}
        for entry in entries:
            verdict = verify_sorting(entry.network)
            results[entry.id] = verdict.is_sorting
            style = self.style.SUCCESS if verdict.is_sorting else self.style.ERROR
            self.stdout.write(style(f"{entry.id}: {verdict}"))
        self.emit_json(options, results)
        self.check_expect(options, "sorting" if all(results.values()) else "not-sorting")

    def require_target(self, options):
        if not options["target"]:
            raise CommandError(f"{options['action']} needs an entry id", returncode=USAGE_ERROR)
        return options["target"]
