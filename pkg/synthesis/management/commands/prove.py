import json
from pathlib import Path

from django.core.exceptions import ValidationError
from django.core.management.base import CommandError

from core.cli import USAGE_ERROR, SortnetCommand, load_prefix, read_text
from core.forms import RunConfigForm
from prefixes.prefix import prefix_from_dict
from reports.exporters import export_csv, export_pdf, record_report
from synthesis.lower_bounds import (
    INCONCLUSIVE,
    NETWORK_FOUND,
    NONE_EXTENDS,
    lower_bound_prefixes,
    prove_lower_bound,
)


def load_prefix_set(reference, channels):
    """``enumerated`` (the default set), a single prefix reference, or a JSON list of prefixes."""
    if reference in (None, "", "enumerated"):
        return lower_bound_prefixes(channels)
    if reference.endswith(".json") and Path(reference).exists():
        try:
            data = json.loads(read_text(reference))
        except json.JSONDecodeError as exc:
            raise ValidationError(f"Not valid JSON: {exc}", code="invalid") from exc
        if isinstance(data, list):
            return [prefix_from_dict(item) for item in data]
        if isinstance(data, dict) and isinstance(data.get("prefixes"), list):
            return [prefix_from_dict(item) for item in data["prefixes"]]
    return [load_prefix(reference, channels)]


class Command(SortnetCommand):
    help = "Show that no sorting network of depth d extends any prefix of a covering set"
    expect_choices = (NONE_EXTENDS, NETWORK_FOUND, INCONCLUSIVE)

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("-n", "--channels", type=int, required=True)
        parser.add_argument("-d", "--depth", type=int, required=True)
        parser.add_argument(
            "--prefixes", default="enumerated",
            help="enumerated, pb, bz, catalog://<id>, a prefix file or a JSON list of prefixes",
        )
        parser.add_argument("--mode")
        parser.add_argument("--solver")
        parser.add_argument("--command", help="External solver command line")
        parser.add_argument("--workers", type=int, default=1)
        parser.add_argument("--seed", type=int)
        parser.add_argument("--conflicts", type=int, help="Conflict budget per solver call")
        parser.add_argument("--seconds", type=float, help="Wall-clock budget per solver call")
        parser.add_argument("--record", action="store_true", help="Store the report in the database")
        parser.add_argument("--csv", metavar="PATH", help="Store the report and export it as CSV")
        parser.add_argument("--pdf", metavar="PATH", help="Store the report and export it as PDF")

    def run(self, *args, **options):
        data = {
            "channels": options["channels"],
            "depth": options["depth"],
            "mode": options["mode"],
            "solver": options["solver"],
            "command": options["command"],
            "workers": options["workers"],
            "seed": options["seed"],
            "conflicts": options["conflicts"],
            "seconds": options["seconds"],
        }
        form = RunConfigForm({k: v for k, v in data.items() if v is not None})
        cleaned = self.validate(form)
        prefixes = load_prefix_set(options["prefixes"], cleaned["channels"])
        mismatched = [p.digest() for p in prefixes if p.channels != cleaned["channels"]]
        if mismatched:
            raise CommandError(
                f"prefixes {', '.join(mismatched)} do not have {cleaned['channels']} channels",
                returncode=USAGE_ERROR,
            )

        report = prove_lower_bound(
            cleaned["channels"], cleaned["depth"], prefixes, form.loop_config(), cleaned.get("workers") or 1
        )
        self.stdout.write(report.table(), ending="")
        for assumption in report.assumptions:
            self.stdout.write(f"assumes: {assumption}")
        for note in report.notes:
            self.stdout.write(f"note: {note}")
        style = self.style.WARNING if report.verdict == INCONCLUSIVE else self.style.SUCCESS
        self.stdout.write(style(report.verdict))

        if options["record"] or options["csv"] or options["pdf"]:
            self.record(report, options)
        self.emit_json(options, report.as_dict())
        self.check_expect(options, report.verdict)

    def record(self, report, options):
        run = record_report(report)
        self.stdout.write(f"stored as proof run {run.pk}")
        if options["csv"]:
            with open(options["csv"], "w", newline="") as stream:
                export_csv(run, stream)
        if options["pdf"]:
            Path(options["pdf"]).write_bytes(export_pdf(run))
