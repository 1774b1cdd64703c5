from pathlib import Path

from django.core.management.base import CommandError

from core.cli import USAGE_ERROR, SortnetCommand, load_network
from networks.rendering import FORMATS, render


class Command(SortnetCommand):
    help = "Draw a network as a Knuth diagram (text, SVG or PDF)"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("network", help="Network JSON file or catalog://<id>")
        parser.add_argument("--format", choices=FORMATS, default="text")
        parser.add_argument("--title", default="")
        parser.add_argument("-o", "--output", help="Write to a file instead of stdout")

    def run(self, *args, **options):
        net = load_network(options["network"])
        fmt = options["format"]
        drawing = render(net, fmt, options["title"] or options["network"])
        output = options["output"]
        if fmt == "pdf":
            if not output:
                raise CommandError("PDF output needs --output", returncode=USAGE_ERROR)
            Path(output).write_bytes(drawing)
        elif output:
            Path(output).write_text(drawing)
        else:
            self.stdout.write(drawing, ending="" if drawing.endswith("\n") else "\n")
        if output:
            self.stdout.write(self.style.SUCCESS(f"wrote {fmt} diagram to {output}"))
        self.emit_json(options, {"format": fmt, "output": output, "channels": net.channels, "depth": net.depth})
