from core.cli import SortnetCommand
from networks.rendering import render_text
from networks.simulation import output_set
from prefixes.generators import green_filter
from prefixes.prefix import dumps_prefix, prefix_to_dict


class Command(SortnetCommand):
    help = "Build a Green filter prefix, optionally several side by side"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("size", type=int, help="Filter width, a power of two")
        parser.add_argument("--layers", type=int)
        parser.add_argument("--copies", type=int, default=1)
        parser.add_argument("-n", "--channels", type=int, help="Width of the enclosing network")
        parser.add_argument("--outputs", action="store_true", help="List the distinct filter outputs")

    def run(self, *args, **options):
        prefix = green_filter(options["size"], options["layers"], options["copies"], options["channels"])
        self.stdout.write(render_text(prefix.network), ending="")
        self.stdout.write(dumps_prefix(prefix))
        payload = {"prefix": prefix_to_dict(prefix)}
        if options["outputs"]:
            outputs = sorted(str(x) for x in output_set(prefix.network))
            self.stdout.write(f"{len(outputs)} distinct outputs")
            for vector in outputs:
                self.stdout.write(vector)
            payload["outputs"] = outputs
        self.emit_json(options, payload)
