from django.core.management.base import CommandError

from core.cli import USAGE_ERROR, SortnetCommand, load_network, load_prefix
from networks.simulation import window_sum


class Command(SortnetCommand):
    help = "Sum of window sizes over the distinct outputs of a prefix"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument("--style", choices=("pb", "bz"), help="First-layer style")
        source.add_argument("--prefix", help="Prefix JSON file or catalog://<id>")
        parser.add_argument("-n", "--channels", type=int)

    def run(self, *args, **options):
        if options["style"]:
            if not options["channels"] or options["channels"] < 1:
                raise CommandError("--style needs a positive -n", returncode=USAGE_ERROR)
            net = load_prefix(options["style"], options["channels"]).network
        else:
            net = load_network(options["prefix"])
        total = window_sum(net)
        self.stdout.write(str(total))
        self.emit_json(options, {"channels": net.channels, "depth": net.depth, "window_sum": total})
