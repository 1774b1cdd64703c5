from core.cli import SortnetCommand
from prefixes.enumeration import enumerate_two_layer_prefixes
from prefixes.prefix import prefix_to_dict


class Command(SortnetCommand):
    help = "One two-layer prefix per symmetry class over the BZ first layer"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("-n", "--channels", type=int, required=True)
        parser.add_argument("--limit", type=int, help="Override the enumeration channel limit")
        parser.add_argument(
            "--keep-redundant", action="store_true",
            help="Keep second layers that repeat a first-layer comparator",
        )
        parser.add_argument("--count", action="store_true", help="Only print the number of classes")

    def run(self, *args, **options):
        prefixes = enumerate_two_layer_prefixes(
            options["channels"], options["limit"], drop_redundant=not options["keep_redundant"]
        )
        if options["count"]:
            self.stdout.write(str(len(prefixes)))
        else:
            for prefix in prefixes:
                self.stdout.write(f"{prefix.digest()}  {prefix.network}")
            self.stdout.write(self.style.SUCCESS(f"{len(prefixes)} prefixes"))
        self.emit_json(options, {
            "channels": options["channels"],
            "count": len(prefixes),
            "prefixes": [prefix_to_dict(prefix) for prefix in prefixes],
        })
