from core.cli import SortnetCommand, load_network
from networks.serialization import network_to_dict
from networks.simulation import verify_sorting


class Command(SortnetCommand):
    help = "Check exhaustively (0-1 principle) whether a network sorts every input"
    expect_choices = ("sorting", "not-sorting")

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("network", help="Network JSON file or catalog://<id>")
        parser.add_argument("--limit", type=int, help="Override the exhaustive channel limit")

    def run(self, *args, **options):
        net = load_network(options["network"])
        verdict = verify_sorting(net, options["limit"])
        if verdict.is_sorting:
            self.stdout.write(self.style.SUCCESS(
                f"sorting network: {net.channels} channels, depth {net.depth}"
            ))
        else:
            self.stdout.write(self.style.WARNING(
                f"not a sorting network: input {verdict.counterexample} is not sorted"
            ))
        self.emit_json(options, {
            "network": network_to_dict(net),
            "sorting": verdict.is_sorting,
            "counterexample": str(verdict.counterexample) if verdict.counterexample else None,
            "inputs_checked": verdict.inputs_checked,
            "size": net.size,
        })
        self.check_expect(options, "sorting" if verdict.is_sorting else "not-sorting")
