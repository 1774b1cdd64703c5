from pathlib import Path

from core.cli import SortnetCommand, load_prefix, read_text
from prefixes.evolution import evolve
from prefixes.forms import EaConfigForm
from prefixes.prefix import dumps_prefix, prefix_to_dict


class Command(SortnetCommand):
    help = "Improve a prefix by evolutionary search over channel permutations"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("prefix", help="pb, bz, a prefix JSON file or catalog://<id>")
        parser.add_argument("-n", "--channels", type=int, default=0, help="Channels for pb/bz prefixes")
        parser.add_argument("--config", help="EA settings as a JSON file")
        parser.add_argument("--sample-size", type=int)
        parser.add_argument("--population", type=int)
        parser.add_argument("--offspring", type=int)
        parser.add_argument("--generations", type=int)
        parser.add_argument("--mutation-rate", type=float)
        parser.add_argument("--seed", type=int)
        parser.add_argument("-o", "--output", help="Write the optimised prefix JSON here")

    def run(self, *args, **options):
        flags = {
            "sample_size": options["sample_size"],
            "population": options["population"],
            "offspring": options["offspring"],
            "generations": options["generations"],
            "mutation_rate": options["mutation_rate"],
            "seed": options["seed"],
        }
        if options["config"]:
            form = EaConfigForm.from_json(read_text(options["config"]), **flags)
        else:
            form = EaConfigForm({k: v for k, v in flags.items() if v is not None})
        self.validate(form)
        cfg = form.ea_config()

        prefix = load_prefix(options["prefix"], options["channels"])
        result = evolve(prefix, cfg)
        self.stdout.write(
            f"fitness {result.fitness_before} -> {result.fitness_after} "
            f"({result.evaluations} evaluations)"
        )
        text = dumps_prefix(result.prefix)
        if options["output"]:
            Path(options["output"]).write_text(text + "\n")
            self.stdout.write(self.style.SUCCESS(f"wrote prefix to {options['output']}"))
        else:
            self.stdout.write(text)
        self.emit_json(options, {
            "prefix": prefix_to_dict(result.prefix),
            "permutation": list(result.permutation),
            "fitness_before": result.fitness_before,
            "fitness_after": result.fitness_after,
            "evaluations": result.evaluations,
        })
