from pathlib import Path

from django.core.management.base import CommandError

from core.cli import SOUNDNESS_FAILURE, USAGE_ERROR, SortnetCommand, load_prefix, read_inputs
from core.forms import RunConfigForm
from networks.rendering import render_text
from networks.serialization import dumps
from solvers.results import SAT, UNKNOWN, UNSAT
from synthesis.loop import FOUND, NO_NETWORK, LoopState, fresh_resolve, resume, synthesize

STATUS = {FOUND: SAT, NO_NETWORK: UNSAT}


class Command(SortnetCommand):
    help = "Search for a sorting network of a given depth by growing a set of inputs"
    expect_choices = (SAT, UNSAT, UNKNOWN)

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("-n", "--channels", type=int)
        parser.add_argument("-d", "--depth", type=int)
        parser.add_argument("--prefix", help="pb, bz, none, a prefix JSON file or catalog://<id>")
        parser.add_argument("--mode")
        parser.add_argument("--solver")
        parser.add_argument("--command", help="External solver command line")
        inputs = parser.add_mutually_exclusive_group()
        inputs.add_argument("--initial", type=int, help="Number of initial inputs")
        inputs.add_argument("--inputs", help="File of initial input vectors")
        parser.add_argument("--strategy")
        parser.add_argument("--batch-size", type=int)
        parser.add_argument("--reencode-every", type=int)
        parser.add_argument("--seed", type=int)
        parser.add_argument("--conflicts", type=int, help="Conflict budget per solver call")
        parser.add_argument("--seconds", type=float, help="Wall-clock budget per solver call")
        parser.add_argument("--resume", metavar="STATE", help="Continue from a saved loop state")
        parser.add_argument("--save-state", metavar="PATH", help="Save the final loop state")
        parser.add_argument(
            "--check", action="store_true",
            help="Re-solve an unsatisfiable outcome from a fresh encoding",
        )
        parser.add_argument("-o", "--output", help="Write a found network as JSON")

    def run(self, *args, **options):
        if options["resume"]:
            outcome = self.resume_run(options)
        else:
            outcome = self.start_run(options)
        n, d = outcome.state.channels, outcome.state.depth

        if outcome.verdict == FOUND:
            self.stdout.write(self.style.SUCCESS(
                f"SAT: sorting network on {n} channels of depth {d} found"
            ))
            self.stdout.write(render_text(outcome.network), ending="")
            if options["output"]:
                Path(options["output"]).write_text(dumps(outcome.network) + "\n")
        elif outcome.verdict == NO_NETWORK:
            self.stdout.write(self.style.SUCCESS(
                f"UNSAT: no sorting network on {n} channels of depth {d} extends the prefix"
            ))
        else:
            self.stdout.write(self.style.WARNING("UNKNOWN: the solver budget ran out"))
        self.stdout.write(
            f"{outcome.iterations} iterations, {len(outcome.inputs)} inputs, {outcome.seconds:.2f} seconds"
        )

        payload = outcome.as_dict()
        if options["check"] and outcome.verdict == NO_NETWORK:
            check = fresh_resolve(outcome, self.config)
            payload["fresh_resolve"] = check.status
            if not check.is_unsat:
                raise CommandError(
                    f"fresh re-solve of the final input set returned {check.status}, not unsat; "
                    "the incremental result is unsound",
                    returncode=SOUNDNESS_FAILURE,
                )
            self.stdout.write("fresh re-solve: unsat")
        if options["save_state"]:
            outcome.state.save(options["save_state"])
            self.stdout.write(f"loop state saved to {options['save_state']}")
        self.emit_json(options, payload)
        self.check_expect(options, STATUS.get(outcome.verdict, UNKNOWN))

    def configure(self, options, channels, depth):
        data = {
            "channels": channels,
            "depth": depth,
            "mode": options["mode"],
            "solver": options["solver"],
            "command": options["command"],
            "strategy": options["strategy"],
            "initial": options["initial"],
            "batch_size": options["batch_size"],
            "reencode_every": options["reencode_every"],
            "seed": options["seed"],
            "conflicts": options["conflicts"],
            "seconds": options["seconds"],
        }
        form = RunConfigForm({k: v for k, v in data.items() if v is not None})
        self.validate(form)
        self.config = form.loop_config()
        return form.cleaned_data

    def start_run(self, options):
        if not options["channels"] or not options["depth"]:
            raise CommandError("-n and -d are required unless --resume is given", returncode=USAGE_ERROR)
        data = self.configure(options, options["channels"], options["depth"])
        prefix = load_prefix(options["prefix"], data["channels"])
        initial = read_inputs(options["inputs"]) if options["inputs"] else data.get("initial") or 0
        return synthesize(data["channels"], data["depth"], prefix, initial, self.config)

    def resume_run(self, options):
        if options["channels"] or options["depth"] or options["prefix"]:
            raise CommandError("--resume takes the problem from the state file", returncode=USAGE_ERROR)
        state = LoopState.load(options["resume"])
        options["mode"] = options["mode"] or state.mode
        self.configure(options, state.channels, state.depth)
        return resume(state, self.config)
