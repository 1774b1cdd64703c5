from django.core.management.base import CommandError

from core.cli import USAGE_ERROR, SortnetCommand, add_problem_arguments, build_instance, read_text
from encoding.dimacs import read_dimacs
from encoding.encoder import decode_model
from networks.serialization import dumps, network_to_dict
from networks.simulation import verify_sorting
from solvers.cdcl import solve_clauses
from solvers.external import run_external
from solvers.results import SAT, STATUSES, UNKNOWN, UNSAT, Budget
from solvers.sessions import BACKENDS, solve

COMPETITION_STATUS = {SAT: "SATISFIABLE", UNSAT: "UNSATISFIABLE"}


class Command(SortnetCommand):
    help = "Solve a synthesis problem or a DIMACS file"
    expect_choices = STATUSES

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("cnf", nargs="?", help="DIMACS file; omit to encode a problem from -n/-d")
        add_problem_arguments(parser, required=False)
        parser.add_argument("--solver", choices=BACKENDS, default="internal")
        parser.add_argument("--command", help="External solver command line")
        parser.add_argument("--conflicts", type=int, help="Conflict budget of the internal solver")
        parser.add_argument("--seconds", type=float, help="Wall-clock budget")
        parser.add_argument("--probe", action="store_true", help="Failed-literal probing before search")
        parser.add_argument(
            "--competition", action="store_true",
            help="Print SAT competition output (s and v lines)",
        )

    def run(self, *args, **options):
        budget = Budget(options["conflicts"], options["seconds"])
        if options["command"] and options["solver"] != "external":
            raise CommandError("--command is only used with --solver external", returncode=USAGE_ERROR)
        if options["cnf"]:
            if options["channels"] or options["depth"]:
                raise CommandError("give either a DIMACS file or -n/-d, not both", returncode=USAGE_ERROR)
            self.solve_dimacs(budget, options)
        elif options["channels"] and options["depth"]:
            self.solve_problem(budget, options)
        else:
            raise CommandError("a DIMACS file or both -n and -d are required", returncode=USAGE_ERROR)

    def solve_dimacs(self, budget, options):
        num_vars, clauses = read_dimacs(read_text(options["cnf"]))
        if options["solver"] == "external":
            result = run_external(num_vars, clauses, options["command"], options["seconds"])
        else:
            result = solve_clauses(num_vars, clauses, budget, seed=options["seed"])
        self.report(result, options, num_vars)
        self.emit_json(options, result.as_dict())
        self.check_expect(options, result.status)

    def solve_problem(self, budget, options):
        inst = build_instance(options)
        result = solve(inst, budget, options["solver"], options["command"], options["probe"] or None)
        payload = {"problem": inst.provenance(), "stats": inst.stats(), "result": result.as_dict()}
        self.report(result, options, inst.num_vars)
        if result.is_sat:
            net = decode_model(inst, result.model)
            verdict = verify_sorting(net)
            payload["network"] = network_to_dict(net)
            payload["sorting"] = verdict.is_sorting
            if not options["competition"]:
                self.stdout.write(dumps(net))
                self.stdout.write(
                    "the network sorts all inputs" if verdict.is_sorting
                    else f"the network sorts the encoded inputs only; {verdict.counterexample} is not sorted"
                )
        self.emit_json(options, payload)
        self.check_expect(options, result.status)

    def report(self, result, options, num_vars):
        if options["competition"]:
            self.stdout.write(f"s {COMPETITION_STATUS.get(result.status, 'UNKNOWN')}")
            if result.is_sat:
                literals = [var if result.model[var] else -var for var in range(1, num_vars + 1)]
                for start in range(0, len(literals), 20):
                    self.stdout.write("v " + " ".join(str(lit) for lit in literals[start:start + 20]))
                self.stdout.write("v 0")
            return
        style = self.style.SUCCESS if result.status != UNKNOWN else self.style.WARNING
        self.stdout.write(style(result.status.upper()))
        for key, value in sorted(result.stats.items()):
            self.stdout.write(f"  {key}: {value}")
