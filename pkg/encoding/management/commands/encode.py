import json
from pathlib import Path

from core.cli import SortnetCommand, add_problem_arguments, build_instance
from encoding.dimacs import write_dimacs
from encoding.encoder import varmap_sidecar


class Command(SortnetCommand):
    help = "Write the CNF of a synthesis problem as DIMACS plus a variable-map sidecar"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        add_problem_arguments(parser)
        parser.add_argument("-o", "--output", help="DIMACS file (stdout when omitted)")
        parser.add_argument("--sidecar", help="Variable map JSON (default: <output>.map.json)")

    def run(self, *args, **options):
        inst = build_instance(options)
        text = write_dimacs(inst)
        output = options["output"]
        sidecar_path = options["sidecar"] or (f"{output}.map.json" if output else None)
        if output:
            Path(output).write_text(text)
        else:
            self.stdout.write(text, ending="")
        if sidecar_path:
            Path(sidecar_path).write_text(json.dumps(varmap_sidecar(inst), indent=2) + "\n")

        stats = inst.stats()
        if output:
            self.stdout.write(self.style.SUCCESS(
                f"{inst.mode} encoding, {len(inst.inputs)} inputs: {stats['variables']} variables, "
                f"{stats['clauses']} clauses, {stats['literals']} literals"
            ))
        if inst.trivially_unsat:
            self.stderr.write(self.style.WARNING("the instance contains the empty clause"))
        self.emit_json(options, {
            "output": output,
            "sidecar": sidecar_path,
            "provenance": inst.provenance(),
            "stats": stats,
            "trivially_unsat": inst.trivially_unsat,
        })
