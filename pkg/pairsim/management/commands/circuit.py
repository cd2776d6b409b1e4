"""
Management command: circuit

Maps a superconducting-circuit spec onto the two-qubit model, optionally
tuning its design knob to the closed-form optimum, and solves for the
stationary state.

Usage:
    python manage.py circuit --spec charge.json [--optimal] [--out DIR]
"""

from pairsim.circuits import circuit_from_dict
from pairsim.services import CircuitService
from pairsim.utils.export import write_json

from ._common import BaseSimCommand


class Command(BaseSimCommand):
    help = "Map a circuit onto the two-qubit model and evaluate it"
    command_name = "circuit"

    def add_arguments(self, parser) -> None:
        super().add_arguments(parser)
        parser.add_argument(
            "--optimal", action="store_true", help="tune the design knob to its optimum first"
        )

    def run(self, spec, **options) -> None:
        circuit = circuit_from_dict(spec)
        report = CircuitService.evaluate(circuit, optimal=options["optimal"])
        for check in report.get("conditions", []):
            if not check["ok"]:
                self.stderr.write(self.style.WARNING(f"condition not met: {check['name']}"))
        outputs = []
        out = self.out_dir(options)
        if out is not None:
            outputs.append(write_json(report, out / "circuit.json").name)
        self.emit(report)
        self.finish(
            options,
            {"circuit": circuit.to_dict(), "optimal": options["optimal"]},
            [report["method"]],
            outputs,
            {"C_num": report["C_num"], "F_num": report["F_num"]},
        )
