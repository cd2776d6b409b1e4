"""
Management command: stationary

Stationary state of a model, or of a circuit spec (a JSON object with a
`kind`) mapped onto the model, with the closed-form values next to it.

Usage:
    python manage.py stationary --spec model.json [--method auto|linear-solve|null-space|long-time]
        [--out DIR]
"""

from pairsim.dynamics import METHODS, METHOD_AUTO
from pairsim.services import StationaryService, base_from_dict, base_to_dict, model_for
from pairsim.utils.export import write_json

from ._common import BaseSimCommand


class Command(BaseSimCommand):
    help = "Compute the stationary state, its concurrence and fidelity"
    command_name = "stationary"

    def add_arguments(self, parser) -> None:
        super().add_arguments(parser)
        parser.add_argument("--method", choices=METHODS, default=METHOD_AUTO)

    def run(self, spec, **options) -> None:
        base = base_from_dict(spec)
        report = StationaryService.solve(model_for(base), options["method"])
        outputs = []
        out = self.out_dir(options)
        if out is not None:
            outputs.append(write_json(report, out / "stationary.json").name)
        self.emit(report)
        self.finish(
            options,
            {**base_to_dict(base), "method": options["method"]},
            [report["method"]],
            outputs,
            {"C": report["C"], "F": report["F"]},
        )
