"""
Management command: sweep

Runs a one-dimensional sweep. The spec is
    {"base": {"model": {...}} | {"circuit": {...}}, "knob": "...",
     "grid": [..] | {"start", "stop", "num", "log"},
     "outputs": [...], "optimal_mu1": false}

Usage:
    python manage.py sweep --spec sweep.json --out DIR [--format csv|json] [--svg] [--serial]
"""

from pairsim.services import SweepService, SweepSpec
from pairsim.utils.export import plot_sweep, sweep_frame, write_table

from ._common import BaseSimCommand


class Command(BaseSimCommand):
    help = "Sweep one knob and tabulate the stationary concurrence and fidelity"
    command_name = "sweep"

    def add_arguments(self, parser) -> None:
        super().add_arguments(parser)
        parser.add_argument(
            "--serial", action="store_true", help="evaluate points in-process, not as Celery tasks"
        )

    def run(self, spec, **options) -> None:
        sweep = SweepSpec.from_dict(spec)
        result = SweepService.run(sweep, parallel=not options["serial"])
        frame = sweep_frame(result.rows, sweep.knob)

        outputs = []
        out = self.out_dir(options)
        if out is not None:
            fmt = options["format"]
            outputs.append(write_table(frame, out / f"sweep.{fmt}", fmt).name)
            if options["svg"]:
                outputs.append(plot_sweep(frame, sweep.knob, out / "sweep.svg").name)

        summary = {"knob": sweep.knob, "points": len(result.rows), "failed": result.failed}
        if out is None:
            summary["rows"] = result.rows
        self.emit(summary)
        self.finish(options, sweep.to_dict(), result.methods, outputs, summary)
