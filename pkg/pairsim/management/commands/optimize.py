"""
Management command: optimize

Maximizes the numeric stationary concurrence over one knob by golden-section
search and reports it next to the closed-form optimum.

Usage:
    python manage.py optimize --spec model.json [--knob mu1] [--lower A --upper B] [--scan 41]
"""

from django.core.management.base import CommandError

from pairsim.services import OptimizationService, base_from_dict, base_to_dict
from pairsim.utils.export import write_json

from ._common import EXIT_INVALID, BaseSimCommand


class Command(BaseSimCommand):
    help = "Find the knob value that maximizes the stationary concurrence"
    command_name = "optimize"

    def add_arguments(self, parser) -> None:
        super().add_arguments(parser)
        parser.add_argument("--knob", default="mu1")
        parser.add_argument("--lower", type=float)
        parser.add_argument("--upper", type=float)
        parser.add_argument("--scan", type=int, default=41, help="pre-scan points")

    def run(self, spec, **options) -> None:
        if (options["lower"] is None) != (options["upper"] is None):
            raise CommandError("give both --lower and --upper, or neither", returncode=EXIT_INVALID)
        bounds = None if options["lower"] is None else (options["lower"], options["upper"])
        base = base_from_dict(spec)
        result = OptimizationService.optimize_knob(
            base, options["knob"], bounds=bounds, scan_points=options["scan"]
        )
        report = result.to_dict()
        outputs = []
        out = self.out_dir(options)
        if out is not None:
            outputs.append(write_json({**report, "scan": result.scan}, out / "optimize.json").name)
        self.emit(report)
        self.finish(
            options,
            {**base_to_dict(base), "knob": options["knob"], "bounds": list(result.bounds)},
            ["auto"],
            outputs,
            {"value": result.value, "C": result.C},
        )
