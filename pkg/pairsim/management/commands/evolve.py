"""
Management command: evolve

Integrates the master equation from an initial state and writes the
trajectory (every matrix entry, C and F per output time).

Usage:
    python manage.py evolve --spec model.json --t-end 10 [--points 201]
        [--initial ground|bell|mixed|target] [--out DIR] [--format csv|json] [--svg]
"""

from pairsim import analytic
from pairsim.dynamics import evolve
from pairsim.measures import bell_target
from pairsim.model import ModelSpec
from pairsim.quantum_core import ground_state, maximally_mixed
from pairsim.utils.export import plot_trajectory, trajectory_frame, write_table

from ._common import BaseSimCommand

INITIAL_STATES = ("ground", "bell", "mixed", "target")


def initial_state(spec: ModelSpec, name: str):
    if name == "ground":
        return ground_state()
    if name == "mixed":
        return maximally_mixed()
    if name == "bell":
        return bell_target(0.0)
    return analytic.lab_frame_target(spec, 0.0)


class Command(BaseSimCommand):
    help = "Integrate the two-qubit master equation and write the trajectory"
    command_name = "evolve"

    def add_arguments(self, parser) -> None:
        super().add_arguments(parser)
        parser.add_argument("--t-end", type=float, required=True, help="final time")
        parser.add_argument("--points", type=int, default=101, help="number of output times")
        parser.add_argument("--initial", choices=INITIAL_STATES, default="ground")

    def run(self, spec, **options) -> None:
        model = ModelSpec.from_dict(spec)
        rho0 = initial_state(model, options["initial"])
        trajectory = evolve(model, rho0, options["t_end"], n_points=options["points"])
        frame = trajectory_frame(model, trajectory)

        outputs = []
        out = self.out_dir(options)
        if out is not None:
            fmt = options["format"]
            outputs.append(write_table(frame, out / f"trajectory.{fmt}", fmt).name)
            if options["svg"]:
                outputs.append(plot_trajectory(frame, out / "trajectory.svg").name)

        summary = {
            "t_end": float(trajectory.times[-1]),
            "C_final": float(frame["C"].iloc[-1]),
            "F_final": float(frame["F"].iloc[-1]),
            **trajectory.diagnostics(),
        }
        self.emit(summary)
        inputs = {
            "model": model.to_dict(),
            "t_end": options["t_end"],
            "points": options["points"],
            "initial": options["initial"],
        }
        self.finish(options, inputs, ["rk45"], outputs, summary)
