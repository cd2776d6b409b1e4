"""
Management command: validate

Runs the built-in invariant suite (basis, generator, closed forms, measures,
circuit adapters, decay) and prints a pass/fail table.

Usage:
    python manage.py validate [--seed N] [--out DIR]

Exits with code 2 if any check fails.
"""

from django.core.management.base import CommandError

from pairsim.services import ValidationService
from pairsim.utils.export import write_json

from ._common import EXIT_FAILED, BaseSimCommand


class Command(BaseSimCommand):
    help = "Run the built-in invariant checks"
    command_name = "validate"
    spec_required = False

    def add_arguments(self, parser) -> None:
        super().add_arguments(parser)
        parser.add_argument("--seed", type=int, default=None, help="random seed")

    def run(self, spec, **options) -> None:
        results = ValidationService(seed=options["seed"]).run()
        width = max(len(r.name) for r in results)
        for r in results:
            mark = self.style.SUCCESS("PASS") if r.passed else self.style.ERROR("FAIL")
            self.stdout.write(f"{r.name.ljust(width)}  {mark}  {r.detail}")

        outputs = []
        out = self.out_dir(options)
        if out is not None:
            outputs.append(write_json([r.to_dict() for r in results], out / "validate.json").name)
        failed = [r.name for r in results if not r.passed]
        self.finish(
            options,
            {"seed": options["seed"]},
            [],
            outputs,
            {"passed": len(results) - len(failed), "failed": failed},
        )
        if failed:
            raise CommandError(f"{len(failed)} check(s) failed: {', '.join(failed)}", returncode=EXIT_FAILED)
