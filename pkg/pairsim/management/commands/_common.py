"""
Shared plumbing of the pairsim management commands.

Every command reads a JSON spec (`--spec`), prints a JSON summary on stdout,
and with `--out DIR` writes its result files plus `manifest.json` there.
`--record` also stores the manifest as a SimulationRun.

Exit codes: 1 for malformed input (InvalidSpecError, bad JSON, bad
arguments), 2 for inputs that are well formed but cannot be computed (any
other PairSimError).
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from django.core.management.base import BaseCommand, CommandError

from pairsim.exceptions import InvalidSpecError, PairSimError
from pairsim.services import ManifestService
from pairsim.utils.export import to_json

logger = logging.getLogger(__name__)

EXIT_INVALID = 1
EXIT_FAILED = 2


class BaseSimCommand(BaseCommand):
    """
    Base class: subclasses implement `run(spec, **options)`.
    """

    command_name = ""
    spec_required = True

    def add_arguments(self, parser) -> None:
        parser.add_argument("--spec", required=self.spec_required, help="path to a JSON spec")
        parser.add_argument("--out", help="directory for result files and manifest.json")
        parser.add_argument(
            "--format",
            choices=["csv", "json"],
            default="csv",
            help="format of tabular outputs (default: csv)",
        )
        parser.add_argument("--svg", action="store_true", help="also write SVG plots")
        parser.add_argument(
            "--record", action="store_true", help="store the manifest as a SimulationRun"
        )

    def load_spec(self, path: Optional[str]) -> Any:
        if path is None:
            return None
        try:
            with open(path, "r", encoding="utf-8") as fh:
                return json.load(fh)
        except FileNotFoundError:
            raise CommandError(f"spec file not found: {path}", returncode=EXIT_INVALID)
        except json.JSONDecodeError as exc:
            raise CommandError(f"spec file is not valid JSON: {exc}", returncode=EXIT_INVALID)

    def handle(self, *args, **options) -> None:
        spec = self.load_spec(options.pop("spec", None))
        try:
            self.run(spec, **options)
        except InvalidSpecError as exc:
            raise CommandError(f"invalid spec: {exc}", returncode=EXIT_INVALID)
        except PairSimError as exc:
            raise CommandError(f"{type(exc).__name__}: {exc}", returncode=EXIT_FAILED)

    def run(self, spec: Any, **options) -> None:
        raise NotImplementedError

    def emit(self, data: Dict[str, Any]) -> None:
        self.stdout.write(to_json(data))

    def out_dir(self, options) -> Optional[Path]:
        out = options.get("out")
        if not out:
            return None
        path = Path(out)
        path.mkdir(parents=True, exist_ok=True)
        return path

    def finish(
        self,
        options,
        inputs: Dict[str, Any],
        methods: Sequence[Optional[str]],
        outputs: Sequence[str] = (),
        summary: Optional[Dict[str, Any]] = None,
    ) -> None:
        """Write and/or record the run manifest."""
        out = self.out_dir(options)
        if out is None and not options.get("record"):
            return
        manifest = ManifestService.build(self.command_name, inputs, methods, outputs)
        if out is not None:
            ManifestService.write(manifest, out)
        if options.get("record"):
            ManifestService.record(manifest, inputs, summary=summary, out_dir=out)
        self.stderr.write(
            f"{self.command_name}: manifest {manifest.manifest_hash[:12]}",
            style_func=self.style.SUCCESS,
        )
