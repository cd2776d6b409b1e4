"""
`pairsim` console entry point.

    pairsim evolve --spec model.json --t-end 10 --out runs/a
    pairsim stationary --spec model.json
    pairsim sweep --spec sweep.json --out runs/b --svg
    pairsim optimize --spec model.json
    pairsim circuit --spec cqed.json --optimal
    pairsim validate

Each subcommand is the management command of the same name; this wrapper
configures Django and turns CommandError into a process exit code.
"""

from __future__ import annotations

import os
import sys
from typing import List, Optional

COMMANDS = ("evolve", "stationary", "sweep", "optimize", "circuit", "validate")


def usage() -> str:
    return "usage: pairsim {" + ",".join(COMMANDS) + "} [options]\n"


def cli(argv: Optional[List[str]] = None) -> int:
    """
    Run one subcommand.

    Returns:
        int: 0 on success, 1 for invalid input, 2 for computation failures.
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] in ("-h", "--help"):
        sys.stdout.write(usage())
        return 0 if argv else 1
    if argv[0] not in COMMANDS:
        sys.stderr.write(f"unknown command {argv[0]!r}\n" + usage())
        return 1

    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "entanglelab.settings")
    import django
    from django.core.management import call_command
    from django.core.management.base import CommandError

    django.setup()
    try:
        call_command(argv[0], *argv[1:])
    except CommandError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.returncode
    return 0


def main() -> None:
    sys.exit(cli())
