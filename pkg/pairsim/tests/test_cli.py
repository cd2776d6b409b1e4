"""
Tests for the `pairsim` console entry point.
"""

from pathlib import Path

from pairsim.cli import cli

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def test_no_arguments(capsys):
    assert cli([]) == 1
    assert "usage" in capsys.readouterr().out


def test_help(capsys):
    assert cli(["--help"]) == 0
    assert "stationary" in capsys.readouterr().out


def test_unknown_command(capsys):
    assert cli(["simulate"]) == 1
    assert "unknown command" in capsys.readouterr().err


def test_successful_command(capsys):
    assert cli(["stationary", "--spec", str(FIXTURES / "model_static.json")]) == 0
    assert '"method": "linear-solve"' in capsys.readouterr().out


def test_exit_code_from_command_error(capsys):
    assert cli(["stationary", "--spec", "/nonexistent.json"]) == 1
    assert "spec file not found" in capsys.readouterr().err
