"""Shared helpers: an in-process CLI runner."""
from __future__ import annotations

import json

import pytest

from qconcepts import cli


@pytest.fixture
def run_cli(capsys):
    """Invoke the CLI in-process; returns (exit_code, stdout, stderr)."""

    def run(*argv):
        code = cli.main([str(a) for a in argv])
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return run


@pytest.fixture
def run_cli_json(run_cli):
    """CLI runner that parses stdout as JSON (adds --json)."""

    def run(*argv):
        code, out, err = run_cli(*argv, "--json")
        return code, (json.loads(out) if out.strip() else None), err

    return run
