"""Command-line interface: exit codes, determinism, file outputs."""

import json
import subprocess
import sys

import pytest

from permlift import algebra_checks
from permlift.cli import (
    EXIT_CONFIG,
    EXIT_OK,
    EXIT_VIOLATION,
    ExperimentConfig,
    cmd_bound_table,
    cmd_trace,
    cmd_verify_algebra,
    cmd_verify_lifting,
    main,
)


def run_cli(args):
    return main(args)


def test_verify_algebra_passes(tmp_path):
    out = tmp_path / "report.json"
    code = run_cli(["verify-algebra", "--n", "4", "--k", "2", "--out", str(out)])
    assert code == EXIT_OK
    report = json.loads(out.read_text())
    assert report["pass"] is True
    assert all(r["violations"] == 0 for r in report["results"])


def test_verify_algebra_capability_error():
    assert run_cli(["verify-algebra", "--n", "11"]) == EXIT_CONFIG


def test_forced_bug_exits_one(tmp_path, monkeypatch):
    import numpy as np

    def broken(tables, inverses, x, y):
        out = tables.copy()
        out[:, x] = y
        return out, np.argsort(out, axis=1)

    monkeypatch.setattr(algebra_checks, "batched_reprogram", broken)
    out = tmp_path / "r.json"
    code = run_cli(["verify-algebra", "--n", "4", "--out", str(out)])
    assert code == EXIT_VIOLATION


def test_verify_lifting_classical(tmp_path):
    out = tmp_path / "lift.json"
    code = run_cli(["verify-lifting", "--kind", "classical", "--game",
                    "double-sided-zero", "--n", "4", "--q", "2",
                    "--out", str(out)])
    assert code == EXIT_OK
    report = json.loads(out.read_text())
    assert all(r["holds"] for r in report["results"])


def test_verify_lifting_unknown_game():
    assert run_cli(["verify-lifting", "--game", "nope", "--n", "4"]) == EXIT_CONFIG


def test_bound_table_csv(tmp_path):
    out = tmp_path / "bounds.csv"
    code = run_cli(["bound-table", "--out", str(out)])
    assert code == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "game,params,q,k,raw_bound,clamped"
    assert len(lines) > 100


def test_trace_jsonl(tmp_path):
    out = tmp_path / "trace.jsonl"
    code = run_cli(["trace", "--kind", "classical", "--n", "4", "--seed", "3",
                    "--trace", str(out)])
    assert code == EXIT_OK
    entries = [json.loads(line) for line in out.read_text().splitlines()]
    assert entries
    for entry in entries:
        assert set(entry) == {"slot", "direction", "measured", "reprogram", "when"}


def test_report_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for target in (a, b):
        code = run_cli(["verify-decomposition", "--n", "4", "--q", "1",
                        "--seed", "5", "--out", str(target)])
        assert code == EXIT_OK
    ra, rb = json.loads(a.read_text()), json.loads(b.read_text())
    ra.pop("wall_clock_s"), rb.pop("wall_clock_s")
    assert json.dumps(ra, sort_keys=True) == json.dumps(rb, sort_keys=True)


def test_entry_point_module():
    proc = subprocess.run(
        [sys.executable, "-m", "permlift.cli", "verify-algebra", "--n", "4"],
        capture_output=True, text=True, timeout=300,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["pass"] is True
