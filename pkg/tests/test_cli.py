import contextlib
import functools
import io
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from gensyn.cli import run

GOLDEN = Path(__file__).parent / "golden"
CASES = json.loads((GOLDEN / "cases.json").read_text())


def invoke(case: dict) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    old_stdin, old_cwd = sys.stdin, os.getcwd()
    sys.stdin = io.StringIO(case.get("stdin", ""))
    os.chdir(GOLDEN)
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            code = run(case["args"])
    finally:
        sys.stdin = old_stdin
        os.chdir(old_cwd)
    return code, out.getvalue(), err.getvalue()


@functools.cache
def cached(name: str) -> tuple[int, str, str]:
    return invoke(next(c for c in CASES if c["name"] == name))


def golden_mismatches() -> list[str]:
    bad = []
    for case in CASES:
        code, out, _ = cached(case["name"])
        want = (GOLDEN / "expected" / f"{case['name']}.out").read_text()
        if f"exit {code}\n{out}" != want:
            bad.append(case["name"])
    return bad


@pytest.mark.parametrize("case", CASES, ids=[c["name"] for c in CASES])
def test_golden(case):
    code, out, _ = cached(case["name"])
    want = (GOLDEN / "expected" / f"{case['name']}.out").read_text()
    assert f"exit {code}\n{out}" == want


def test_exit_codes_cover_all_classes():
    codes = {cached(c["name"])[0] for c in CASES}
    assert codes == {0, 1, 2, 3}


def test_errors_go_to_stderr():
    for case in CASES:
        code, out, err = cached(case["name"])
        if code == 2:
            assert out == "" and err, case["name"]
        if code == 3:
            assert err.startswith("error: fuel exhausted"), case["name"]


def test_runs_are_deterministic():
    for case in CASES:
        assert invoke(case)[:2] == cached(case["name"])[:2]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "gensyn", "term", "check", "--lang", "stlc:desugared:Curry", "--type", "(-> base base)"],
        input="(lam (var 0))\n",
        capture_output=True,
        text=True,
        env={**os.environ, "NO_COLOR": "1"},
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "(lam [base] (var 0))"


def test_help_exits_zero(capsys):
    assert run(["--help"]) == 0
    assert "gensyn" in capsys.readouterr().out
