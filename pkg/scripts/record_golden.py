"""Re-record the CLI golden outputs under tests/golden/expected/.

Review the diff before committing: the golden files are the regression oracle.
"""

import contextlib
import io
import json
import os
import sys
from pathlib import Path

from gensyn.cli import run

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"


def invoke(case: dict) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    old_stdin = sys.stdin
    sys.stdin = io.StringIO(case.get("stdin", ""))
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            code = run(case["args"])
    finally:
        sys.stdin = old_stdin
    return code, out.getvalue(), err.getvalue()


def main() -> None:
    os.chdir(GOLDEN)
    expected = GOLDEN / "expected"
    expected.mkdir(exist_ok=True)
    for case in json.loads((GOLDEN / "cases.json").read_text()):
        code, out, _ = invoke(case)
        (expected / f"{case['name']}.out").write_text(f"exit {code}\n{out}")
        print(f"{case['name']}: exit {code}")


if __name__ == "__main__":
    main()
