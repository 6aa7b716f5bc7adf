"""Rewrite tests/golden/*.txt from the current CLI output.

Only run this after checking by hand that a change in output is intended.
"""

import io
import pathlib
import sys

from corrfunctor.cli import run

ROOT = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))
from cli_cases import CASES  # noqa: E402


def main():
    out_dir = ROOT / "tests" / "golden"
    out_dir.mkdir(exist_ok=True)
    for name, argv in CASES.items():
        buf = io.StringIO()
        code = run(argv, out=buf, err=io.StringIO())
        (out_dir / f"{name}.txt").write_text(f"exit {code}\n" + buf.getvalue())
        print(f"{name}: exit {code}")


if __name__ == "__main__":
    main()
