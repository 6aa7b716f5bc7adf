"""Run every verifier through the CLI at a chosen bound and time each one.

    python scripts/verify_suite.py --bound 3
"""

import argparse
import io
import time

from corrfunctor.cli import ALL_ORDER, run


def main(bound: int, seed: int) -> int:
    worst = 0
    for tid in ALL_ORDER:
        out = io.StringIO()
        start = time.perf_counter()
        code = run(["verify", tid, "--bound", str(bound), "--seed", str(seed)], out=out, err=io.StringIO())
        secs = time.perf_counter() - start
        lines = out.getvalue().splitlines()
        fails = [ln for ln in lines if " FAIL " in ln]
        cases = sum(int(ln.split("cases=")[1].split()[0]) for ln in lines)
        print(f"{tid:<22} reports={len(lines):>3} cases={cases:>7} fail={len(fails)} {secs:6.2f}s")
        for ln in fails:
            print("    " + ln)
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    p = argparse.ArgumentParser(description="time the verifier suite")
    p.add_argument("--bound", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    raise SystemExit(main(args.bound, args.seed))
