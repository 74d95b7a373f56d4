#!/usr/bin/env python3
"""Run the full pipeline over every shipped fixture and summarize outcomes.

The bad_* fixtures and the projection fixture are supposed to fail (input
errors and a stage failure respectively); this script checks each exit code
against the expected value and reports the matrix.
"""

import pathlib
import subprocess
import sys
import time

EXPECTED = {
    "example_w.hra": 0,
    "trivial.hra": 0,
    "three_block.hra": 0,
    "projection.hra": 1,
    "bad_syntax.hra": 2,
    "bad_dangling.hra": 2,
    "bad_algebra.hra": 2,
    "bad_missing_x.hra": 2,
    "bad_diag.hra": 2,
}


def main() -> int:
    root = pathlib.Path(__file__).resolve().parent.parent
    fixtures = root / "fixtures"
    failures = 0
    print(f"{'fixture':22} {'expected':>8} {'got':>4} {'time':>7}  status")
    for name, expected in EXPECTED.items():
        start = time.perf_counter()
        proc = subprocess.run(
            [sys.executable, "-m", "hopfreal.cli", "report",
             "--input", str(fixtures / name)],
            capture_output=True, text=True)
        elapsed = time.perf_counter() - start
        ok = proc.returncode == expected
        failures += 0 if ok else 1
        print(f"{name:22} {expected:>8} {proc.returncode:>4} {elapsed:6.2f}s  "
              f"{'ok' if ok else 'MISMATCH'}")
        if not ok:
            sys.stderr.write(proc.stdout + proc.stderr)
    print(f"\n{len(EXPECTED) - failures}/{len(EXPECTED)} fixtures behave as expected")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
