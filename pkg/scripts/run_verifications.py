#!/usr/bin/env python3
"""Run every named verification suite at a desk-scale configuration and
print a one-line result each.  Exits nonzero on any failure.

    python scripts/run_verifications.py [--fast]
"""

import os
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from chram.checks import SUITES, run_suite
from chram.config import RunConfig


def main():
    fast = "--fast" in sys.argv
    cfg = RunConfig(p=3, n0=1, c0=3, a_max=6, alphas=[[1], [2]], seed=7)
    slow = {"ch_laws"}   # p=3 config is cheap; the p=5 laws live in acceptance
    failures = []
    for name in sorted(SUITES):
        if fast and name in slow:
            print(f"[skip] {name}")
            continue
        t0 = time.time()
        ok, lines = run_suite(name, cfg)
        tag = "PASS" if ok else "FAIL"
        print(f"[{tag}] {name} ({time.time() - t0:.1f}s)")
        for line in lines:
            print(f"       {line}")
        if not ok:
            failures.append(name)
    if failures:
        print(f"failed: {failures}")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
