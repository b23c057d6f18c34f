"""Run the axiom suite over several seeds and print a per-check summary table."""

from __future__ import annotations

import argparse
import time
from pathlib import Path

from idemext.axiomlab import TrialConfig, run_suite


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, nargs="+", default=[0, 1])
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--suite", default="all")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="reports", help="directory for the JSON reports")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    bad = 0
    for seed in args.seeds:
        t0 = time.perf_counter()
        rep = run_suite(TrialConfig(seed=seed, trials=args.trials, suite=args.suite, workers=args.workers))
        dt = time.perf_counter() - t0
        path = out / f"report_{args.suite}_seed{seed}.json"
        path.write_text(rep.to_json())
        print(f"seed {seed}: {dt:.1f}s digest {rep.digest[:16]} -> {path}")
        for name, c in rep.checks.items():
            mark = "ok " if not c["failed"] else "BAD"
            print(f"  {mark} {name:32s} {c['passed']:4d} passed {c['failed']:4d} failed")
        bad += len(rep.failures)
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
