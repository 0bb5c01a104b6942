#!/usr/bin/env python3
"""Run every verification suite and print a summary table.

Equivalent to `shortctl verify --suite all`, but one line per suite with
timing, which is handier when watching a long randomized run.
"""

import argparse
import json
import sys

from shortops.verify import SUITE_NAMES, run_suite


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=200)
    parser.add_argument("--dims", default="2..12")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default=None, help="write the merged JSON reports here")
    args = parser.parse_args()
    lo, _, hi = args.dims.partition("..")
    dims = (int(lo), int(hi))

    reports = []
    worst = 0
    for suite in SUITE_NAMES:
        if suite == "all":
            continue
        report = run_suite(suite, trials=args.trials, dims=dims, seed=args.seed)
        reports.append(report.to_dict())
        worst = max(worst, len(report.failures))
        status = "ok" if report.passed else f"{len(report.failures)} FAILURES"
        print(f"{suite:12s} trials={report.trials:5d} elapsed={report.elapsed_ms:6d}ms {status}")
        for failure in report.failures[:5]:
            print(f"    {failure.assertion_name}  residual={failure.measured_residual:.3e} "
                  f"trial_seed={failure.trial_seed}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(reports, fh, indent=2)
        print(f"wrote {args.out}")
    return 0 if worst == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
