#!/usr/bin/env python3
"""Run the identity suite and print a per-identity summary with timings.

    python3 scripts/run_suite.py [--selection kl_2_23,factor_2_12] [--report out.json]
"""

import argparse
import time

from mehlerfock.oracle import IDENTITIES, report_json, run_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--selection", default=",".join(IDENTITIES))
    ap.add_argument("--report", help="also write the JSON report here")
    args = ap.parse_args()

    everything = []
    for ident in args.selection.split(","):
        t0 = time.perf_counter()
        reports = run_suite([ident])
        dt = time.perf_counter() - t0
        everything.extend(reports)
        passed = sum(r.passed for r in reports)
        worst = max(reports, key=lambda r: r.rel_err)
        print(f"{ident:20s} {passed:3d}/{len(reports):<3d} {dt:6.1f} s  worst rel_err {worst.rel_err:.2e} at {worst.parameters}")
        for r in reports:
            if not r.passed:
                print(f"    FAIL {r.parameters} lhs={r.lhs} rhs={r.rhs} {r.diagnostics}")
    if args.report:
        with open(args.report, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(report_json(everything))


if __name__ == "__main__":
    main()
