#!/usr/bin/env python3
"""Synthesise F from a_m = 2^-m (m <= N), invert, and tabulate the recovery.

The error estimates grow like exp(pi n), which is the conditioning of the
inversion; the actual errors are usually far smaller.

    python3 scripts/roundtrip.py --mu 0.25 --terms 8
"""

import argparse
import time

import numpy as np

from mehlerfock.transform import CoefficientSequence, ForwardSeries, TransformConfig, invert


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--mu", type=float, default=0.0)
    ap.add_argument("--terms", type=int, default=8)
    args = ap.parse_args()

    tc = TransformConfig()
    a = CoefficientSequence.of([2.0**-m for m in range(1, args.terms + 1)])
    F = ForwardSeries(a, args.mu, tc.kernel_cfg)
    t0 = time.perf_counter()
    res = invert(F, args.mu, np.arange(1, args.terms + 1), tc)
    print(f"mu={args.mu}  {time.perf_counter() - t0:.1f} s  converged={res.converged}")
    print(f"{'n':>3} {'recovered':>24} {'|error|':>10} {'estimate':>10}")
    for n, (v, e) in enumerate(zip(res.value, res.error_estimate), start=1):
        print(f"{n:3d} {v.real:24.17g} {abs(v - 2.0**-n):10.2e} {e:10.2e}")


if __name__ == "__main__":
    main()
