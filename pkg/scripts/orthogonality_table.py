#!/usr/bin/env python3
"""Print the matrix I[n, m] = int_1^inf P^mu_{in-1/2}(x) P^mu_{im-1/2}(x, pi) dx.

Diagonal entries are compared with pi / (n sinh(pi n) Gamma(1/2+in-mu) Gamma(1/2-in-mu)).

    python3 scripts/orthogonality_table.py --mu 0.2,0.1 --size 5
"""

import argparse

import numpy as np

from mehlerfock.cli import parse_complex
from mehlerfock.oracle import orthogonality_matrix


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--mu", default="0", help="'re,im'")
    ap.add_argument("--size", type=int, default=5)
    args = ap.parse_args()

    mat = orthogonality_matrix(parse_complex(args.mu), args.size)
    scale = np.max(np.abs(np.diag(mat.entries)))
    print(f"mu = {mat.mu}, |I| / max diagonal:")
    for row in mat.entries:
        print("  " + " ".join(f"{abs(v) / scale:9.2e}" for v in row))
    print("diagonal vs closed form:")
    for n, (v, t) in enumerate(zip(np.diag(mat.entries), mat.diagonal_targets), start=1):
        print(f"  n={n}: {complex(v):.15g}  rel err {abs(v - t) / abs(t):.1e}")


if __name__ == "__main__":
    main()
