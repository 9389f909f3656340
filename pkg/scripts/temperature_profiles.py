#!/usr/bin/env python3
"""Emit reference-case temperature profiles over (tau, eta) as CSV.

Reproduces the profile data behind the solution plots: the initial
double-zero profile, early-time relaxation, and the approach to the
asymptotic level C5/2.

Usage: python scripts/temperature_profiles.py [--c5 1.6667] [--out profiles.csv]
"""

import argparse
import sys

import numpy as np

from ringheat.core import C5_MIN, ReferenceCase
from ringheat.temperature import theta_general


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--c5", type=float, default=C5_MIN)
    ap.add_argument("--tau", type=float, nargs="+",
                    default=[0.0, 0.03125, 0.125, 0.5, 2.0, 10.0])
    ap.add_argument("--n-eta", type=int, default=201)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    ref = ReferenceCase(C5=args.c5)
    eta = np.linspace(0.0, 1.0, args.n_eta)
    lines = ["tau,eta,theta"]
    for tau in args.tau:
        theta = theta_general(tau, eta, ref.params, ref.consts)
        for e, v in zip(eta, np.broadcast_to(theta, eta.shape)):
            lines.append(f"{tau:.17g},{e:.17g},{float(v):.17g}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        print(f"wrote {len(lines) - 1} rows to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
