#!/usr/bin/env python3
"""Refinement study of the finite-difference marcher against the closed forms.

Runs three boundary treatments side by side:
  * derived Neumann data (exact fluxes)      -> order 2
  * exact Dirichlet data                     -> order 2
  * published Neumann data ('paper' mode)    -> error plateau near 0.5,
    quantifying the known inconsistency of the published outer flux.

Usage: python scripts/convergence_study.py [--levels 32 64 128 256]
"""

import argparse
import sys

from ringheat.solver import SolverConfig, convergence_study


def run_mode(levels, bc_mode: str):
    cfg = SolverConfig(t_end=0.25, scheme="cn", bc_mode=bc_mode)
    print(f"\nbc_mode = {bc_mode}")
    print(f"{'n_cells':>8} {'h':>12} {'error_inf':>14} {'error_l2':>14} {'order':>8}")
    for res in convergence_study(levels, cfg):
        order = "" if res.observed_order is None else f"{res.observed_order:8.3f}"
        print(f"{res.grid.n_cells:>8} {res.grid.h:>12.6g} "
              f"{res.error_inf:>14.6e} {res.error_l2:>14.6e} {order:>8}")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--levels", type=int, nargs="+", default=[32, 64, 128, 256])
    args = ap.parse_args()
    for mode in ("derived", "dirichlet", "paper"):
        run_mode(args.levels, mode)
    return 0


if __name__ == "__main__":
    sys.exit(main())
