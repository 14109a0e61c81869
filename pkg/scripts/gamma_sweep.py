"""Negativity and fringe visibility of the 3w field versus gamma (Case V)."""
import argparse

import numpy as np

from ppcat.scenario import Scenario, run_sweep
from ppcat.wigner import PhaseSpaceGrid


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--zeta", type=float, default=0.9)
    ap.add_argument("--alpha1", default="sqrt12@pi/3")
    ap.add_argument("--mode", default="mode3", choices=("mode1", "mode3"))
    ap.add_argument("--half-width", type=float, default=8.0)
    ap.add_argument("--out", default=None, help="directory for the sweep table")
    args = ap.parse_args()
    gammas = [round(g, 2) for g in np.arange(0.3, 0.95, 0.1)] + [0.99]
    s = Scenario(case="V", zeta=args.zeta, alpha1=args.alpha1, mode=args.mode,
                 grid=PhaseSpaceGrid.square(args.half_width, 256), name="gamma_sweep")
    rows = run_sweep(s, "gamma", gammas, args.out)
    neg = [r["negativity_volume"] for r in rows]
    print(f"{'gamma':>6} {'negativity':>12} {'visibility':>11} {'defect':>9}")
    for r in rows:
        vis = "-" if r["fringe_visibility"] is None else f"{r['fringe_visibility']:.4f}"
        print(f"{r['gamma']:>6.2f} {r['negativity_volume']:>12.6f} {vis:>11} {r['normalization_defect']:>9.1e}")
    d = np.diff(neg)
    trend = "non-decreasing" if np.all(d >= 0) else "non-increasing" if np.all(d <= 0) else "not monotone"
    print(f"negativity trace: {trend}")


if __name__ == "__main__":
    main()
