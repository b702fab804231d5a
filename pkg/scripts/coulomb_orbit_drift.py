#!/usr/bin/env python3
"""Integrate a Coulomb orbit on the proper-time generator and report
conservation quality versus step size.

Writes one CSV row per step-size setting; a quick convergence picture for
choosing dtau in larger runs.

Usage:
    python3 scripts/coulomb_orbit_drift.py [--out drift.csv]
"""

import argparse
import math

import numpy as np

from propertime.dynamics import FieldConfiguration, PhaseState, integrate_orbit


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=None)
    parser.add_argument("--p0", type=float, default=0.2, help="tangential momentum / mc")
    parser.add_argument("--periods", type=float, default=4.0)
    args = parser.parse_args()

    coulomb = FieldConfiguration.coulomb(1.0)
    r0 = 1.0 / args.p0**2
    period = 2 * math.pi * r0 / args.p0
    state = PhaseState(x=np.array([r0, 0, 0]), p=np.array([0, args.p0, 0]), m=1.0)

    lines = ["steps_per_period,dtau,k_drift,h_drift"]
    print(f"orbit radius {r0}, Newtonian period {period:.4f}")
    for steps in (250, 500, 1000, 2000, 4000):
        n = int(args.periods * steps)
        traj = integrate_orbit(state, coulomb, period / steps, n)
        h_drift = float(np.max(np.abs(traj.H - traj.H[0])) / abs(traj.H[0]))
        print(
            f"steps/period {steps:5d}: K drift {traj.k_drift:.3e}, H drift {h_drift:.3e}"
        )
        lines.append(f"{steps},{period / steps!r},{traj.k_drift!r},{h_drift!r}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
        print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
