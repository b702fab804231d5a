#!/usr/bin/env python3
"""Profile the square-root operator kernel: tail decay fit and the
coordinate-vs-frequency application error as the grid is refined.

Usage:
    python3 scripts/kernel_profile.py [--widths 2 5 10] [--points 128 256 512]
"""

import argparse

import numpy as np

from propertime.errors import ResolutionError
from propertime.spectral import (
    KernelParameters,
    RadialGridFunction,
    apply_sqrt_operator,
    fit_kernel_decay,
    momentum_oracle,
    sqrt_kernel_weight,
)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--widths", type=float, nargs="+", default=[2.0, 5.0, 10.0])
    parser.add_argument("--points", type=int, nargs="+", default=[128, 256, 512])
    parser.add_argument("--mass", type=float, default=1.0)
    args = parser.parse_args()

    params = KernelParameters.from_mass(args.mass)
    mu = params.mu
    kappa = fit_kernel_decay(params)
    print(f"mu = {mu}, fitted tail decay kappa = {kappa:.6f} ({100 * (kappa / mu - 1):+.2f}%)")
    for d in (0.5 / mu, 1.0 / mu, 3.0 / mu, 6.0 / mu):
        print(f"  w({d:6.3f}) = {sqrt_kernel_weight(d, params):+.6e}")

    print("\nrelative L2 error of the coordinate kernel vs the frequency oracle:")
    header = "width/Compton " + " ".join(f"n={n:>6d}" for n in args.points)
    print(header)
    for width_mu in args.widths:
        width = width_mu / mu
        extent = max(20.0 / mu, 14.0 * width)
        errs = []
        for n in args.points:
            psi = RadialGridFunction.gaussian(n, extent, width)
            try:
                out = apply_sqrt_operator(psi, params)
            except ResolutionError:
                errs.append(None)
                continue
            ref = momentum_oracle(psi, params)
            errs.append(
                float(np.sqrt(np.sum((out.values - ref.values) ** 2) / np.sum(ref.values**2)))
            )
        cells = [" coarse " if e is None else f"{e:8.1e}" for e in errs]
        print(f"{width_mu:13.1f} " + " ".join(cells))


if __name__ == "__main__":
    main()
