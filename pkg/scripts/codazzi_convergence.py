#!/usr/bin/env python3
"""Grid refinement of the discrete Codazzi residual for holomorphic and anti-holomorphic coefficients."""

import argparse

import numpy as np

from pkmoduli.quartic import codazzi_residual, field_from_coefficient

COEFFICIENTS = {
    "exp(z)": np.exp,
    "z^3": lambda Z: Z**3,
    "conj(z)": np.conj,
    "|z|^2": lambda Z: np.abs(Z) ** 2,
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="*", default=[9, 17, 33, 65, 129])
    args = ap.parse_args(argv)

    print(f"{'coefficient':<10}" + "".join(f"{n:>12}" for n in args.sizes) + f"{'order':>8}")
    for name, fn in COEFFICIENTS.items():
        res = []
        for n in args.sizes:
            x = np.linspace(0.0, 1.0, n)
            X, Y = np.meshgrid(x, x, indexing="ij")
            res.append(codazzi_residual(field_from_coefficient(fn(X + 1j * Y)), 1.0 / (n - 1), periodic=False))
        order = np.log2(res[-2] / res[-1]) if res[-1] > 0 else float("inf")
        print(f"{name:<10}" + "".join(f"{r:>12.3e}" for r in res) + f"{order:>8.2f}")


if __name__ == "__main__":
    main()
