#!/usr/bin/env python3
"""Extrinsic diagnostics of the Barbot surface along the diagonal x = y."""

import argparse

import numpy as np

from pkmoduli import ambient


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--extent", type=float, default=2.0)
    ap.add_argument("--n", type=int, default=9)
    args = ap.parse_args(argv)

    cols = ("t", "eta+1", "metric-2Id", "tr II", "|II|^2", "two-term", "K", "q")
    print("".join(f"{c:>12}" for c in cols))
    for t in np.linspace(-args.extent, args.extent, args.n):
        pos = ambient.barbot_embed(t, t)
        g = ambient.extrinsic_frame(t, t).induced_metric()
        _, q = ambient.quartic_from_embedding(t, t)
        row = (
            t,
            ambient.eta_form(pos, pos) + 1.0,
            float(np.max(np.abs(g - 2 * np.eye(2)))),
            float(np.max(np.abs(ambient.maximality_trace(t, t)))),
            ambient.II_norm_sq(t, t),
            ambient.II_norm_sq_two_term(t, t),
            ambient.gaussian_curvature(t, t),
            q.real,
        )
        print("".join(f"{v:>12.3e}" for v in row))


if __name__ == "__main__":
    main()
