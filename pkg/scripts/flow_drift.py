#!/usr/bin/env python3
"""Conserved-quantity drift of RK4 and implicit midpoint for the H1 and H2 flows.

Prints the endpoint error against the closed-form flow and the maximal drift of H1 and
H2 for several step counts, including a long H2 run on [0, 10].
"""

import argparse

import numpy as np

from pkmoduli.dynamics import closed_form_flow, flow
from pkmoduli.kahler import deformation
from pkmoduli.quartic import ModuliPoint


def endpoint_error(tr, which, start, t_end):
    ref = closed_form_flow(which, start, t_end).as_array()
    return float(np.max(np.abs(tr.end.as_array() - ref)) / max(1.0, float(np.max(np.abs(ref)))))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--f", default="linear")
    ap.add_argument("--z", type=complex, default=0.3 + 1.2j)
    ap.add_argument("--w", type=complex, default=0.8 - 0.4j)
    args = ap.parse_args(argv)
    f = deformation(args.f)
    start = ModuliPoint(args.z, args.w)

    print(f"{'flow':<4} {'method':<9} {'t_end':>5} {'steps':>6} {'endpoint':>10} {'drift H1':>10} {'drift H2':>10}")
    cases = [(w, m, 1.0, n) for w in ("H1", "H2") for m in ("rk4", "midpoint") for n in (100, 1000, 10000)]
    cases += [("H2", "rk4", 10.0, n) for n in (1000, 10000, 100000)]
    for which, method, t_end, steps in cases:
        if method == "midpoint" and steps > 1000:
            continue
        tr = flow(which, start, t_end, steps, f, method=method)
        d1 = float(np.max(np.abs(tr.h1 - tr.h1[0])))
        d2 = float(np.max(np.abs(tr.h2 - tr.h2[0])))
        err = endpoint_error(tr, which, start, t_end)
        print(f"{which:<4} {method:<9} {t_end:>5g} {steps:>6} {err:>10.2e} {d1:>10.2e} {d2:>10.2e}")


if __name__ == "__main__":
    main()
