#!/usr/bin/env python3
"""Run the full verification sweep for each built-in deformation function and print a table."""

import argparse
import sys

from pkmoduli.config import load_config
from pkmoduli.kahler import REGISTRY
from pkmoduli.verify import run_verification


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--samples", type=int, default=100)
    ap.add_argument("--flow-steps", type=int, default=2000)
    ap.add_argument("--out-prefix", default=None, help="write <prefix>_<f>.json reports")
    args = ap.parse_args(argv)

    ok = True
    for name in sorted(REGISTRY):
        cfg = load_config(f_name=name, seed=args.seed, sample_count=args.samples, flow_steps=args.flow_steps)
        report = run_verification(cfg)
        print(f"== f = {name}")
        print(report.summary())
        if args.out_prefix:
            with open(f"{args.out_prefix}_{name}.json", "w", encoding="utf-8") as fh:
                fh.write(report.to_json())
        ok &= report.passed
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
