#!/usr/bin/env python3
"""Randomized search for matrices that are pencils at more than two lambdas.

Prints a summary table and writes the full JSON report (including any
offending matrices) to --output.
"""

import argparse
import json
import time

from projpencil.falsify import FalsifyConfig, run_falsify


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=10_000)
    ap.add_argument("--max-dim", type=int, default=8)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--output", default=None)
    args = ap.parse_args()

    t0 = time.perf_counter()
    rep = run_falsify(FalsifyConfig(args.trials, args.max_dim, args.seed, args.workers))
    dt = time.perf_counter() - t0
    d = rep.to_dict()
    print(f"{args.trials} trials in {dt:.1f}s, violations: {d['n_violations']}")
    print("sources:          ", d["sources"])
    print("admissible sizes: ", d["admissible_sizes"])
    print("classifications:  ", d["classifications"])
    print(f"worst residual {d['worst_residual']:.2e}, "
          f"worst anticommutation {d['worst_anticommutation']:.2e}")
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(d, fh, indent=2, sort_keys=True)
    return 0 if rep.passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
