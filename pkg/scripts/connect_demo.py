#!/usr/bin/env python3
"""Walk between two random solutions of ``T = lam P + Q`` and report residuals.

With ``--lambda 1`` the two endpoints get projections E of the requested
ranks on N(T - I); unequal ranks are refused as different components.
"""

import argparse

import numpy as np

from projpencil.canonical import canonical_split, generic_form
from projpencil.construction import build_pair, connect_pairs
from projpencil.errors import DifferentComponents
from projpencil.linalg_core import frob, haar_unitary, random_unitary_in_commutant
from projpencil.synth import random_projection


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lambda", dest="lam", type=float, default=2.0)
    ap.add_argument("--b", type=float, nargs="+", default=[0.6, 1.2],
                    help="eigenvalues of B (inside the band for lambda)")
    ap.add_argument("--d1", type=int, default=2, help="dim N(T - I)")
    ap.add_argument("--ranks", type=int, nargs=2, default=[1, 1])
    ap.add_argument("--steps", type=int, default=8)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    c = (1 + args.lam) / 2
    b = np.asarray(args.b)
    T = np.diag(np.concatenate([[1.0] * args.d1, c + b, c - b]))
    V = haar_unitary(T.shape[0], rng)
    T = V @ T @ V.conj().T
    s = canonical_split(T, args.lam)
    gf = generic_form(s)
    one = abs(args.lam - 1) < 1e-12
    ends = []
    for r in args.ranks:
        E = random_projection(s.dims[1], r, rng) if one and s.dims[1] else None
        ends.append(build_pair(gf, s, random_unitary_in_commutant(gf.B, rng), E))
    try:
        path = connect_pairs(T, args.lam, ends[0], ends[1], args.steps)
    except DifferentComponents as exc:
        print(f"refused: {exc}")
        return 1
    print(f"{'t':>6} {'||P^2-P||':>10} {'||lamP+Q-T||':>13} {'step |dP|':>10}")
    prev = None
    for t, p, r in zip(path.ts, path.samples, path.reports):
        step = 0.0 if prev is None else frob(p.P - prev.P)
        print(f"{t:6.3f} {r.idempotent_P:10.2e} {r.pencil:13.2e} {step:10.3e}")
        prev = p
    print("all samples verify" if path.all_passed else "FAILED")
    return 0 if path.all_passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
