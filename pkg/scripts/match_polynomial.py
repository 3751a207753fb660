#!/usr/bin/env python3
"""Locate the class invariant with a prescribed minimal polynomial.

Given a target monic polynomial with coefficients x + y*sqrt(D) (low degree
first, leading 1 omitted), search the descended invariant space for a
rational combination whose value at theta is a root of the target: a
candidate is proposed by exact-LLL integer relation detection on the CM
values and then confirmed by the exact symbolic pipeline.  Prints the
matching combination and its invariant, or reports that no element of the
space has that polynomial.

Example: the degree-2 row for D=-91, N=7 with linear part 420-8*sqrt(-91):

    python scripts/match_polynomial.py --disc -91 --level-N 7 \
        --coeffs " -20048,0" "420,-8"
"""

import argparse
import json
import sys

import mpmath

from classinv import (FunctionBasis, OrderContext, build_group,
                      class_invariant_basis, class_polynomial, eval_invariant)
from classinv.cli import invariant_to_json
from classinv.relations import complex_relation


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--disc", type=int, required=True)
    ap.add_argument("--family", choices=("nu", "g72"), default="g72")
    ap.add_argument("--N", type=int, default=None)
    ap.add_argument("--level-N", dest="level_N", type=int, default=None)
    ap.add_argument("--coeffs", nargs="+", required=True,
                    help="x,y pairs of x + y*sqrt(D), low degree first, "
                         "without the leading 1")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--digits", type=int, default=220)
    args = ap.parse_args()

    family, N = args.family, args.N
    if args.level_N is not None:
        family, N = "nu", args.level_N
    basis = FunctionBasis.g_family() if family == "g72" else FunctionBasis.nu_family(N)
    ctx = OrderContext.make(args.disc, basis.level)
    group = build_group(ctx)
    vecs, _ = class_invariant_basis(group, basis, seed=args.seed)
    print("descended space: %d rational basis vectors" % len(vecs))

    pairs = []
    for tok in args.coeffs:
        x, y = tok.split(",")
        pairs.append((int(x), int(y)))

    dps = args.digits
    theta = ctx.theta(dps)
    values = [eval_invariant(w, theta, dps) for w in vecs]
    with mpmath.workdps(dps):
        sd = mpmath.sqrt(mpmath.mpc(args.disc))
        poly_coeffs = [mpmath.mpc(1)] + [
            x + y * sd for x, y in reversed(pairs)]
        roots = mpmath.polyroots(poly_coeffs, maxsteps=400, extraprec=200)
        for root in roots:
            rel = complex_relation(root, values, dps)
            if rel is None:
                continue
            comb = None
            for c, w in zip(rel, vecs):
                if c == 0:
                    continue
                piece = w.scale(basis.ctx.from_rational(c.numerator, c.denominator))
                comb = piece if comb is None else comb + piece
            if comb is None:
                continue
            cp = class_polynomial(comb, group, ctx, check_invariance=False)
            got = cp.sqrt_d_pairs()[:-1]
            if [(int(x), int(y)) for x, y in got] == pairs:
                print("combination:", [str(c) for c in rel])
                print("polynomial :", cp.render())
                print(json.dumps(invariant_to_json(comb), sort_keys=True))
                return 0
    print("no element of the descended space has that minimal polynomial")
    return 1


if __name__ == "__main__":
    sys.exit(main())
