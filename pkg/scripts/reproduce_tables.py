#!/usr/bin/env python3
"""End-to-end reproduction of the worked discriminants.

For each case: build the reciprocity group, find the minimal invariant
degree, descend to the canonical rational basis, and print the class
polynomial of every basis vector.  Finishes with the two comparison
polynomials for D = -91 (the Hilbert polynomial and the published
quadratics from the level-120 family).
"""

import argparse
import time

from classinv import (FunctionBasis, OrderContext, build_group,
                      class_invariant_basis, class_polynomial,
                      hilbert_class_polynomial, min_invariant_degree)

CASES = [
    (-571, "g72", None),
    (-299, "g72", None),
    (-91, "nu", 5),
    (-91, "nu", 7),
]


def run_case(disc, family, N, seed):
    basis = FunctionBasis.g_family() if family == "g72" else FunctionBasis.nu_family(N)
    ctx = OrderContext.make(disc, basis.level)
    t0 = time.time()
    group = build_group(ctx)
    degree = min_invariant_degree(group, basis)
    vecs, report = class_invariant_basis(group, basis, degree=degree, seed=seed)
    print("D=%d  level=%d  |G|=%d  |H|=%d  det-image=%d  degree=%d  dim=%d  "
          "(%.1fs)" % (disc, basis.level, group.order, group.h_order,
                       len(group.det_image), degree, len(vecs),
                       time.time() - t0))
    for i, w in enumerate(vecs):
        t1 = time.time()
        poly = class_polynomial(w, group, ctx, check_invariance=False)
        print("  w%-2d  %s   (%.1fs)" % (i, poly.render(), time.time() - t1))
    print()


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    for disc, family, N in CASES:
        run_case(disc, family, N, args.seed)
    print("Hilbert polynomial for D=-91:")
    print("  %s" % hilbert_class_polynomial(-91).render())


if __name__ == "__main__":
    main()
