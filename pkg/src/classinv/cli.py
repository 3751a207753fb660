"""Command line front end: stword, find, classpoly, verify.

Exit codes: 2 bad input, 3 verification failure, 4 precision exhaustion.
CLASSINV_DIGITS overrides the default working precision.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from gmpy2 import mpq

from . import numeric
from .classpoly import (RecognitionFailure, class_polynomial, default_digits,
                        hilbert_class_polynomial)
from .modmat import NotUnimodular, ResidueMatrix, decompose_st
from .qseries import RecognitionError
from .reciprocity import (InvariantPolynomial, OrderContext, VerificationError,
                          build_group, class_invariant_basis,
                          min_invariant_degree, verify_class_invariant)
from .weber import FunctionBasis

EXIT_BAD_INPUT = 2
EXIT_VERIFICATION = 3
EXIT_PRECISION = 4


@dataclass
class JobSpec:
    disc: int
    family: str            # "nu" or "g72"
    N: int | None
    degree: int | None
    digits: int | None
    seed: int
    out_format: str

    def validate(self):
        if self.disc >= -4 or self.disc % 4 not in (0, 1):
            raise ValueError("discriminant must be < -4 and 0 or 1 mod 4")
        if self.family == "nu":
            if self.N is None or self.N < 3:
                raise ValueError("the nu family needs a prime N via --N/--level-N")
            if any(self.N % k == 0 for k in range(2, self.N)):
                raise ValueError("N must be prime")
        elif self.family != "g72":
            raise ValueError("family must be nu or g72")


def _basis_for(spec):
    if spec.family == "g72":
        return FunctionBasis.g_family()
    return FunctionBasis.nu_family(spec.N)


def _spec_from_args(args):
    family = args.family
    N = getattr(args, "N", None)
    if getattr(args, "level_N", None) is not None:
        family, N = "nu", args.level_N
    digits = args.digits
    if digits is None and os.environ.get("CLASSINV_DIGITS"):
        digits = int(os.environ["CLASSINV_DIGITS"])
    spec = JobSpec(disc=args.disc, family=family, N=N,
                   degree=getattr(args, "degree", None), digits=digits,
                   seed=getattr(args, "seed", 0),
                   out_format=("json" if getattr(args, "json", False) else
                               getattr(args, "out", "text")))
    spec.validate()
    return spec


def _emit(payload, spec_or_fmt, text_renderer):
    fmt = spec_or_fmt if isinstance(spec_or_fmt, str) else spec_or_fmt.out_format
    if fmt == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(text_renderer())


def _load_invariant(path_or_index, basis, group, spec):
    """--invariant is either an index into the descended basis or a JSON file."""
    try:
        index = int(path_or_index)
    except ValueError:
        index = None
    if index is not None:
        vecs, _ = class_invariant_basis(group, basis, degree=spec.degree,
                                        seed=spec.seed)
        if not (0 <= index < len(vecs)):
            raise ValueError("invariant index out of range (basis has %d)" % len(vecs))
        return vecs[index]
    with open(path_or_index) as fh:
        data = json.load(fh)
    return invariant_from_json(data, basis)


def invariant_from_json(data, basis=None):
    if basis is None:
        if data.get("family") == "g72":
            basis = FunctionBasis.g_family()
        else:
            basis = FunctionBasis.nu_family(data["level"] // 24)
    if data["level"] != basis.level or list(data["basisLabels"]) != list(basis.labels):
        raise ValueError("invariant file does not match the requested basis")
    ctx = basis.ctx
    terms = {}
    for item in data["terms"]:
        coeff = ctx.from_coeffs([mpq(c) for c in item["coeff"]])
        terms[tuple(item["monomial"])] = coeff
    return InvariantPolynomial(basis, data["degree"], terms)


def invariant_to_json(poly, extra=None):
    data = poly.to_json()
    data["family"] = poly.basis.name
    if extra:
        data.update(extra)
    return data


# -- subcommands ---------------------------------------------------------------------


def cmd_stword(args):
    try:
        entries = [int(x) for x in args.matrix.split(",")]
        if len(entries) != 4:
            raise ValueError("matrix needs four comma-separated entries")
        mat = ResidueMatrix(*entries, m=args.modulus)
        word = decompose_st(mat)
    except (ValueError, NotUnimodular) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_BAD_INPUT
    payload = {"modulus": args.modulus, "matrix": list(mat.entries()),
               "word": str(word), "length": len(word)}
    if args.verify:
        back = word.evaluate(args.modulus)
        payload["reMultiplied"] = list(back.entries())
        payload["verified"] = back == mat
    def text():
        lines = [str(word)]
        if args.verify:
            back = word.evaluate(args.modulus)
            lines.append("re-multiplied: (%d,%d;%d,%d) mod %d  [%s]" % (
                *back.entries(), args.modulus,
                "ok" if back == mat else "MISMATCH"))
        return "\n".join(lines)
    _emit(payload, "json" if args.json else "text", text)
    return 0


def cmd_find(args):
    try:
        spec = _spec_from_args(args)
        basis = _basis_for(spec)
        ctx = OrderContext.make(spec.disc, basis.level, B=args.B, C=args.C)
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_BAD_INPUT
    try:
        group = build_group(ctx)
        degree = spec.degree or min_invariant_degree(group, basis)
        vecs, report = class_invariant_basis(group, basis, degree=degree,
                                             seed=spec.seed)
    except VerificationError as exc:
        print("verification failure: %s" % exc, file=sys.stderr)
        return EXIT_VERIFICATION
    except RecognitionError as exc:
        print("precision exhaustion: %s" % exc, file=sys.stderr)
        return EXIT_PRECISION
    payload = {
        "discriminant": spec.disc,
        "level": basis.level,
        "family": basis.name,
        "thetaPolynomial": [1, ctx.B, ctx.C],
        "groupOrder": group.order,
        "hOrder": group.h_order,
        "detImageOrder": len(group.det_image),
        "detSurjective": group.det_surjective(),
        "degree": degree,
        "dimension": len(vecs),
        "descent": report.to_json(),
        "basisLabels": list(basis.labels),
        "vectors": [invariant_to_json(w) for w in vecs],
        "verification": "ok",
    }
    def text():
        lines = ["D=%d level=%d family=%s" % (spec.disc, basis.level, basis.name),
                 "|G|=%d |H|=%d det-image=%d degree=%d dim=%d" % (
                     group.order, group.h_order, len(group.det_image),
                     degree, len(vecs))]
        for i, w in enumerate(vecs):
            lines.append("w%d = %s" % (i, w))
        return "\n".join(lines)
    _emit(payload, spec, text)
    return 0


def cmd_classpoly(args):
    try:
        spec = _spec_from_args(args)
        basis = _basis_for(spec)
        ctx = OrderContext.make(spec.disc, basis.level, B=args.B, C=args.C)
        group = build_group(ctx)
        poly = _load_invariant(args.invariant, basis, group, spec)
    except (ValueError, OSError, KeyError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_BAD_INPUT
    try:
        if not verify_class_invariant(poly, group, basis):
            print("verification failure: input is not a class invariant",
                  file=sys.stderr)
            return EXIT_VERIFICATION
        cp = class_polynomial(poly, group, ctx, dps=spec.digits,
                              check_invariance=False)
    except RecognitionFailure as exc:
        print("precision exhaustion: %s" % exc, file=sys.stderr)
        return EXIT_PRECISION
    except numeric.PrecisionError as exc:
        print("precision exhaustion: %s" % exc, file=sys.stderr)
        return EXIT_PRECISION
    payload = cp.to_json()
    payload["seed"] = spec.seed
    payload["digits"] = spec.digits or default_digits(spec.disc)
    _emit(payload, spec, lambda: cp.render())
    return 0


def cmd_verify(args):
    try:
        spec = _spec_from_args(args)
        basis = _basis_for(spec)
        ctx = OrderContext.make(spec.disc, basis.level, B=args.B, C=args.C)
        group = build_group(ctx)
        poly = _load_invariant(args.invariant, basis, group, spec)
    except (ValueError, OSError, KeyError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_BAD_INPUT
    ok = verify_class_invariant(poly, group, basis, exhaustive=args.exhaustive)
    payload = {"discriminant": spec.disc, "level": basis.level,
               "exhaustive": bool(args.exhaustive), "classInvariant": ok}
    _emit(payload, spec, lambda: "class invariant" if ok else "NOT a class invariant")
    return 0 if ok else EXIT_VERIFICATION


def cmd_hilbert(args):
    try:
        if args.disc >= -4 or args.disc % 4 not in (0, 1):
            raise ValueError("discriminant must be < -4 and 0 or 1 mod 4")
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_BAD_INPUT
    try:
        cp = hilbert_class_polynomial(args.disc, dps=args.digits)
    except RecognitionFailure as exc:
        print("precision exhaustion: %s" % exc, file=sys.stderr)
        return EXIT_PRECISION
    _emit(cp.to_json(), "json" if args.json else "text", lambda: cp.render())
    return 0


def _add_common(p, with_degree=True):
    p.add_argument("--disc", type=int, required=True, help="discriminant D < -4")
    p.add_argument("--family", choices=("nu", "g72"), default="g72")
    p.add_argument("--N", type=int, default=None, help="prime N for the nu family")
    p.add_argument("--level-N", dest="level_N", type=int, default=None,
                   help="shorthand for --family nu --N <value>")
    if with_degree:
        p.add_argument("--degree", type=int, default=None)
    p.add_argument("--digits", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--B", type=int, default=None, help="override theta trace term")
    p.add_argument("--C", type=int, default=None, help="override theta norm term")
    p.add_argument("--json", action="store_true")


def build_parser():
    ap = argparse.ArgumentParser(prog="classinv",
                                 description="class invariants via group actions "
                                             "on eta quotients")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stword", help="decompose a determinant-one matrix into S,T")
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--matrix", type=str, required=True, help="a,b,c,d")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stword)

    p = sub.add_parser("find", help="compute a descended basis of class invariants")
    _add_common(p)
    p.set_defaults(func=cmd_find)

    p = sub.add_parser("classpoly", help="class polynomial of an invariant")
    _add_common(p)
    p.add_argument("--invariant", type=str, required=True,
                   help="index into the descended basis, or a JSON file")
    p.add_argument("--out", choices=("json", "text"), default="text")
    p.set_defaults(func=cmd_classpoly)

    p = sub.add_parser("verify", help="check the full fixed-point criterion")
    _add_common(p, with_degree=True)
    p.add_argument("--invariant", type=str, required=True)
    p.add_argument("--exhaustive", action="store_true",
                   help="iterate every group element instead of generators")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("hilbert", help="Hilbert class polynomial via the j series")
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--digits", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_hilbert)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
