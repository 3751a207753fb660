"""Class polynomials: evaluate invariants over the class group and recognize
integer coefficients.

For each reduced form class an equivalent representative with leading
coefficient coprime to the level is chosen; the corresponding reciprocity
matrix transforms the invariant symbolically, the transformed polynomial is
evaluated at the form's CM point with mpmath eta products, and the monic
product over all classes is expanded and recognized coefficient by
coefficient in Z[theta].  Wrong transformation recipes do not survive this
gate: recognition residuals blow up or printed polynomials fail to match.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

import mpmath
from gmpy2 import mpq

from . import numeric
from .modmat import ResidueMatrix
from .reciprocity import VerificationError, verify_class_invariant
from .weber import action_of


class RecognitionFailure(ArithmeticError):
    pass


@dataclass(frozen=True)
class QuadraticForm:
    a: int
    b: int
    c: int

    def disc(self):
        return self.b * self.b - 4 * self.a * self.c

    def content(self):
        return gcd(gcd(self.a, self.b), self.c)

    def is_reduced(self):
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if b < 0 and (abs(b) == a or a == c):
            return False
        return True

    def value(self, x, y):
        return self.a * x * x + self.b * x * y + self.c * y * y

    def transform(self, x, u, y, v):
        """Right action of (x, u; y, v) in SL2(Z)."""
        if x * v - u * y != 1:
            raise ValueError("transform must be unimodular")
        a2 = self.value(x, y)
        c2 = self.value(u, v)
        b2 = 2 * (self.a * x * u + self.c * y * v) + self.b * (x * v + y * u)
        return QuadraticForm(a2, b2, c2)

    def cm_point(self, dps):
        with mpmath.workdps(dps):
            return (-self.b + mpmath.sqrt(mpmath.mpc(self.disc()))) / (2 * self.a)


def reduced_forms(D):
    """All reduced primitive forms of discriminant D < 0, sorted."""
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError("discriminant must be negative and 0 or 1 mod 4")
    out = []
    amax = isqrt(-D // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a) != 0:
                continue
            c = (b * b - D) // (4 * a)
            if c < a:
                continue
            if b < 0 and a == c:
                continue
            f = QuadraticForm(a, b, c)
            if f.content() == 1:
                out.append(f)
    return sorted(out, key=lambda f: (f.a, f.b, f.c))


def class_number(D):
    return len(reduced_forms(D))


def coprime_representative(form, M, bound=30):
    """Equivalent form whose leading coefficient is coprime to M.

    Searches primitive (x, y) by increasing represented value; a primitive
    form represents integers coprime to any modulus, so this terminates for
    honest inputs.
    """
    if gcd(form.a, M) == 1:
        return form
    candidates = []
    for x in range(-bound, bound + 1):
        for y in range(-bound, bound + 1):
            if gcd(x, y) != 1:
                continue
            v = form.value(x, y)
            if v > 0 and gcd(v, M) == 1:
                candidates.append((v, x, y))
    if not candidates:
        raise VerificationError(
            "no representative of %r coprime to %d within search bound" % (form, M))
    _, x, y = min(candidates)
    g, u0, v0 = _ext_gcd(x, y)
    assert g == 1
    # columns (x, y) and (-v0, u0) give determinant x*u0 - (-v0)*y = 1
    new = form.transform(x, -v0, y, u0)
    # normalize the middle coefficient into (-a, a]; translations keep a
    a, b, c = new.a, new.b, new.c
    k = (a - b) // (2 * a)
    b2 = b + 2 * a * k
    c2 = a * k * k + b * k + c
    assert -a < b2 <= a
    return QuadraticForm(a, b2, c2)


def _ext_gcd(a, b):
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, u, v = _ext_gcd(b, a % b)
    return (g, v, u - (a // b) * v)


def form_matrix(form, ctx):
    """The reciprocity matrix of a form class modulo the level.

    For gcd(a, M) = 1 the class acts through (a, (b - B)/2; 0, 1); the
    recipe is validated by the printed class polynomials, not trusted.
    """
    M = ctx.level
    if gcd(form.a, M) != 1:
        raise ValueError("leading coefficient must be coprime to the level")
    if (form.b - ctx.B) % 2 != 0:
        raise ValueError("form and order have incompatible parity")
    return ResidueMatrix(form.a, (form.b - ctx.B) // 2, 0, 1, M)


# -- numeric evaluation -------------------------------------------------------------


def eval_invariant(poly, tau, dps):
    """Value of an invariant polynomial at a point, by direct eta products."""
    basis = poly.basis
    with mpmath.workdps(dps + 10):
        tau = mpmath.mpc(tau)
        if tau.imag <= 0:
            raise ValueError("tau must lie in the upper half plane")
        vals = [basis.value(i, tau, dps) for i in range(basis.size)]
        acc = mpmath.mpc(0)
        for alpha, coeff in poly.terms.items():
            term = coeff.embed(dps)
            for i, e in enumerate(alpha):
                if e:
                    term *= vals[i] ** e
            acc += term
        return acc


def conjugate_values(poly, group, ctx, dps, check_invariance=True):
    """One value per form class: transform by the class matrix, evaluate at
    the class CM point.  The multiset is what the class polynomial sees."""
    if check_invariance and not verify_class_invariant(poly, group, poly.basis):
        raise VerificationError("input is not a class invariant")
    values = []
    for form in reduced_forms(ctx.disc):
        rep = coprime_representative(form, ctx.level)
        mat = form_matrix(rep, ctx)
        transformed = poly.transform(action_of(poly.basis, mat), det=mat.det())
        tau = rep.cm_point(dps + 10)
        values.append(eval_invariant(transformed, tau, dps))
    return values


# -- recognition --------------------------------------------------------------------


@dataclass(frozen=True)
class ClassPolynomial:
    """Monic polynomial with coefficients u + v*theta recognized in Z[theta];
    coefficient k of t^k is (u_k, v_k), k = 0..degree, leading (1, 0)."""

    disc: int
    B: int
    C: int
    coeffs: tuple  # of (int, int), low to high

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_rational(self):
        return all(v == 0 for _, v in self.coeffs)

    def sqrt_d_pairs(self):
        """Coefficients rewritten as x + y*sqrt(D): u + v*theta with
        theta = (-B + sqrt(D))/2 gives x = u - vB/2, y = v/2."""
        out = []
        for u, v in self.coeffs:
            out.append((mpq(2 * u - v * self.B, 2), mpq(v, 2)))
        return out

    def render(self, var="t"):
        parts = []
        for k in range(self.degree, -1, -1):
            u, v = self.coeffs[k]
            if u == 0 and v == 0:
                continue
            x, y = mpq(2 * u - v * self.B, 2), mpq(v, 2)
            body = _render_coeff(x, y, self.disc)
            if k == 0:
                term = body
            else:
                tpow = var if k == 1 else "%s^%d" % (var, k)
                if body == "1":
                    term = tpow
                elif body == "-1":
                    term = "-" + tpow
                elif body.startswith("(") or ("sqrt" not in body and "/" not in body):
                    term = "%s*%s" % (body, tpow)
                else:
                    term = "(%s)*%s" % (body, tpow)
            if not parts:
                parts.append(term)
            else:
                parts.append(("- " + term[1:]) if term.startswith("-") else ("+ " + term))
        return " ".join(parts) if parts else "0"

    def to_json(self):
        return {
            "discriminant": self.disc,
            "thetaPolynomial": [1, self.B, self.C],
            "degree": self.degree,
            "coefficients": [[int(u), int(v)] for u, v in self.coeffs],
            "rendered": self.render(),
        }


def _render_coeff(x, y, D):
    if y == 0:
        return str(x)
    sy = "%s*sqrt(%d)" % (y, D) if abs(y) != 1 else ("sqrt(%d)" % D if y > 0 else "-sqrt(%d)" % D)
    if x == 0:
        return sy
    if y > 0:
        return "(%s+%s)" % (x, sy)
    return "(%s%s)" % (x, sy)


def _recognize_in_order(value, disc, B, dps):
    """value = u + v*theta with theta = (-B + sqrt(D))/2, u, v integers."""
    with mpmath.workdps(dps):
        sq = mpmath.sqrt(-disc)
        v = 2 * value.imag / sq
        vr = int(mpmath.nint(v))
        u = value.real - vr * mpmath.mpf(-B) / 2
        ur = int(mpmath.nint(u))
        resid = abs(value - (ur + vr * mpmath.mpc(-B, sq) / 2))
        return ur, vr, resid


def class_polynomial(poly, group, ctx, dps=None, check_invariance=True,
                     max_retries=3):
    """Expand prod (t - value) over the class group and recognize the
    coefficients in Z[theta]; doubles the precision on residual failure."""
    if dps is None:
        dps = default_digits(ctx.disc)
    tol = mpmath.mpf(10) ** -10
    last_resid = None
    for attempt in range(max_retries + 1):
        values = conjugate_values(poly, group, ctx, dps,
                                  check_invariance=check_invariance and attempt == 0)
        with mpmath.workdps(dps):
            coeffs = [mpmath.mpc(1)]
            for val in values:
                nxt = [mpmath.mpc(0)] * (len(coeffs) + 1)
                for i, c in enumerate(coeffs):
                    nxt[i] += c * (-val)
                    nxt[i + 1] += c
                coeffs = nxt
            recognized = []
            worst = mpmath.mpf(0)
            for c in coeffs[:-1]:
                u, v, resid = _recognize_in_order(c, ctx.disc, ctx.B, dps)
                worst = max(worst, resid)
                recognized.append((u, v))
            if worst < tol:
                recognized.append((1, 0))
                return ClassPolynomial(ctx.disc, ctx.B, ctx.C, tuple(recognized))
        last_resid = worst
        dps *= 2
    raise RecognitionFailure(
        "coefficients failed to land in Z[theta]; last residual %s"
        % mpmath.nstr(last_resid, 6))


def default_digits(disc):
    h = class_number(disc)
    return max(150, 15 * h + 10 * isqrt(-disc))


# -- the j-function calibration path -------------------------------------------------


def hilbert_class_polynomial(D, dps=None, max_retries=3):
    """Minimal polynomial of j(theta) from the integer q-series of j."""
    if dps is None:
        dps = default_digits(D)
    tol = mpmath.mpf(10) ** -10
    for attempt in range(max_retries + 1):
        with mpmath.workdps(dps):
            values = [numeric.j_value(f.cm_point(dps + 10), dps)
                      for f in reduced_forms(D)]
            coeffs = [mpmath.mpc(1)]
            for val in values:
                nxt = [mpmath.mpc(0)] * (len(coeffs) + 1)
                for i, c in enumerate(coeffs):
                    nxt[i] += c * (-val)
                    nxt[i + 1] += c
                coeffs = nxt
            recognized = []
            ok = True
            for c in coeffs[:-1]:
                u = int(mpmath.nint(c.real))
                resid = abs(c - u)
                if resid >= tol:
                    ok = False
                    break
                recognized.append((u, 0))
            if ok:
                recognized.append((1, 0))
                B = 1 if D % 2 else 0
                C = (B * B - D) // 4
                return ClassPolynomial(D, B, C, tuple(recognized))
        dps *= 2
    raise RecognitionFailure("Hilbert polynomial coefficients did not round")
