"""Truncated q-expansions with fractional exponents and cyclotomic coefficients.

A series lives on the exponent grid (1/denom) * Z where denom = 24N; terms
map integer exponent numerators to CycloNum coefficients over Q(zeta_24N).
Every series carries a truncation bound `order`: terms with numerator >= order
have been discarded, everything below is exact.  This module also builds the
eta-quotient series that all transformation matrices are recognized against.
"""

from __future__ import annotations


class RecognitionError(ValueError):
    """A linear-recognition system was inconsistent or underdetermined."""

    def __init__(self, message, ambiguous=False):
        super().__init__(message)
        self.ambiguous = ambiguous


class QExpansion:
    __slots__ = ("ctx", "denom", "terms", "order")

    def __init__(self, ctx, denom, terms, order):
        self.ctx = ctx
        self.denom = denom
        self.terms = {e: c for e, c in terms.items() if not c.is_zero() and e < order}
        self.order = order

    def _compat(self, other):
        if self.ctx is not other.ctx or self.denom != other.denom:
            raise ValueError("incompatible expansions")

    def leading_exponent(self):
        if not self.terms:
            return self.order
        return min(self.terms)

    def coefficient(self, e):
        return self.terms.get(e, self.ctx.zero)

    def __add__(self, other):
        self._compat(other)
        order = min(self.order, other.order)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return QExpansion(self.ctx, self.denom, terms, order)

    def __sub__(self, other):
        return self + other.scale(self.ctx.from_rational(-1))

    def scale(self, coeff):
        return QExpansion(self.ctx, self.denom,
                          {e: coeff * c for e, c in self.terms.items()}, self.order)

    def __mul__(self, other):
        self._compat(other)
        if not self.terms or not other.terms:
            return QExpansion(self.ctx, self.denom, {}, min(self.order, other.order))
        la, lb = self.leading_exponent(), other.leading_exponent()
        order = min(self.order + lb, other.order + la)
        acc = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                if e >= order:
                    continue
                prod = c1 * c2
                acc[e] = acc[e] + prod if e in acc else prod
        return QExpansion(self.ctx, self.denom, acc, order)

    def invert(self):
        """Series inverse; the leading coefficient must be invertible."""
        if not self.terms:
            raise ZeroDivisionError("cannot invert the zero series")
        lead = self.leading_exponent()
        c0 = self.terms[lead]
        c0i = c0.inverse()
        # normalized h = self / (c0 q^lead) = 1 + sum h_e q^(e/denom), e > 0
        h = {e - lead: c0i * c for e, c in self.terms.items() if e != lead}
        span = self.order - lead  # exponents of h are exact below span
        g = {0: self.ctx.one}
        keys = sorted(h)
        for e in range(1, span):
            acc = self.ctx.zero
            for d in keys:
                if d > e:
                    break
                ge = g.get(e - d)
                if ge is not None:
                    acc = acc - h[d] * ge
            if not acc.is_zero():
                g[e] = acc
        terms = {e - lead: c0i * c for e, c in g.items()}
        return QExpansion(self.ctx, self.denom, terms, span - lead)

    def act_t(self):
        """Pullback under z -> z+1: the q^(e/denom) term picks up zeta_denom^e.

        The cyclotomic modulus equals denom for every built-in family, so the
        phase is just zeta_M^e.
        """
        if self.ctx.M != self.denom:
            raise ValueError("act_t requires the coefficient field Q(zeta_denom)")
        out = {}
        for e, c in self.terms.items():
            out[e] = self.ctx.zeta(e % self.denom) * c
        return QExpansion(self.ctx, self.denom, out, self.order)

    def galois(self, d):
        """Apply sigma_d to every coefficient."""
        return QExpansion(self.ctx, self.denom,
                          {e: c.galois(d) for e, c in self.terms.items()}, self.order)

    def __eq__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        self._compat(other)
        order = min(self.order, other.order)
        keys = set(self.terms) | set(other.terms)
        return all(self.coefficient(e) == other.coefficient(e)
                   for e in keys if e < order)

    def dump(self):
        """Debug text: one `q^(a/b): coeff` line per term, sorted by exponent."""
        lines = []
        for e in sorted(self.terms):
            g = __import__("math").gcd(abs(e), self.denom) if e else self.denom
            lines.append("q^(%d/%d): %s" % (e // g, self.denom // g, self.terms[e]))
        return "\n".join(lines)


# -- eta-quotient constructors -------------------------------------------------


def _pentagonal_exponents(limit):
    """Pairs (exponent-over-24, sign) of eta's expansion: exponents (6j+1)^2."""
    out = []
    j = 0
    while True:
        for jj in (j, -j - 1):
            e = (6 * jj + 1) ** 2
            if e < limit:
                out.append((e, 1 if jj % 2 == 0 else -1))
        if (6 * j + 1) ** 2 >= limit and (6 * (-j - 1) + 1) ** 2 >= limit:
            break
        j += 1
    return sorted(out)


def _partition_numbers(n):
    """p(0..n) by Euler's pentagonal recurrence."""
    p = [0] * (n + 1)
    p[0] = 1
    for m in range(1, n + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            g2 = k * (3 * k + 1) // 2
            if g1 > m and g2 > m:
                break
            sign = 1 if k % 2 == 1 else -1
            if g1 <= m:
                total += sign * p[m - g1]
            if g2 <= m:
                total += sign * p[m - g2]
            k += 1
        p[m] = total
    return p


def eta_series(ctx, denom, order):
    """eta(tau) on the (1/denom) grid: requires 24 | denom."""
    if denom % 24 != 0:
        raise ValueError("denominator must be divisible by 24")
    s = denom // 24
    terms = {}
    for e24, sign in _pentagonal_exponents((order + s - 1) // s + 1):
        e = e24 * s
        if e < order:
            terms[e] = ctx.from_rational(sign)
    return QExpansion(ctx, denom, terms, order)


def eta_shifted(ctx, N, k, order):
    """eta((tau+k)/N) over Q(zeta_24N) on the 1/(24N) grid.

    Substituting z = (tau+k)/N sends the q_z^(e/24) term to
    zeta_24N^(k e) q^(e/24N).
    """
    denom = 24 * N
    if ctx.M != denom:
        raise ValueError("context modulus must be 24N")
    terms = {}
    for e24, sign in _pentagonal_exponents(order + 1):
        if e24 < order:
            coeff = ctx.zeta((k * e24) % denom)
            if sign < 0:
                coeff = -coeff
            terms[e24] = coeff
    return QExpansion(ctx, denom, terms, order)


def eta_scaled(ctx, N, order):
    """eta(N tau) on the 1/(24N) grid."""
    denom = 24 * N
    terms = {}
    for e24, sign in _pentagonal_exponents(order // (N * N) + 2):
        e = e24 * N * N
        if e < order:
            terms[e] = ctx.from_rational(sign)
    return QExpansion(ctx, denom, terms, order)


def eta_inverse(ctx, denom, order):
    """1/eta(tau) = q^(-1/24) * sum p(n) q^n on the (1/denom) grid."""
    if denom % 24 != 0:
        raise ValueError("denominator must be divisible by 24")
    s = denom // 24
    nmax = (order + s) // (24 * s) + 1
    p = _partition_numbers(nmax)
    terms = {}
    for n in range(nmax + 1):
        e = -s + 24 * s * n
        if e < order:
            terms[e] = ctx.from_rational(p[n])
    return QExpansion(ctx, denom, terms, order)


def nu_shifted(ctx, N, k, order):
    """eta((tau+k)/N) / eta(tau): leading exponent (1-N)/(24N)."""
    return eta_shifted(ctx, N, k, order + N) * eta_inverse(ctx, 24 * N, order + N)


def nu_scaled(ctx, N, order, sqrt_n=None):
    """sqrt(N) eta(N tau) / eta(tau): leading exponent (N-1)/24."""
    if sqrt_n is None:
        sqrt_n = ctx.sqrt_prime(N)
    prod = eta_scaled(ctx, N, order + N) * eta_inverse(ctx, 24 * N, order + N)
    return prod.scale(sqrt_n)


# -- exact recognition -----------------------------------------------------------


def recognize_monomial(target, basis):
    """Find (index, phase) with target = phase * basis[index], exactly.

    The nu-type families satisfy genuine linear relations (the pentagonal
    exponents miss residue classes mod N for N > 3), so a general linear
    solve against all expansions can be underdetermined.  The S, T and
    sigma_d images of a single basis function are always exact scalar
    multiples of one other basis function, which this checks term by term
    over the full truncation; phases of distinct basis functions differ,
    so the match is unique.
    """
    match = None
    for idx, cand in enumerate(basis):
        order = min(target.order, cand.order)
        keys = [e for e in set(target.terms) | set(cand.terms) if e < order]
        if not keys:
            continue
        phase = None
        ok = True
        for e in keys:
            a = target.coefficient(e)
            b = cand.coefficient(e)
            if b.is_zero():
                if not a.is_zero():
                    ok = False
                    break
                continue
            if a.is_zero():
                ok = False
                break
            r = a * b.inverse()
            if phase is None:
                phase = r
            elif r != phase:
                ok = False
                break
        if ok and phase is not None:
            if match is not None:
                raise RecognitionError("monomial image matches two basis functions")
            match = (idx, phase)
    if match is None:
        raise RecognitionError("target is not proportional to any basis function")
    return match


# -- exact linear recognition ---------------------------------------------------


def recognize_linear(target, basis, min_rows=None):
    """Solve target = sum c_i basis_i exactly over the coefficient field.

    Builds one equation per exponent present below the common truncation
    order and Gauss-eliminates over Q(zeta_M).  Raises RecognitionError
    when the system is inconsistent (target outside the span) or when the
    truncation leaves the solution underdetermined (ambiguous=True).
    """
    if not basis:
        raise ValueError("empty basis")
    ctx = basis[0].ctx
    n = len(basis)
    order = min([target.order] + [f.order for f in basis])
    exps = set(target.terms)
    for f in basis:
        exps.update(f.terms)
    exps = sorted(e for e in exps if e < order)
    if min_rows is None:
        min_rows = 3 * n
    if len(exps) < min_rows:
        raise RecognitionError(
            "only %d usable exponents for %d unknowns" % (len(exps), n),
            ambiguous=True)

    rows = [[f.coefficient(e) for f in basis] + [target.coefficient(e)]
            for e in exps]
    # Gaussian elimination with partial pivoting by first nonzero entry.
    pivot_rows = []
    pivot_cols = []
    for col in range(n):
        pr = None
        for r in range(len(rows)):
            if r in pivot_rows:
                continue
            if not rows[r][col].is_zero():
                pr = r
                break
        if pr is None:
            continue
        pivot_rows.append(pr)
        pivot_cols.append(col)
        inv = rows[pr][col].inverse()
        rows[pr] = [inv * v for v in rows[pr]]
        for r in range(len(rows)):
            if r != pr and not rows[r][col].is_zero():
                f = rows[r][col]
                rows[r] = [v - f * w for v, w in zip(rows[r], rows[pr])]
    if len(pivot_cols) < n:
        raise RecognitionError(
            "recognition system is rank deficient (%d < %d)" % (len(pivot_cols), n),
            ambiguous=True)
    sol = [ctx.zero] * n
    for pr, pc in zip(pivot_rows, pivot_cols):
        sol[pc] = rows[pr][n]
    # consistency: every non-pivot row must have vanished entirely
    for r, row in enumerate(rows):
        if r in pivot_rows:
            continue
        if any(not v.is_zero() for v in row):
            raise RecognitionError("target lies outside the basis span")
    return sol
