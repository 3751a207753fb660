"""Exact arithmetic in the cyclotomic field Q(zeta_M).

Elements are stored on the power basis 1, z, ..., z^(phi(M)-1) reduced
modulo the M-th cyclotomic polynomial, with gmpy2 rational coefficients.
Equality is coefficient-vector equality, so every value is canonical.
The module also provides the Galois action z -> z^d, square roots of
primes via quadratic Gauss sums, and complex embedding at arbitrary
precision through mpmath.
"""

from __future__ import annotations

import threading
from math import gcd

import mpmath
from gmpy2 import mpq, mpz

_Q0 = mpq(0)
_Q1 = mpq(1)


def _poly_mul_int(a, b):
    out = [mpz(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return out


def _poly_divexact_int(num, den):
    """Exact division of integer polynomials, coefficients low-to-high."""
    num = list(num)
    dd = len(den) - 1
    lead = den[dd]
    quot = [mpz(0)] * (len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k]
        if c == 0:
            continue
        q, r = divmod(c, lead)
        if r != 0:
            raise ArithmeticError("division is not exact")
        quot[k - dd] = q
        for j in range(dd + 1):
            num[k - dd + j] -= q * den[j]
    if any(c != 0 for c in num):
        raise ArithmeticError("division left a remainder")
    return quot


_cyclo_poly_cache = {}
_cyclo_poly_lock = threading.Lock()


def cyclotomic_polynomial(M):
    """Integer coefficients of Phi_M, low-to-high, monic."""
    with _cyclo_poly_lock:
        if M in _cyclo_poly_cache:
            return _cyclo_poly_cache[M]
    if M == 1:
        poly = [mpz(-1), mpz(1)]
    else:
        poly = [mpz(-1)] + [mpz(0)] * (M - 1) + [mpz(1)]  # x^M - 1
        for d in range(1, M):
            if M % d == 0:
                poly = _poly_divexact_int(poly, cyclotomic_polynomial(d))
    with _cyclo_poly_lock:
        _cyclo_poly_cache[M] = poly
    return poly


def euler_phi(M):
    n, out = M, M
    p = 2
    while p * p <= n:
        if n % p == 0:
            out -= out // p
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out -= out // n
    return out


class CycloContext:
    """Shared immutable data for one modulus M: Phi_M, reduced powers of
    zeta, and cached complex roots of unity per working precision.

    Contexts are interned per modulus; lazy caches are lock-protected so a
    context can be shared by concurrent readers.
    """

    _registry = {}
    _registry_lock = threading.Lock()

    def __new__(cls, M):
        with cls._registry_lock:
            ctx = cls._registry.get(M)
            if ctx is None:
                ctx = super().__new__(cls)
                ctx._init(M)
                cls._registry[M] = ctx
            return ctx

    def _init(self, M):
        if M < 1:
            raise ValueError("modulus must be positive")
        self.M = M
        phi_poly = cyclotomic_polynomial(M)
        self.phi = len(phi_poly) - 1
        self.phi_poly = tuple(phi_poly)
        # x^k mod Phi_M for all k < M, as integer vectors of length phi.
        pows = [[mpz(0)] * self.phi for _ in range(M)]
        cur = [mpz(0)] * self.phi
        cur[0] = mpz(1)
        for k in range(M):
            pows[k] = list(cur)
            # multiply by x and reduce once
            high = cur[-1]
            cur = [mpz(0)] + cur[:-1]
            if high:
                for j in range(self.phi):
                    cur[j] -= high * phi_poly[j]
        self.zeta_pows = tuple(tuple(row) for row in pows)
        self._roots = {}
        self._lock = threading.Lock()
        self.zero = CycloNum._make(self, tuple([_Q0] * self.phi))
        self.one = self.from_rational(1)

    # -- constructors ------------------------------------------------------

    def from_rational(self, a, b=1):
        c = [_Q0] * self.phi
        c[0] = mpq(a, b)
        return CycloNum._make(self, tuple(c))

    def from_coeffs(self, coeffs):
        coeffs = [mpq(c) for c in coeffs]
        if len(coeffs) > self.phi:
            raise ValueError("coefficient vector too long")
        coeffs += [_Q0] * (self.phi - len(coeffs))
        return CycloNum._make(self, tuple(coeffs))

    def zeta(self, k=1):
        """zeta_M^k as an element."""
        row = self.zeta_pows[k % self.M]
        return CycloNum._make(self, tuple(mpq(c) for c in row))

    def zeta_order(self, order, k=1):
        """zeta_order^k embedded in this field; order must divide M."""
        if self.M % order != 0:
            raise ValueError("order does not divide the modulus")
        return self.zeta((self.M // order) * k)

    def sqrt_prime(self, p):
        """Square root of an odd prime p | M via the quadratic Gauss sum.

        Requires 4p | M so that zeta_p and i both live in the field.  The
        returned element squares to p exactly and embeds to the positive
        real root.
        """
        if p < 3 or self.M % p != 0 or any(p % k == 0 for k in range(2, p)):
            raise ValueError("p must be an odd prime dividing the modulus")
        if self.M % (4 * p) != 0:
            raise ValueError("need 4p | M for a usable Gauss sum")
        acc = [_Q0] * self.phi
        step = self.M // p
        for k in range(1, p):
            sign = 1 if pow(k, (p - 1) // 2, p) == 1 else -1
            row = self.zeta_pows[(k * step) % self.M]
            for j in range(self.phi):
                if row[j]:
                    acc[j] += sign * row[j]
        g = CycloNum._make(self, tuple(acc))
        if p % 4 == 3:
            g = g * self.zeta(self.M // 4) * self.from_rational(-1)
        if g * g != self.from_rational(p):
            raise AssertionError("Gauss sum does not square to p")
        return g

    # -- numerics ----------------------------------------------------------

    def roots_of_unity(self, dps):
        with self._lock:
            cached = self._roots.get(dps)
        if cached is not None:
            return cached
        with mpmath.workdps(dps):
            base = mpmath.expjpi(mpmath.mpf(2) / self.M)
            roots = [mpmath.mpc(1)]
            for _ in range(self.phi - 1):
                roots.append(roots[-1] * base)
        with self._lock:
            self._roots[dps] = roots
        return roots

    def __repr__(self):
        return "CycloContext(M=%d)" % self.M


class CycloNum:
    """Immutable element of Q(zeta_M)."""

    __slots__ = ("ctx", "coeffs", "_hash")

    @staticmethod
    def _make(ctx, coeffs):
        x = object.__new__(CycloNum)
        object.__setattr__(x, "ctx", ctx)
        object.__setattr__(x, "coeffs", coeffs)
        object.__setattr__(x, "_hash", None)
        return x

    def __setattr__(self, *args):
        raise AttributeError("CycloNum is immutable")

    # -- basic queries ------------------------------------------------------

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def is_rational(self):
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self):
        if not self.is_rational():
            raise ValueError("not a rational element")
        return self.coeffs[0]

    # -- ring operations ----------------------------------------------------

    def _check(self, other):
        if not isinstance(other, CycloNum):
            if isinstance(other, (int, mpz, mpq)):
                return self.ctx.from_rational(other)
            return NotImplemented
        if other.ctx is not self.ctx:
            raise ValueError("cyclotomic modulus mismatch: %d vs %d"
                             % (self.ctx.M, other.ctx.M))
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return CycloNum._make(
            self.ctx, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycloNum._make(self.ctx, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return CycloNum._make(
            self.ctx, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        ctx = self.ctx
        phi = ctx.phi
        nz_a = [(i, c) for i, c in enumerate(self.coeffs) if c != 0]
        nz_b = [(j, c) for j, c in enumerate(other.coeffs) if c != 0]
        if not nz_a or not nz_b:
            return ctx.zero
        acc = [_Q0] * (2 * phi - 1)
        for i, a in nz_a:
            for j, b in nz_b:
                acc[i + j] += a * b
        # fold the overflow back using precomputed reduced powers
        out = acc[:phi]
        for k in range(phi, 2 * phi - 1):
            c = acc[k]
            if c:
                row = ctx.zeta_pows[k % ctx.M]  # x^M = 1 mod Phi_M
                for j in range(phi):
                    if row[j]:
                        out[j] += c * row[j]
        return CycloNum._make(ctx, tuple(out))

    __rmul__ = __mul__

    def inverse(self):
        """Field inverse via the extended Euclidean algorithm against Phi_M."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_%d)" % self.ctx.M)

        def trim(p):
            while p and p[-1] == 0:
                p.pop()
            return p

        def divmod_q(num, den):
            num = list(num)
            q = [_Q0] * max(0, len(num) - len(den) + 1)
            for k in range(len(num) - 1, len(den) - 2, -1):
                f = num[k] / den[-1]
                if f:
                    q[k - len(den) + 1] = f
                    for j in range(len(den)):
                        num[k - len(den) + 1 + j] -= f * den[j]
            return q, trim(num)

        r0 = [mpq(c) for c in self.ctx.phi_poly]
        r1 = trim([mpq(c) for c in self.coeffs])
        t0, t1 = [], [_Q1]
        while len(r1) > 1:
            q, r = divmod_q(r0, r1)
            # t0, t1 = t1, t0 - q*t1
            prod = [_Q0] * (len(q) + len(t1) - 1) if t1 else []
            for i, qi in enumerate(q):
                if qi:
                    for j, tj in enumerate(t1):
                        prod[i + j] += qi * tj
            new_t = list(t0) + [_Q0] * max(0, len(prod) - len(t0))
            for j, pj in enumerate(prod):
                new_t[j] -= pj
            r0, r1 = r1, r
            t0, t1 = t1, trim(new_t)
        if not r1:
            raise ZeroDivisionError("element not invertible")
        c = r1[0]
        inv = [tj / c for tj in t1]
        inv += [_Q0] * (self.ctx.phi - len(inv))
        return CycloNum._make(self.ctx, tuple(inv[:self.ctx.phi]))

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        out = self.ctx.one
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # -- Galois action -------------------------------------------------------

    def galois(self, d):
        """Apply the automorphism zeta -> zeta^d; d must be a unit mod M."""
        ctx = self.ctx
        d %= ctx.M
        if gcd(d, ctx.M) != 1:
            raise ValueError("%d is not a unit modulo %d" % (d, ctx.M))
        if d == 1:
            return self
        acc = [_Q0] * ctx.phi
        for k, c in enumerate(self.coeffs):
            if c:
                row = ctx.zeta_pows[(k * d) % ctx.M]
                for j in range(ctx.phi):
                    if row[j]:
                        acc[j] += c * row[j]
        return CycloNum._make(ctx, tuple(acc))

    # -- numerics -------------------------------------------------------------

    def embed(self, dps=30):
        """Complex value with zeta -> exp(2 pi i / M), at dps decimal digits."""
        roots = self.ctx.roots_of_unity(dps)
        with mpmath.workdps(dps):
            acc = mpmath.mpc(0)
            for k, c in enumerate(self.coeffs):
                if c:
                    acc += roots[k] * mpmath.mpf(c.numerator) / mpmath.mpf(c.denominator)
            return acc

    # -- hashing / equality / rendering ---------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, mpz, mpq)):
            other = self.ctx.from_rational(other)
        if not isinstance(other, CycloNum):
            return NotImplemented
        return self.ctx is other.ctx and self.coeffs == other.coeffs

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.ctx.M, self.coeffs))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return "Cyclo(%d: %s)" % (self.ctx.M, self)

    def __str__(self):
        parts = []
        for k in range(self.ctx.phi - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            elif mag == 1:
                body = "z" if k == 1 else "z^%d" % k
            else:
                body = "%s*z" % mag if k == 1 else "%s*z^%d" % (mag, k)
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts) if parts else "0"

    def to_json(self):
        return {"M": self.ctx.M, "coeffs": [str(c) for c in self.coeffs]}


def from_json(data):
    ctx = CycloContext(int(data["M"]))
    return ctx.from_coeffs([mpq(c) for c in data["coeffs"]])
