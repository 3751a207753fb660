"""Integer relation detection for complex values via exact LLL.

Used to locate specific elements of a descended invariant space from their
known CM values: a candidate rational combination is proposed numerically
and then confirmed (or discarded) by the exact symbolic pipeline, so the
lattice step never has to be trusted.
"""

from __future__ import annotations

import mpmath
from gmpy2 import mpq, mpz


def lll_reduce(basis, delta=mpq(3, 4)):
    """LLL for integer row vectors (Cohen alg. 2.6.3), exact arithmetic."""
    b = [[mpz(x) for x in row] for row in basis]
    n = len(b)

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    # initial Gram-Schmidt data: mu and squared norms B of the star vectors
    mu = [[mpq(0)] * n for _ in range(n)]
    B = [mpq(0)] * n
    star = []
    for i in range(n):
        s = [mpq(x) for x in b[i]]
        for j in range(i):
            if B[j] == 0:
                continue
            mu[i][j] = sum(mpq(x) * y for x, y in zip(b[i], star[j])) / B[j]
            s = [x - mu[i][j] * y for x, y in zip(s, star[j])]
        star.append(s)
        B[i] = sum(x * x for x in s)

    def size_reduce(k, j):
        r = mu[k][j]
        if 2 * abs(r) <= 1:
            return
        q = r.numerator // r.denominator
        if 2 * (r - q) > 1:
            q += 1
        if q == 0:
            return
        b[k] = [x - q * y for x, y in zip(b[k], b[j])]
        mu[k][j] -= q
        for i in range(j):
            mu[k][i] -= q * mu[j][i]

    k = 1
    while k < n:
        size_reduce(k, k - 1)
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            for j in range(k - 2, -1, -1):
                size_reduce(k, j)
            k += 1
            continue
        # swap rows k-1 and k, updating mu and B in place
        m = mu[k][k - 1]
        Bk = B[k] + m * m * B[k - 1]
        if Bk == 0:
            # both star vectors vanish: plain swap
            b[k], b[k - 1] = b[k - 1], b[k]
            for i in range(k - 1):
                mu[k][i], mu[k - 1][i] = mu[k - 1][i], mu[k][i]
            k = max(k - 1, 1)
            continue
        mu_new = m * B[k - 1] / Bk
        B[k] = B[k - 1] * B[k] / Bk
        B[k - 1] = Bk
        b[k], b[k - 1] = b[k - 1], b[k]
        for i in range(k - 1):
            mu[k][i], mu[k - 1][i] = mu[k - 1][i], mu[k][i]
        for i in range(k + 1, n):
            t = mu[i][k]
            mu[i][k] = mu[i][k - 1] - m * t
            mu[i][k - 1] = t + mu_new * mu[i][k]
        mu[k][k - 1] = mu_new
        k = max(k - 1, 1)
    return b


def complex_relation(target, values, dps, denom_bound=10 ** 6):
    """Find rational x with sum x_i values_i = target, or None.

    Reduces the lattice spanned by (e_i | C Re z_i | C Im z_i) over
    z = (-target, values...); a reduced vector with tiny embedding residual
    and nonzero first coordinate encodes the relation.
    """
    with mpmath.workdps(dps):
        zs = [-mpmath.mpc(target)] + [mpmath.mpc(v) for v in values]
        scale = mpmath.mpf(10) ** (dps - 12)
        width = len(zs)
        rows = []
        for i, z in enumerate(zs):
            row = [mpz(0)] * width + [mpz(int(mpmath.nint(scale * z.real))),
                                      mpz(int(mpmath.nint(scale * z.imag)))]
            row[i] = mpz(1)
            rows.append(row)
        reduced = lll_reduce(rows)
        for row in reduced:
            head = row[:width]
            n0 = int(head[0])
            if n0 == 0 or abs(n0) > denom_bound:
                continue
            resid = abs(sum(int(c) * z for c, z in zip(head, zs)))
            if resid > mpmath.mpf(10) ** (-(dps // 3)):
                continue
            return [mpq(int(c), n0) for c in head[1:]]
    return None
