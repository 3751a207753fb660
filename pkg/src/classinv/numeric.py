"""Arbitrary-precision numerics: direct eta products and the j q-series.

These evaluations are deliberately independent of the symbolic q-expansion
machinery so they can serve as oracles for it.
"""

from __future__ import annotations

import threading

import mpmath


class PrecisionError(ArithmeticError):
    pass


def eta(tau, dps):
    """Dedekind eta via the raw product q^(1/24) prod (1 - q^n).

    All evaluation points in this package have Im tau comfortably above 0;
    the term count is chosen so the truncation error is below the working
    precision.
    """
    with mpmath.workdps(dps + 10):
        tau = mpmath.mpc(tau)
        if tau.imag <= 0:
            raise ValueError("tau must lie in the upper half plane")
        q = mpmath.expjpi(2 * tau)
        absq = abs(q)
        if absq > 0.9:
            raise PrecisionError("|q| too close to 1 for the raw eta product")
        nterms = int(mpmath.ceil((dps + 15) * mpmath.log(10) / -mpmath.log(absq))) + 1
        if nterms > 200000:
            raise PrecisionError("eta product needs %d factors" % nterms)
        acc = mpmath.mpc(1)
        qn = mpmath.mpc(1)
        for _ in range(nterms):
            qn *= q
            acc *= 1 - qn
        return mpmath.expjpi(tau / 12) * acc


def eta_quotient_scaled(N, tau, dps):
    """eta(N tau) / eta(tau) (no sqrt(N) prefactor)."""
    with mpmath.workdps(dps + 10):
        return eta(N * tau, dps) / eta(tau, dps)


def eta_quotient_shifted(N, k, tau, dps):
    """eta((tau+k)/N) / eta(tau)."""
    with mpmath.workdps(dps + 10):
        return eta((tau + k) / N, dps) / eta(tau, dps)


# -- j-invariant as an integer q-series ------------------------------------------

_j_cache = {"coeffs": [], "lock": threading.Lock()}


def _integer_series_mul(a, b, order):
    out = [0] * order
    for i, ai in enumerate(a):
        if ai and i < order:
            top = min(order - i, len(b))
            for j in range(top):
                if b[j]:
                    out[i + j] += ai * b[j]
    return out


def j_coefficients(order):
    """Integer coefficients c(-1..order-2) of j = 1/q + 744 + 196884 q + ...

    Built from E4^3 / (Delta/q) with exact integer arithmetic; the list
    returned has c[n] = coefficient of q^(n-1).
    """
    with _j_cache["lock"]:
        if len(_j_cache["coeffs"]) >= order + 1:
            return _j_cache["coeffs"][:order + 1]
    jq = _compute_j_coefficients(order + 1)
    with _j_cache["lock"]:
        if len(_j_cache["coeffs"]) < len(jq):
            _j_cache["coeffs"] = jq
    return jq[:order + 1]


def _compute_j_coefficients(K):
    # sparse pentagonal series for prod(1-q^n)
    pent = [0] * K
    pent[0] = 1
    jj = 1
    while True:
        g1 = jj * (3 * jj - 1) // 2
        g2 = jj * (3 * jj + 1) // 2
        if g1 >= K and g2 >= K:
            break
        s = 1 if jj % 2 == 0 else -1
        if g1 < K:
            pent[g1] += s
        if g2 < K:
            pent[g2] += s
        jj += 1
    # Delta/q = prod (1-q^n)^24 by squaring
    p24 = [1] + [0] * (K - 1)
    base = pent
    e = 24
    while e:
        if e & 1:
            p24 = _integer_series_mul(p24, base, K)
        e >>= 1
        if e:
            base = _integer_series_mul(base, base, K)
    # E4 = 1 + 240 sum sigma_3(n) q^n
    e4 = [0] * K
    e4[0] = 1
    for n in range(1, K):
        s3 = 0
        d = 1
        while d * d <= n:
            if n % d == 0:
                s3 += d ** 3
                if d != n // d:
                    s3 += (n // d) ** 3
            d += 1
        e4[n] = 240 * s3
    e43 = _integer_series_mul(_integer_series_mul(e4, e4, K), e4, K)
    # series inverse of p24 (leading 1), then j*q = E4^3 / (Delta/q)
    inv = [0] * K
    inv[0] = 1
    for n in range(1, K):
        acc = 0
        for d in range(1, n + 1):
            if p24[d]:
                acc += p24[d] * inv[n - d]
        inv[n] = -acc
    return _integer_series_mul(e43, inv, K)


def j_value(tau, dps):
    """j(tau) from the integer q-series, truncated adaptively."""
    with mpmath.workdps(dps + 10):
        tau = mpmath.mpc(tau)
        q = mpmath.expjpi(2 * tau)
        absq = abs(q)
        if absq > 0.5:
            raise PrecisionError("|q| too large for the j series")
        # roughly |c(n)| ~ e^(4 pi sqrt(n)); demand |c(n) q^n| < 10^-(dps+5)
        order = 16
        while True:
            bound = 4 * mpmath.pi * mpmath.sqrt(order) + order * mpmath.log(absq)
            if bound < -(dps + 5) * mpmath.log(10):
                break
            order *= 2
            if order > 65536:
                raise PrecisionError("j series will not converge fast enough")
        coeffs = j_coefficients(order)
        acc = mpmath.mpc(0)
        qn = 1 / q
        for c in coeffs:
            acc += c * qn
            qn *= q
        return acc
