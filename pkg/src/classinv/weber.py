"""Eta-quotient function bases and the exact GL(2, Z/M) action on their span.

Two built-in families:

* the nu family for a prime N: sqrt(N) eta(N tau)/eta(tau) together with
  eta((tau+k)/N)/eta(tau) for 0 <= k < N, level 24N;
* the level-72 g family: the same N=3 quotients reordered and rescaled by
  the classical prefactors (zeta_24^-1 on the k=1 function, sqrt(3) on the
  scaled one).

All generators act monomially (one basis function to a phase times one
basis function), so every group element does; action matrices are derived
from q-expansions for T and sigma_d and from the exact eta multiplier
system for S, never copied from a table.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from math import gcd

import mpmath
from gmpy2 import mpq

from . import numeric
from .cyclotomic import CycloContext
from .modmat import ResidueMatrix, decompose_st, split_det
from .qseries import RecognitionError, nu_scaled, nu_shifted, recognize_monomial

SCALED = -1  # atom kind for eta(N tau)/eta(tau)


@dataclass(frozen=True)
class Atom:
    label: str
    kind: int       # SCALED or shift k in 0..N-1
    pref_key: str   # "one", "sqrtN", or "zeta24:<e>"


class FunctionBasis:
    """Ordered family of prefactor * raw-eta-quotient symbols of level 24N.

    For N > 3 the actual functions satisfy linear relations, so the basis
    is treated as a formal symbol space; every transformation rule used to
    act on it is an exact identity of functions, which keeps evaluation of
    any polynomial in the symbols honest.
    """

    def __init__(self, N, atoms, name):
        self.N = N
        self.level = 24 * N
        self.name = name
        self.ctx = CycloContext(self.level)
        self.atoms = tuple(atoms)
        self.size = len(self.atoms)
        self.labels = tuple(a.label for a in self.atoms)
        self._sqrt_n = self.ctx.sqrt_prime(N)
        self._expansions = {}
        self._rho_memo = {}
        self._gen_memo = {}
        self._lock = threading.Lock()

    # -- construction -------------------------------------------------------

    @classmethod
    def nu_family(cls, N):
        if N < 3 or any(N % k == 0 for k in range(2, N)):
            raise ValueError("the nu family needs an odd prime N")
        atoms = [Atom("nu%d_0" % N, SCALED, "sqrtN")]
        atoms += [Atom("nu%d_%d" % (k, N), k, "one") for k in range(N)]
        return cls(N, atoms, "nu%d" % N)

    @classmethod
    def g_family(cls):
        atoms = [
            Atom("g0", 0, "one"),
            Atom("g1", 1, "zeta24:-1"),
            Atom("g2", 2, "one"),
            Atom("g3", SCALED, "sqrtN"),
        ]
        return cls(3, atoms, "g72")

    def prefactor(self, atom):
        if atom.pref_key == "one":
            return self.ctx.one
        if atom.pref_key == "sqrtN":
            return self._sqrt_n
        kind, e = atom.pref_key.split(":")
        assert kind == "zeta24"
        return self.ctx.zeta_order(24, int(e))

    def default_order(self):
        return (1 - self.N) + 40 * self.size * 24

    def expansions(self, order=None):
        """q-expansions of the basis functions, cached per truncation."""
        if order is None:
            order = self.default_order()
        with self._lock:
            cached = self._expansions.get(order)
        if cached is not None:
            return cached
        out = []
        for atom in self.atoms:
            if atom.kind == SCALED:
                series = nu_scaled(self.ctx, self.N, order, sqrt_n=self.ctx.one)
            else:
                series = nu_shifted(self.ctx, self.N, atom.kind, order)
            pref = self.prefactor(atom)
            if pref != self.ctx.one:
                series = series.scale(pref)
            out.append(series)
        out = tuple(out)
        with self._lock:
            self._expansions[order] = out
        return out

    def atom_index(self, kind):
        for i, a in enumerate(self.atoms):
            if a.kind == kind:
                return i
        raise KeyError(kind)

    def expansion_for(self, label, order=None):
        """q-expansion of one labelled basis function."""
        if label not in self.labels:
            raise KeyError("unknown basis function %r" % label)
        return self.expansions(order)[self.labels.index(label)]

    # -- numeric evaluation of one basis function ----------------------------

    def value(self, i, tau, dps):
        atom = self.atoms[i]
        with mpmath.workdps(dps + 10):
            if atom.kind == SCALED:
                raw = numeric.eta_quotient_scaled(self.N, tau, dps)
            else:
                raw = numeric.eta_quotient_shifted(self.N, atom.kind, tau, dps)
            return self.prefactor(atom).embed(dps) * raw


class ActionMatrix:
    """Invertible matrix over Q(zeta_M) in the column convention
    f_i o gamma = sum_nu rho[nu][i] f_nu.

    Monomial matrices (single entry per column) keep a compact form so that
    group-sized computations stay cheap; sums of matrices go dense.
    """

    __slots__ = ("ctx", "size", "perm", "phases", "rows")

    def __init__(self, ctx, size, perm=None, phases=None, rows=None):
        self.ctx = ctx
        self.size = size
        self.perm = perm
        self.phases = phases
        self.rows = rows

    @classmethod
    def monomial(cls, ctx, perm, phases):
        return cls(ctx, len(perm), perm=tuple(perm), phases=tuple(phases))

    @classmethod
    def dense(cls, ctx, rows):
        return cls(ctx, len(rows), rows=tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls, ctx, size):
        return cls.monomial(ctx, range(size), [ctx.one] * size)

    def is_monomial(self):
        return self.perm is not None

    def to_rows(self):
        if self.rows is not None:
            return [list(r) for r in self.rows]
        rows = [[self.ctx.zero] * self.size for _ in range(self.size)]
        for col in range(self.size):
            rows[self.perm[col]][col] = self.phases[col]
        return rows

    def entry(self, i, j):
        if self.rows is not None:
            return self.rows[i][j]
        return self.phases[j] if self.perm[j] == i else self.ctx.zero

    def __mul__(self, other):
        if not isinstance(other, ActionMatrix):
            return NotImplemented
        if self.is_monomial() and other.is_monomial():
            perm = tuple(self.perm[other.perm[j]] for j in range(self.size))
            phases = tuple(other.phases[j] * self.phases[other.perm[j]]
                           for j in range(self.size))
            return ActionMatrix.monomial(self.ctx, perm, phases)
        a = self.to_rows()
        b = other.to_rows()
        n = self.size
        out = [[self.ctx.zero] * n for _ in range(n)]
        for i in range(n):
            for k in range(n):
                aik = a[i][k]
                if aik.is_zero():
                    continue
                for j in range(n):
                    if not b[k][j].is_zero():
                        out[i][j] = out[i][j] + aik * b[k][j]
        return ActionMatrix.dense(self.ctx, out)

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        out = ActionMatrix.identity(self.ctx, self.size)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def inverse(self):
        if self.is_monomial():
            perm = [0] * self.size
            phases = [None] * self.size
            for col in range(self.size):
                row = self.perm[col]
                perm[row] = col
                phases[row] = self.phases[col].inverse()
            return ActionMatrix.monomial(self.ctx, perm, phases)
        from .linalg import invert_matrix
        return ActionMatrix.dense(self.ctx, invert_matrix(self.to_rows(), self.ctx))

    def galois(self, d):
        if self.is_monomial():
            return ActionMatrix.monomial(
                self.ctx, self.perm, tuple(p.galois(d) for p in self.phases))
        return ActionMatrix.dense(
            self.ctx, [[v.galois(d) for v in row] for row in self.rows])

    def apply(self, vec):
        if self.is_monomial():
            out = [self.ctx.zero] * self.size
            for col, v in enumerate(vec):
                if not v.is_zero():
                    out[self.perm[col]] = out[self.perm[col]] + self.phases[col] * v
            return out
        rows = self.rows
        return [sum((rows[i][j] * v for j, v in enumerate(vec) if not v.is_zero()),
                    self.ctx.zero) for i in range(self.size)]

    def __eq__(self, other):
        if not isinstance(other, ActionMatrix):
            return NotImplemented
        if self.is_monomial() and other.is_monomial():
            return self.perm == other.perm and self.phases == other.phases
        return self.to_rows() == other.to_rows()

    def is_identity(self):
        return self == ActionMatrix.identity(self.ctx, self.size)


# -- the eta multiplier system ----------------------------------------------------


def dedekind_sum(d, c):
    """s(d, c) = sum ((n/c)) ((nd/c)) as an exact rational; c > 0."""
    total = mpq(0)
    for n in range(1, c):
        x = mpq(n, c)
        y = mpq(n * d, c)
        yf = y - (y.numerator // y.denominator)
        if yf == 0:
            continue
        total += (x - mpq(1, 2)) * (yf - mpq(1, 2))
    return total


def eta_multiplier_exponent(a, b, c, d):
    """e with eta(gamma tau) = zeta_24^e * sqrt(-i(c tau + d)) * eta(tau)
    for c > 0, from the Dedekind-sum form of the multiplier.

    Matrices with c < 0 are replaced by their negatives (same Moebius
    action).  For c = 0 the map is the translation tau -> tau + ab and the
    result is its bare phase exponent (no automorphy factor).
    """
    if a * d - b * c != 1:
        raise ValueError("matrix must have determinant one")
    if c == 0:
        if d < 0:
            a, b, d = -a, -b, -d
        return (a * b) % 24  # a = d = +-1; eta(tau + ab) picks up zeta_24^(ab)
    if c < 0:
        a, b, c, d = -a, -b, -c, -d
    r = mpq(a + d, 12 * c) - dedekind_sum(d, c)
    e = r * 12
    if e.denominator != 1:
        raise AssertionError("eta multiplier exponent is not in (1/12)Z")
    return int(e.numerator) % 24


# -- derivation of the generator matrices ------------------------------------------


def action_t(basis):
    """Matrix of f -> f(tau+1), recognized exactly from the q-expansions."""
    return _generator_matrix(basis, "T")


def action_sigma(basis, d):
    """Matrix of the coefficient automorphism sigma_d acting on the basis."""
    d %= basis.level
    if gcd(d, basis.level) != 1:
        raise ValueError("%d is not a unit modulo %d" % (d, basis.level))
    return _generator_matrix(basis, ("sigma", d))


def _recognize_generator(basis, transform):
    """Recognize a termwise transform of every basis expansion, doubling the
    truncation if a recognition comes back short."""
    order = basis.default_order()
    for _ in range(3):
        exps = basis.expansions(order)
        try:
            perm, phases = [], []
            for series in exps:
                idx, phase = recognize_monomial(transform(series), exps)
                perm.append(idx)
                phases.append(phase)
            return ActionMatrix.monomial(basis.ctx, perm, phases)
        except RecognitionError:
            order *= 2
    raise RecognitionError("generator recognition failed at order %d" % order)


def _generator_matrix(basis, key):
    with basis._lock:
        cached = basis._gen_memo.get(key)
    if cached is not None:
        return cached
    if key == "T":
        mat = _recognize_generator(basis, lambda s: s.act_t())
    elif key == "S":
        mat = _derive_action_s(basis)
    elif isinstance(key, tuple) and key[0] == "sigma":
        mat = _recognize_generator(basis, lambda s: s.galois(key[1]))
    else:
        raise KeyError(key)
    with basis._lock:
        basis._gen_memo[key] = mat
    return mat


def action_s(basis):
    """Matrix of f -> f(-1/tau), from the exact eta transformation laws.

    For the raw quotients with N prime:
      (eta(N tau)/eta)      o S = N^(-1/2) * eta(tau/N)/eta
      (eta(tau/N)/eta)      o S = N^(1/2)  * eta(N tau)/eta
      (eta((tau+k)/N)/eta)  o S = eps(gamma_k) * eta((tau+c)/N)/eta
    with c = -k^(-1) mod N and gamma_k = (k, -(kc+1)/N; N, -c) in SL2(Z),
    whose multiplier eps is a 24th root of unity computed exactly.  The
    resulting matrix is verified numerically elsewhere (the transformation
    oracle test), never assumed.
    """
    return _generator_matrix(basis, "S")


def _derive_action_s(basis):
    N = basis.N
    ctx = basis.ctx
    sqrt_n = basis._sqrt_n
    perm = [0] * basis.size
    phases = [ctx.zero] * basis.size
    for i, atom in enumerate(basis.atoms):
        if atom.kind == SCALED:
            tgt_kind, raw_phase = 0, sqrt_n.inverse()
        elif atom.kind == 0:
            tgt_kind, raw_phase = SCALED, sqrt_n
        else:
            k = atom.kind
            c = (-pow(k, -1, N)) % N
            gamma = (k, -(k * c + 1) // N, N, -c)
            e = eta_multiplier_exponent(*gamma)
            tgt_kind, raw_phase = c, ctx.zeta_order(24, e)
        j = basis.atom_index(tgt_kind)
        perm[i] = j
        phases[i] = basis.prefactor(atom) * raw_phase * basis.prefactor(basis.atoms[j]).inverse()
    return ActionMatrix.monomial(ctx, perm, phases)


# -- the full action of GL(2, Z/M) --------------------------------------------------


def action_of_word(basis, word):
    """rho of a determinant-one word: right action, so letters compose reversed."""
    mat = ActionMatrix.identity(basis.ctx, basis.size)
    s = action_s(basis)
    t = action_t(basis)
    for gen, e in word.letters:
        g = (s if gen == "S" else t) ** e
        mat = g * mat
    return mat


def action_of(basis, m):
    """rho(m) for m in GL(2, Z/level): factor m = b * diag(1, d), decompose b
    into an S,T word, compose, then twist by sigma_d.  Memoized per basis."""
    if not isinstance(m, ResidueMatrix) or m.m != basis.level:
        raise ValueError("matrix modulus must equal the basis level")
    with basis._lock:
        cached = basis._rho_memo.get(m)
    if cached is not None:
        return cached
    d, b = split_det(m)
    word = decompose_st(b)
    rho_b = action_of_word(basis, word)
    if d == 1:
        mat = rho_b
    else:
        mat = action_sigma(basis, d) * rho_b.galois(d)
    with basis._lock:
        basis._rho_memo[m] = mat
    return mat


# -- numeric verification of action matrices ----------------------------------------


def verify_action_numeric(basis, mat, gamma, taus, dps=50, tol=None):
    """Check f_i(gamma tau) = sum_nu rho[nu][i] f_nu(tau) at sample points.

    gamma is an integer SL2(Z) matrix (a, b, c, d).  Returns the largest
    absolute deviation over all basis functions and points.
    """
    if tol is None:
        tol = mpmath.mpf(10) ** (-(dps - 10))
    a, b, c, d = gamma
    if a * d - b * c != 1:
        raise ValueError("gamma must lie in SL2(Z)")
    worst = mpmath.mpf(0)
    with mpmath.workdps(dps + 10):
        for tau in taus:
            tau = mpmath.mpc(tau)
            gt = (a * tau + b) / (c * tau + d)
            vals = [basis.value(i, tau, dps) for i in range(basis.size)]
            for i in range(basis.size):
                lhs = basis.value(i, gt, dps)
                rhs = mpmath.mpc(0)
                for nu in range(basis.size):
                    e = mat.entry(nu, i)
                    if not e.is_zero():
                        rhs += e.embed(dps) * vals[nu]
                err = abs(lhs - rhs)
                if err > worst:
                    worst = err
    if worst > tol:
        raise AssertionError(
            "action matrix fails numeric verification: err=%s" % mpmath.nstr(worst, 8))
    return worst
