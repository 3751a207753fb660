"""The reciprocity group of an imaginary quadratic order, its invariant
theory on the function basis, and the probabilistic descent to rational
class invariants.

The group W consists of the matrices (t-Bs, -Cs; s, t) over Z/MZ whose
determinant is a unit; it is abelian, the determinant-one part H acts
linearly, and the determinant classes act Q(zeta_M)-semilinearly.  Class
invariants are the polynomials in the basis functions fixed by all of W
under the twisted action, found by Reynolds projection over H followed by
a cocycle splitting over the determinant image.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from math import gcd

from gmpy2 import mpq

from . import linalg
from .modmat import ResidueMatrix
from .weber import ActionMatrix, action_of


class VerificationError(AssertionError):
    pass


@dataclass(frozen=True)
class OrderContext:
    """Discriminant data: theta is the upper-half-plane root of x^2+Bx+C."""

    disc: int
    B: int
    C: int
    level: int

    @staticmethod
    def make(disc, level, B=None, C=None):
        if disc >= -4 or disc % 4 not in (0, 1):
            raise ValueError("need a discriminant < -4 congruent to 0 or 1 mod 4")
        if B is None and C is None:
            # theta = (-B + sqrt(D))/2; the known worked invariants assume
            # x^2 + x + (1-D)/4 for odd D
            if disc % 2 != 0:
                B, C = 1, (1 - disc) // 4
            else:
                B, C = 0, -disc // 4
        if B is None or C is None:
            raise ValueError("override both B and C or neither")
        if B * B - 4 * C != disc:
            raise ValueError("B^2 - 4C must equal the discriminant")
        return OrderContext(disc, B, C, level)

    def theta(self, dps):
        import mpmath
        with mpmath.workdps(dps):
            return (-self.B + mpmath.sqrt(mpmath.mpc(self.disc))) / 2


class ReciprocityGroup:
    def __init__(self, ctx):
        self.ctx = ctx
        M = ctx.level
        elements = []
        pairs = []
        h_indices = []
        reps = {}
        for t in range(M):
            for s in range(M):
                det = (t * t - ctx.B * s * t + ctx.C * s * s) % M
                if gcd(det, M) != 1:
                    continue
                mat = ResidueMatrix(t - ctx.B * s, -ctx.C * s, s, t, M)
                idx = len(elements)
                elements.append(mat)
                pairs.append((t, s))
                if det == 1:
                    h_indices.append(idx)
                if det not in reps:
                    reps[det] = idx
        self.elements = elements
        self.pairs = pairs
        self.h_indices = h_indices
        self.det_image = sorted(reps)
        self._rep_index = reps

    @property
    def order(self):
        return len(self.elements)

    @property
    def h_order(self):
        return len(self.h_indices)

    def h_elements(self):
        return [self.elements[i] for i in self.h_indices]

    def coset_representative(self, d):
        return self.elements[self._rep_index[d]]

    def det_surjective(self):
        from .cyclotomic import euler_phi
        return len(self.det_image) == euler_phi(self.ctx.level)

    def h_generators(self):
        """Small generating set of the (abelian) determinant-one part."""
        M = self.ctx.level
        ident = ResidueMatrix.identity(M)
        span = {ident}
        gens = []
        for h in self.h_elements():
            if h in span:
                continue
            gens.append(h)
            new_span = set()
            for x in span:
                y = x
                while True:
                    new_span.add(y)
                    y = y * h
                    if y in new_span:
                        break
            span = new_span
        assert len(span) == self.h_order
        return gens


def build_group(ctx):
    return ReciprocityGroup(ctx)


# -- symmetric powers -------------------------------------------------------------


def monomial_exponents(m, n):
    """Exponent tuples of the degree-n monomials in m symbols, in the
    lexicographic order of combinations_with_replacement."""
    out = []
    for combo in itertools.combinations_with_replacement(range(m), n):
        alpha = [0] * m
        for i in combo:
            alpha[i] += 1
        out.append(tuple(alpha))
    return out


def sym_matrix(mat, n, monomials=None, index=None):
    """Symmetric power of an ActionMatrix on the monomial basis."""
    m = mat.size
    if monomials is None:
        monomials = monomial_exponents(m, n)
    if index is None:
        index = {alpha: i for i, alpha in enumerate(monomials)}
    ctx = mat.ctx
    if mat.is_monomial():
        perm = []
        phases = []
        for alpha in monomials:
            beta = [0] * m
            phase = ctx.one
            for i, e in enumerate(alpha):
                if e:
                    beta[mat.perm[i]] += e
                    phase = phase * mat.phases[i] ** e
            perm.append(index[tuple(beta)])
            phases.append(phase)
        return ActionMatrix.monomial(ctx, perm, phases)
    # dense fallback: expand the product of linear forms column by column
    rows_in = mat.to_rows()
    dim = len(monomials)
    out = [[ctx.zero] * dim for _ in range(dim)]
    for col, alpha in enumerate(monomials):
        poly = {tuple([0] * m): ctx.one}
        for i, e in enumerate(alpha):
            for _ in range(e):
                new = {}
                for beta, coeff in poly.items():
                    for nu in range(m):
                        entry = rows_in[nu][i]
                        if entry.is_zero():
                            continue
                        gamma = list(beta)
                        gamma[nu] += 1
                        gamma = tuple(gamma)
                        val = coeff * entry
                        new[gamma] = new[gamma] + val if gamma in new else val
                poly = new
        for beta, coeff in poly.items():
            out[index[beta]][col] = coeff
    return ActionMatrix.dense(ctx, out)


# -- invariant polynomials ---------------------------------------------------------


class InvariantPolynomial:
    """Homogeneous degree-n polynomial in the basis labels with CycloNum
    coefficients, stored as exponent-tuple -> coefficient."""

    def __init__(self, basis, degree, terms):
        self.basis = basis
        self.degree = degree
        self.terms = {a: c for a, c in terms.items() if not c.is_zero()}
        for a in self.terms:
            if sum(a) != degree:
                raise ValueError("non-homogeneous term %r" % (a,))

    @classmethod
    def from_vector(cls, basis, degree, monomials, vec):
        return cls(basis, degree,
                   {a: c for a, c in zip(monomials, vec)})

    def vector(self, monomials):
        return [self.terms.get(a, self.basis.ctx.zero) for a in monomials]

    def transform(self, mat, det=1):
        """Right action of a group element with the given determinant class:
        sigma_det on coefficients, then the monomial substitution."""
        ctx = self.basis.ctx
        if not mat.is_monomial():
            raise ValueError("transform needs a monomial action matrix")
        out = {}
        for alpha, coeff in self.terms.items():
            if det != 1:
                coeff = coeff.galois(det)
            beta = [0] * len(alpha)
            for i, e in enumerate(alpha):
                if e:
                    beta[mat.perm[i]] += e
                    coeff = coeff * mat.phases[i] ** e
            beta = tuple(beta)
            out[beta] = out[beta] + coeff if beta in out else coeff
        return InvariantPolynomial(self.basis, self.degree, out)

    def scale(self, c):
        return InvariantPolynomial(self.basis, self.degree,
                                   {a: c * v for a, v in self.terms.items()})

    def __add__(self, other):
        terms = dict(self.terms)
        for a, c in other.terms.items():
            terms[a] = terms[a] + c if a in terms else c
        return InvariantPolynomial(self.basis, self.degree, terms)

    def __sub__(self, other):
        return self + other.scale(self.basis.ctx.from_rational(-1))

    def __eq__(self, other):
        if not isinstance(other, InvariantPolynomial):
            return NotImplemented
        return self.basis is other.basis and self.terms == other.terms

    def is_zero(self):
        return not self.terms

    def monomial_label(self, alpha):
        parts = []
        for lab, e in zip(self.basis.labels, alpha):
            if e == 1:
                parts.append(lab)
            elif e > 1:
                parts.append("%s^%d" % (lab, e))
        return "*".join(parts) if parts else "1"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for alpha in sorted(self.terms, reverse=True):
            c = self.terms[alpha]
            parts.append("(%s)*%s" % (c, self.monomial_label(alpha)))
        return " + ".join(parts)

    def to_json(self):
        return {
            "level": self.basis.level,
            "degree": self.degree,
            "basisLabels": list(self.basis.labels),
            "terms": [
                {"monomial": list(a), "coeff": self.terms[a].to_json()["coeffs"]}
                for a in sorted(self.terms, reverse=True)
            ],
        }


# -- H-invariant spaces -----------------------------------------------------------


def h_invariant_space(group, basis, degree, method="reynolds"):
    """Canonical (RREF) basis of the degree-n H-fixed subspace.

    reynolds: averages the symmetric-power action over all of H and takes
    the image of the projector.  nullspace: common kernel of rho_n(h) - I
    over a generating set.  The two must agree; tests compare the spans.
    """
    ctx = basis.ctx
    monomials = monomial_exponents(basis.size, degree)
    index = {a: i for i, a in enumerate(monomials)}
    dim = len(monomials)
    if method == "reynolds":
        acc = [[ctx.zero] * dim for _ in range(dim)]
        count = 0
        for h in group.h_elements():
            sym = sym_matrix(action_of(basis, h), degree, monomials, index)
            if sym.is_monomial():
                for col in range(dim):
                    row = sym.perm[col]
                    acc[row][col] = acc[row][col] + sym.phases[col]
            else:
                for i, r in enumerate(sym.to_rows()):
                    for j, v in enumerate(r):
                        if not v.is_zero():
                            acc[i][j] = acc[i][j] + v
            count += 1
        scale = ctx.from_rational(1, count)
        proj = [[scale * v for v in row] for row in acc]
        # image of the projector = row space of its transpose
        cols = [[proj[i][j] for i in range(dim)] for j in range(dim)]
        vecs, _ = linalg.rref(cols, ctx)
    elif method == "nullspace":
        rows = []
        for h in group.h_generators():
            sym = sym_matrix(action_of(basis, h), degree, monomials, index)
            mat = sym.to_rows()
            for i in range(dim):
                row = list(mat[i])
                row[i] = row[i] - ctx.one
                rows.append(row)
        vecs = linalg.nullspace(rows, ctx)
        vecs, _ = linalg.rref(vecs, ctx)
    else:
        raise ValueError("unknown method %r" % method)
    return [InvariantPolynomial.from_vector(basis, degree, monomials, v)
            for v in vecs], monomials


def min_invariant_degree(group, basis, n_max=6):
    """Smallest degree with a nonzero H-invariant space."""
    for n in range(1, n_max + 1):
        vecs, _ = h_invariant_space(group, basis, n)
        if vecs:
            return n
    raise ValueError("no invariants up to degree %d" % n_max)


# -- the twisted cocycle on V_n and its splitting -----------------------------------


class DescentReport:
    def __init__(self, seed, tries, convention, kprime_dim):
        self.seed = seed
        self.tries = tries
        self.convention = convention
        self.kprime_dim = kprime_dim

    def to_json(self):
        return {"seed": self.seed, "tries": self.tries,
                "convention": self.convention, "kprimeDim": self.kprime_dim}


def _restricted_cocycle(group, basis, degree, vpolys, monomials):
    """Matrices R_d of the twisted action of each determinant class on the
    V_n coordinates: coefficient vectors map to R_d . sigma_d(x).

    Each image is re-expressed in the RREF basis by reading coordinates at
    the pivot monomials; an exact reconstruction check certifies that the
    twisted action stabilizes V_n.
    """
    ctx = basis.ctx
    index = {a: i for i, a in enumerate(monomials)}
    vvecs = [p.vector(monomials) for p in vpolys]
    pivots = []
    for v in vvecs:
        for i, c in enumerate(v):
            if not c.is_zero():
                pivots.append(i)
                break
    cocycle = {}
    for d in group.det_image:
        g = group.coset_representative(d)
        sym = sym_matrix(action_of(basis, g), degree, monomials, index)
        cols = []
        for v in vvecs:
            img = sym.apply([c.galois(d) for c in v])
            coords = [img[p] for p in pivots]
            recon = [ctx.zero] * len(monomials)
            for co, w in zip(coords, vvecs):
                if not co.is_zero():
                    for i, wv in enumerate(w):
                        if not wv.is_zero():
                            recon[i] = recon[i] + co * wv
            if recon != img:
                raise VerificationError(
                    "twisted action does not stabilize V_n (det class %d)" % d)
            cols.append(coords)
        ell = len(vvecs)
        cocycle[d] = ActionMatrix.dense(
            ctx, [[cols[i][r] for i in range(ell)] for r in range(ell)])
    return cocycle


def check_cocycle(group, cocycle):
    """The twisted relation R_(de) = R_d sigma_d(R_e) on all pairs."""
    for d in group.det_image:
        for e in group.det_image:
            de = (d * e) % group.ctx.level
            lhs = cocycle[de]
            rhs = cocycle[d] * cocycle[e].galois(d)
            if lhs != rhs:
                return False
    return True


def _fixed_field_basis(ctx, dets):
    """Q-basis of the subfield of Q(zeta_M) fixed by all sigma_d, d in dets."""
    phi = ctx.phi
    rows = []
    for d in dets:
        if d == 1:
            continue
        # sigma_d maps coordinates x to A x with A[j][k] = coeff of zeta^j
        # in the reduction of zeta^(kd); fixed vectors solve (A - I) x = 0.
        images = [ctx.zeta_pows[(k * d) % ctx.M] for k in range(phi)]
        for j in range(phi):
            row = [mpq(images[k][j]) for k in range(phi)]
            row[j] -= 1
            rows.append(row)
    basis = _nullspace_q(rows, phi)
    return [ctx.from_coeffs(v) for v in basis]


def _nullspace_q(rows, ncols):
    """Right nullspace over Q of rational rows (RREF-canonical)."""
    rows = [list(r) for r in rows if any(v != 0 for v in r)]
    pivots = []
    r = 0
    for col in range(ncols):
        pr = None
        for i in range(r, len(rows)):
            if rows[i][col] != 0:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [inv * v for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for fc in free:
        vec = [mpq(0)] * ncols
        vec[fc] = mpq(1)
        for rr, pc in enumerate(pivots):
            if rr < len(rows):
                vec[pc] = -rows[rr][fc]
        out.append(vec)
    return out


def hilbert90_split(group, basis, degree, vpolys, monomials, seed=0, max_tries=10):
    """Split the determinant cocycle on V_n with random matrices.

    Forms B_Q = sum_d R_d sigma_d(Q) for random integral Q until B_Q is
    invertible; the columns of B_Q are then exactly fixed by the twisted
    action (verified before returning, for every determinant class).  In
    the P = B_Q^{-1} normalization this realizes the splitting
    rho'(sigma) = P^{-1} P^sigma.
    """
    ctx = basis.ctx
    ell = len(vpolys)
    if ell == 0:
        raise ValueError("V_n is zero; nothing to descend")
    cocycle = _restricted_cocycle(group, basis, degree, vpolys, monomials)
    rng = random.Random(seed)
    tries = 0
    B = None
    while tries < max_tries:
        tries += 1
        q_rows = [[ctx.from_coeffs([rng.randint(-5, 5) for _ in range(ctx.phi)])
                   for _ in range(ell)] for _ in range(ell)]
        Q = ActionMatrix.dense(ctx, q_rows)
        acc = [[ctx.zero] * ell for _ in range(ell)]
        for d in group.det_image:
            term = cocycle[d] * Q.galois(d)
            rows = term.to_rows()
            for i in range(ell):
                for j in range(ell):
                    if not rows[i][j].is_zero():
                        acc[i][j] = acc[i][j] + rows[i][j]
        B = ActionMatrix.dense(ctx, acc)
        if linalg.rank(B.to_rows(), ctx) == ell:
            break
        B = None
    if B is None:
        raise VerificationError("no invertible B_Q after %d tries" % max_tries)
    # postcondition: every column of B is fixed by the twisted action
    brows = B.to_rows()
    for d in group.det_image:
        img = cocycle[d] * B.galois(d)
        if img.to_rows() != brows:
            raise VerificationError("splitting identity failed for det class %d" % d)
    kprime = _fixed_field_basis(ctx, group.det_image)
    report = DescentReport(seed, tries, "rho'(s) = P^-1 P^s with P = B_Q^-1",
                           len(kprime))
    return B, kprime, cocycle, report


def _primitive_scale(vec_coords):
    """Scale a rational vector to primitive integral form with positive lead."""
    nums = [c for c in vec_coords if c != 0]
    if not nums:
        return vec_coords
    den = 1
    for c in nums:
        den = den * c.denominator // gcd(den, int(c.denominator))
    scaled = [c * den for c in vec_coords]
    g = 0
    for c in scaled:
        g = gcd(g, int(c.numerator))
    if g:
        scaled = [c / g for c in scaled]
    lead = next(c for c in scaled if c != 0)
    if lead < 0:
        scaled = [-c for c in scaled]
    return scaled


def class_invariant_basis(group, basis, degree=None, seed=0, exhaustive=False,
                          n_max=6):
    """Full pipeline: H-invariants at the minimal (or given) degree, descent,
    canonical Q-basis of the fixed space, and the fixed-point verification
    over the whole group."""
    if degree is None:
        degree = min_invariant_degree(group, basis, n_max)
    vpolys, monomials = h_invariant_space(group, basis, degree)
    B, kprime, cocycle, report = hilbert90_split(
        group, basis, degree, vpolys, monomials, seed=seed)
    ctx = basis.ctx
    brows = B.to_rows()
    ell = len(vpolys)
    vvecs = [p.vector(monomials) for p in vpolys]
    # expand columns of B (times a Q-basis of the fixed field) in the ambient
    # monomial coordinates, then canonicalize the Q-span
    ambient = []
    for kappa in kprime:
        for j in range(ell):
            coeffs = [kappa * brows[i][j] for i in range(ell)]
            vec = [ctx.zero] * len(monomials)
            for co, w in zip(coeffs, vvecs):
                if not co.is_zero():
                    for i, wv in enumerate(w):
                        if not wv.is_zero():
                            vec[i] = vec[i] + co * wv
            ambient.append(vec)
    flat = [_flatten_vector(v, ctx) for v in ambient]
    reduced = _rref_q(flat)
    out = []
    for row in reduced:
        row = _primitive_scale(row)
        vec = _unflatten_vector(row, ctx, len(monomials))
        out.append(InvariantPolynomial.from_vector(basis, degree, monomials, vec))
    for w in out:
        verify_class_invariant(w, group, basis, exhaustive=exhaustive,
                               raise_on_failure=True)
    return out, report


def _flatten_vector(vec, ctx):
    flat = []
    for c in vec:
        flat.extend(c.coeffs)
    return flat


def _unflatten_vector(flat, ctx, nmono):
    phi = ctx.phi
    return [ctx.from_coeffs(flat[i * phi:(i + 1) * phi]) for i in range(nmono)]


def _rref_q(rows):
    rows = [list(r) for r in rows if any(v != 0 for v in r)]
    if not rows:
        return []
    ncols = len(rows[0])
    r = 0
    for col in range(ncols):
        pr = None
        for i in range(r, len(rows)):
            if rows[i][col] != 0:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [inv * v for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return rows[:r]


def verify_class_invariant(poly, group, basis, exhaustive=False,
                           raise_on_failure=False):
    """Is the polynomial fixed by the whole reciprocity group?

    exhaustive=True iterates every group element; otherwise H generators
    plus one representative per determinant class, which covers the group
    because every element factors as h * rep over the abelian group.
    """
    if exhaustive:
        todo = [(g, g.det()) for g in group.elements]
    else:
        todo = [(h, 1) for h in group.h_generators()]
        todo += [(group.coset_representative(d), d) for d in group.det_image]
    for g, d in todo:
        mat = action_of(basis, g)
        img = poly.transform(mat, det=d)
        if img != poly:
            if raise_on_failure:
                raise VerificationError(
                    "polynomial moved by group element %s (det %d)" % (g, d))
            return False
    return True
