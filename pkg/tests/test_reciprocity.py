import pytest
from gmpy2 import mpq

import table_fixtures as tf
from classinv import linalg
from classinv.modmat import ResidueMatrix
from classinv.reciprocity import (InvariantPolynomial, OrderContext,
                                  VerificationError, _restricted_cocycle,
                                  build_group, check_cocycle,
                                  class_invariant_basis, h_invariant_space,
                                  hilbert90_split, min_invariant_degree,
                                  monomial_exponents, sym_matrix,
                                  verify_class_invariant)
from classinv.weber import ActionMatrix, action_of, action_s


def test_order_context_defaults():
    ctx = OrderContext.make(-91, 120)
    assert (ctx.B, ctx.C) == (1, 23)
    assert ctx.B ** 2 - 4 * ctx.C == -91
    ctx2 = OrderContext.make(-8, 72)
    assert (ctx2.B, ctx2.C) == (0, 2)
    with pytest.raises(ValueError):
        OrderContext.make(-3, 72)
    with pytest.raises(ValueError):
        OrderContext.make(-91, 120, B=2, C=5)


def test_group_orders(grp571, grp91_120, grp91_168, grp299):
    assert (grp571.order, grp571.h_order) == (3456, 144)
    assert grp571.det_surjective()
    assert (grp91_120.order, grp91_120.h_order) == (6144, 192)
    assert grp91_120.det_surjective()
    assert (grp91_168.order, grp91_168.h_order) == (16128, 672)
    assert not grp91_168.det_surjective()
    assert len(grp91_168.det_image) == 24
    assert (grp299.order, grp299.h_order) == (1728, 72)


def test_identity_pair_in_h(grp571):
    ident = ResidueMatrix.identity(72)
    assert ident in grp571.h_elements()
    assert grp571.pairs[grp571.h_indices[0]] == (1, 0) or \
        (1, 0) in [grp571.pairs[i] for i in grp571.h_indices]


def test_group_closure_random(grp91_120):
    import random
    rng = random.Random(5)
    members = set(grp91_120.elements)
    for _ in range(50):
        x = rng.choice(grp91_120.elements)
        y = rng.choice(grp91_120.elements)
        assert x * y in members


def test_det_image_is_determinants(grp571):
    dets = {g.det() for g in grp571.elements}
    assert dets == set(grp571.det_image)


def test_h_generators_generate(grp299):
    gens = grp299.h_generators()
    span = {ResidueMatrix.identity(72)}
    frontier = [ResidueMatrix.identity(72)]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = x * g
            if y not in span:
                span.add(y)
                frontier.append(y)
    assert len(span) == grp299.h_order


def test_no_degree_one_invariants_for_g72(grp571, g_basis):
    vecs, _ = h_invariant_space(grp571, g_basis, 1)
    assert vecs == []


def test_degree_two_space_and_published_members(grp571, g_basis):
    vecs, mono = h_invariant_space(grp571, g_basis, 2)
    assert len(vecs) == 2
    i1, i2 = tf.g72_quadratic_invariants(g_basis)
    rows = [p.vector(mono) for p in vecs]
    assert linalg.in_span(rows, i1.vector(mono), g_basis.ctx)
    assert linalg.in_span(rows, i2.vector(mono), g_basis.ctx)


def test_degree_one_space_nu5(grp91_120, nu5_basis):
    vecs, mono = h_invariant_space(grp91_120, nu5_basis, 1)
    assert len(vecs) == 2
    p1, p2 = tf.nu5_degree1_h_invariants(nu5_basis)
    rows = [p.vector(mono) for p in vecs]
    assert linalg.in_span(rows, p1.vector(mono), nu5_basis.ctx)
    assert linalg.in_span(rows, p2.vector(mono), nu5_basis.ctx)


def test_reynolds_equals_nullspace(grp571, g_basis, grp91_120, nu5_basis):
    for grp, basis, deg in ((grp571, g_basis, 2), (grp91_120, nu5_basis, 1)):
        vr, mono = h_invariant_space(grp, basis, deg, method="reynolds")
        vn, _ = h_invariant_space(grp, basis, deg, method="nullspace")
        rows_r = [p.vector(mono) for p in vr]
        rows_n = [p.vector(mono) for p in vn]
        assert linalg.spans_equal(rows_r, rows_n, basis.ctx)


def test_min_degrees(grp571, g_basis, grp91_120, nu5_basis, grp91_168, nu7_basis):
    assert min_invariant_degree(grp571, g_basis) == 2
    assert min_invariant_degree(grp91_120, nu5_basis) == 1
    assert min_invariant_degree(grp91_168, nu7_basis) == 2


def test_min_degree_exhausts(grp571, g_basis):
    with pytest.raises(ValueError):
        min_invariant_degree(grp571, g_basis, n_max=1)


def test_sym_matrix_monomial_vs_dense(g_basis):
    s = action_s(g_basis)
    mono = monomial_exponents(4, 2)
    sym_m = sym_matrix(s, 2, mono)
    sym_d = sym_matrix(ActionMatrix.dense(g_basis.ctx, s.to_rows()), 2, mono)
    assert sym_m.to_rows() == sym_d.to_rows()


def test_restricted_cocycle_relation(grp571, g_basis):
    vecs, mono = h_invariant_space(grp571, g_basis, 2)
    cocycle = _restricted_cocycle(grp571, g_basis, 2, vecs, mono)
    assert check_cocycle(grp571, cocycle)


def test_hilbert90_postcondition(grp571, g_basis):
    vecs, mono = h_invariant_space(grp571, g_basis, 2)
    B, kprime, cocycle, report = hilbert90_split(grp571, g_basis, 2, vecs, mono,
                                                 seed=3)
    assert report.convention.startswith("rho'")
    assert len(kprime) == 1 and kprime[0] == g_basis.ctx.one
    brows = B.to_rows()
    for d in grp571.det_image:
        assert (cocycle[d] * B.galois(d)).to_rows() == brows


def test_trivial_cocycle_splits():
    # a cocycle that is identically the identity is split by any invertible Q
    ctx = OrderContext.make(-571, 72)
    grp = build_group(ctx)
    from classinv.weber import FunctionBasis
    basis = FunctionBasis.g_family()
    cy = basis.ctx
    ident = {d: ActionMatrix.identity(cy, 2) for d in grp.det_image}
    # feed the splitting loop directly: B_Q = sum sigma_d(Q) has rational
    # entries 24*avg, invertible for generic Q
    import random
    rng = random.Random(0)
    q_rows = [[cy.from_coeffs([rng.randint(-5, 5) for _ in range(cy.phi)])
               for _ in range(2)] for _ in range(2)]
    Q = ActionMatrix.dense(cy, q_rows)
    acc = [[cy.zero] * 2 for _ in range(2)]
    for d in grp.det_image:
        rows = (ident[d] * Q.galois(d)).to_rows()
        for i in range(2):
            for j in range(2):
                acc[i][j] = acc[i][j] + rows[i][j]
    B = ActionMatrix.dense(cy, acc)
    brows = B.to_rows()
    for d in grp.det_image:
        assert (ident[d] * B.galois(d)).to_rows() == brows


def test_descended_dimensions(descent571, descent91_5, descent91_7, descent299):
    assert len(descent571[0]) == 2
    assert descent571[1].kprime_dim == 1
    assert len(descent91_5[0]) == 2
    assert len(descent299[0]) == 4
    # non-surjective determinant image: quadratic fixed field
    assert descent91_7[1].kprime_dim == 2
    assert len(descent91_7[0]) == 12


def test_descent_deterministic_across_seeds(grp91_120, nu5_basis, descent91_5):
    # the canonical reduced basis does not depend on the random splitting
    vecs2, _ = class_invariant_basis(grp91_120, nu5_basis, seed=17)
    assert [w.terms for w in vecs2] == [w.terms for w in descent91_5[0]]


def test_descended_vectors_are_integral_primitive(descent571):
    from math import gcd
    for w in descent571[0]:
        nums = []
        for coeff in w.terms.values():
            for c in coeff.coeffs:
                assert c.denominator == 1
                if c != 0:
                    nums.append(int(c))
        g = 0
        for n in nums:
            g = gcd(g, n)
        assert g == 1


def test_published_invariants_in_descended_span(descent299, g_basis, grp299):
    vecs, _ = descent299
    mono = monomial_exponents(4, 2)
    from classinv.reciprocity import _flatten_vector, _rref_q
    flat = [_flatten_vector(w.vector(mono), g_basis.ctx) for w in vecs]
    red = _rref_q(flat)
    for inv in tf.g72_299_invariants(g_basis):
        f = _flatten_vector(inv.vector(mono), g_basis.ctx)
        assert len(_rref_q(red + [f])) == len(red)


def test_verify_rejects_non_invariant(grp571, g_basis):
    mono_g0 = InvariantPolynomial(g_basis, 1, {(1, 0, 0, 0): g_basis.ctx.one})
    assert not verify_class_invariant(mono_g0, grp571, g_basis)


def test_twelfth_power_combination_is_invariant(grp571, g_basis):
    # g0^12 g1^12 + g2^12 g3^12, checked against every group element
    a = [0] * 4
    a[0] = a[1] = 12
    b = [0] * 4
    b[2] = b[3] = 12
    poly = InvariantPolynomial(g_basis, 24, {tuple(a): g_basis.ctx.one,
                                             tuple(b): g_basis.ctx.one})
    assert verify_class_invariant(poly, grp571, g_basis, exhaustive=True)


def test_descended_fixed_under_every_element(descent91_5, grp91_120, nu5_basis):
    for w in descent91_5[0]:
        assert verify_class_invariant(w, grp91_120, nu5_basis, exhaustive=True)


def test_exhaustive_fixed_point_non_surjective_case(nu5_basis):
    # determinant image of index 4: the descent still yields vectors fixed
    # by every single group element
    ctx = OrderContext.make(-20, 120)
    grp = build_group(ctx)
    assert not grp.det_surjective()
    vecs, report = class_invariant_basis(grp, nu5_basis, degree=2, seed=0)
    assert report.kprime_dim == 4
    assert verify_class_invariant(vecs[0], grp, nu5_basis, exhaustive=True)
