import math

import mpmath
import pytest
from gmpy2 import mpq

import table_fixtures as tf
from classinv.classpoly import (ClassPolynomial, QuadraticForm, class_number,
                                class_polynomial, conjugate_values,
                                coprime_representative, default_digits,
                                eval_invariant, form_matrix,
                                hilbert_class_polynomial, reduced_forms)
from classinv.numeric import eta as eta_numeric
from classinv.reciprocity import InvariantPolynomial, OrderContext


def brute_force_forms(D):
    out = []
    for a in range(1, -D):
        for b in range(-a, a + 1):
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if b < 0 and (a == c or a == -b):
                continue
            if math.gcd(math.gcd(a, abs(b)), c) == 1:
                if abs(b) <= a <= c:
                    out.append((a, b, c))
        if a * a * 3 > -D:
            break
    return sorted(out)


def test_reduced_forms_examples():
    assert [(f.a, f.b, f.c) for f in reduced_forms(-91)] == [(1, 1, 23), (5, 3, 5)]
    assert len(reduced_forms(-571)) == 5
    assert len(reduced_forms(-299)) == 8


def test_reduced_forms_against_brute_force():
    for D in range(-3, -2000, -1):
        if D % 4 in (0, 1) and D < -3:
            fast = [(f.a, f.b, f.c) for f in reduced_forms(D)]
            assert sorted(fast) == brute_force_forms(D), D


def test_reduced_forms_rejects_bad_disc():
    with pytest.raises(ValueError):
        reduced_forms(-6)
    with pytest.raises(ValueError):
        reduced_forms(5)


def test_coprime_representative():
    f = QuadraticForm(5, 3, 5)  # 5 divides 120
    rep = coprime_representative(f, 120)
    assert math.gcd(rep.a, 120) == 1
    assert rep.disc() == -91
    assert rep.content() == 1
    assert -rep.a < rep.b <= rep.a
    # untouched when already coprime
    g = QuadraticForm(1, 1, 23)
    assert coprime_representative(g, 120) == g
    # forms with several bad primes still normalize
    for form in reduced_forms(-299):
        rep = coprime_representative(form, 72)
        assert math.gcd(rep.a, 72) == 1 and rep.disc() == -299
        assert -rep.a < rep.b <= rep.a


def test_conjugate_values_rejects_non_invariant(grp91_120, ctx91_120, nu5_basis):
    from classinv.reciprocity import VerificationError
    lab = [0] * 6
    lab[2] = 1
    bare = InvariantPolynomial(nu5_basis, 1, {tuple(lab): nu5_basis.ctx.one})
    with pytest.raises(VerificationError):
        conjugate_values(bare, grp91_120, ctx91_120, 60)


def test_eval_invariant_precision_starvation(nu5_basis):
    from classinv.numeric import PrecisionError
    lab = [0] * 6
    lab[1] = 1
    poly = InvariantPolynomial(nu5_basis, 1, {tuple(lab): nu5_basis.ctx.one})
    with pytest.raises(PrecisionError):
        eval_invariant(poly, mpmath.mpc(0, 0.004), 40)


def test_form_matrix_requires_parity_and_units(ctx91_120):
    with pytest.raises(ValueError):
        form_matrix(QuadraticForm(5, 3, 5), ctx91_120)
    m = form_matrix(QuadraticForm(13, 13, 5), ctx91_120)
    assert m.det() == 13 % 120


def test_eval_invariant_zero_and_single_label(nu5_basis):
    zero = InvariantPolynomial(nu5_basis, 1, {})
    assert eval_invariant(zero, mpmath.mpc(0, 10), 40) == 0
    lab = list(nu5_basis.labels).index("nu0_5")
    alpha = [0] * 6
    alpha[lab] = 1
    poly = InvariantPolynomial(nu5_basis, 1, {tuple(alpha): nu5_basis.ctx.one})
    dps = 40
    with mpmath.workdps(dps + 10):
        tau = mpmath.mpc(0, 10)
        got = eval_invariant(poly, tau, dps)
        want = eta_numeric(tau / 5, dps) / eta_numeric(tau, dps)
        assert abs(got - want) < mpmath.mpf(10) ** (-(dps - 8))


def test_conjugate_values_principal_is_plain_value(descent91_5, grp91_120,
                                                   ctx91_120, nu5_basis):
    w = descent91_5[0][0]
    dps = 60
    vals = conjugate_values(w, grp91_120, ctx91_120, dps, check_invariance=False)
    assert len(vals) == 2
    with mpmath.workdps(dps + 10):
        direct = eval_invariant(w, ctx91_120.theta(dps + 10), dps)
        # principal form is [1,1,23]: the transformation is a bare translation
        assert abs(vals[0] - direct) < mpmath.mpf(10) ** (-(dps - 15))


def test_published_nu5_polynomials(grp91_120, ctx91_120, nu5_basis):
    i1, i2 = tf.nu5_final_invariants(nu5_basis)
    p1 = class_polynomial(i1, grp91_120, ctx91_120)
    p2 = class_polynomial(i2, grp91_120, ctx91_120, check_invariance=False)
    assert [u for u, v in p1.coeffs] == tf.NU5_POLYNOMIALS[0]
    assert p1.is_rational()
    assert [u for u, v in p2.coeffs] == tf.NU5_POLYNOMIALS[1]
    assert p1.render() == "t^2 - 3060*t - 28090800"


def test_symmetric_functions_real(descent91_5, grp91_120, ctx91_120):
    w = descent91_5[0][0]
    dps = 80
    vals = conjugate_values(w, grp91_120, ctx91_120, dps, check_invariance=False)
    with mpmath.workdps(dps):
        s1 = sum(vals)
        s2 = vals[0] * vals[1]
        assert abs(s1.imag) < mpmath.mpf(10) ** (-dps // 2)
        assert abs(s2.imag) < mpmath.mpf(10) ** (-dps // 2)


def test_precision_doubling_stability(grp91_120, ctx91_120, nu5_basis):
    i1, _ = tf.nu5_final_invariants(nu5_basis)
    base = default_digits(-91)
    p_lo = class_polynomial(i1, grp91_120, ctx91_120, dps=base,
                            check_invariance=False)
    p_hi = class_polynomial(i1, grp91_120, ctx91_120, dps=2 * base,
                            check_invariance=False)
    assert p_lo.coeffs == p_hi.coeffs


def test_hilbert_polynomial_pin():
    hp = hilbert_class_polynomial(-91)
    assert [u for u, v in hp.coeffs] == tf.HILBERT_91
    assert hp.is_rational()


def test_twelfth_power_invariant_quintic(grp571, ctx571, g_basis):
    # the classical degree-24 invariant g0^12 g1^12 + g2^12 g3^12 has a known
    # large quintic; exercises the sparse high-degree evaluation path
    poly = InvariantPolynomial(g_basis, 24, {(12, 12, 0, 0): g_basis.ctx.one,
                                             (0, 0, 12, 12): g_basis.ctx.one})
    cp = class_polynomial(poly, grp571, ctx571, check_invariance=False)
    assert [u for u, v in cp.coeffs] == [
        -12509992052647780072147837007511456,
        -390071826912221442431043741686448,
        -3049357177530030535811751619728,
        90705913519542658324778088,
        -5433338830617345268674,
        1,
    ]


def test_hilbert_571_pin():
    hp = hilbert_class_polynomial(-571)
    assert [u for u, v in hp.coeffs] == [
        15283054453672803818066421650036653646232315192410112,
        -16319730975176203906274913715913862844512542392320,
        4398250752422094811238689419574422303726895104,
        818520809154613065770038265334290448384,
        400497845154831586723701480652800,
        1,
    ]


def test_hilbert_class_number_one():
    hp = hilbert_class_polynomial(-163)
    assert [u for u, v in hp.coeffs] == [640320 ** 3, 1]
    assert hp.render() == "t + 262537412640768000"


def test_even_discriminant_pipeline():
    # D = 0 mod 4 runs through theta = sqrt(D)/2; the determinant image has
    # index 4 here (2 and 5 both interact with the level), and the values
    # land in the genus field K(sqrt(5))
    from classinv.reciprocity import build_group, class_invariant_basis
    from classinv.weber import FunctionBasis
    nu5 = FunctionBasis.nu_family(5)
    ctx = OrderContext.make(-20, 120)
    assert (ctx.B, ctx.C) == (0, 5)
    grp = build_group(ctx)
    assert (grp.order, grp.h_order) == (2560, 320)
    vecs, report = class_invariant_basis(grp, nu5, degree=2, seed=0)
    assert report.kprime_dim == 4
    poly = class_polynomial(vecs[0], grp, ctx, check_invariance=False)
    assert [(u, v) for u, v in poly.coeffs] == [(-5, 0), (0, 0), (1, 0)]
    hp = hilbert_class_polynomial(-20)
    assert [u for u, v in hp.coeffs] == [-681472000, -1264000, 1]


def test_hilbert_degree_matches_class_number():
    for D in (-23, -56, -71):
        hp = hilbert_class_polynomial(D)
        assert hp.degree == class_number(D)


def test_g2g3_value_is_root_of_published_octic(ctx299, g_basis):
    # the value of the g2*g3 monomial at theta satisfies the small degree-8
    # polynomial to 1e-30
    poly = InvariantPolynomial(g_basis, 2, {(0, 0, 1, 1): g_basis.ctx.one})
    dps = 80
    with mpmath.workdps(dps):
        val = eval_invariant(poly, ctx299.theta(dps), dps)
        coeffs = [1, 1, -1, -12, 16, -12, 15, -13, 1]  # high degree first
        acc = mpmath.mpc(0)
        for c in coeffs:
            acc = acc * val + c
        assert abs(acc) < mpmath.mpf("1e-30")


def test_conjugate_value_independent_of_representative(descent91_5, grp91_120,
                                                       ctx91_120, nu5_basis):
    # two equivalent coprime representatives of the same class give the same
    # conjugate value
    from classinv.weber import action_of
    w = descent91_5[0][0]
    rep1 = coprime_representative(QuadraticForm(5, 3, 5), 120)
    # translate: t -> t+1 sends [a,b,c] to [a, b+2a, a+b+c], staying coprime
    rep2 = QuadraticForm(rep1.a, rep1.b + 2 * rep1.a,
                         rep1.a + rep1.b + rep1.c)
    assert rep2.disc() == -91
    dps = 60
    vals = []
    with mpmath.workdps(dps + 10):
        for rep in (rep1, rep2):
            mat = form_matrix(rep, ctx91_120)
            moved = w.transform(action_of(nu5_basis, mat), det=mat.det())
            vals.append(eval_invariant(moved, rep.cm_point(dps + 10), dps))
        assert abs(vals[0] - vals[1]) < mpmath.mpf(10) ** (-(dps - 15))


def test_class_polynomial_renders_order_coeffs():
    # u + v*theta with theta = (-1+sqrt(-91))/2: u=412, v=-16 is 420-8 sqrt(-91)
    cp = ClassPolynomial(-91, 1, 23, ((-20048, 0), (412, -16), (1, 0)))
    assert cp.render() == "t^2 + (420-8*sqrt(-91))*t - 20048"
    pairs = cp.sqrt_d_pairs()
    assert pairs[1] == (mpq(420), mpq(-8))
    data = cp.to_json()
    assert data["degree"] == 2 and data["coefficients"][1] == [412, -16]
