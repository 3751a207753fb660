import mpmath
from gmpy2 import mpq

from classinv.relations import complex_relation, lll_reduce


def test_lll_reduces_known_lattice():
    # the classic (1, 1, 1)/(−1, 0, 2)-style example: output stays a basis
    basis = [[1, 1, 1], [-1, 0, 2], [3, 5, 6]]
    red = lll_reduce(basis)
    assert len(red) == 3
    # determinant is preserved up to sign
    def det3(m):
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
    assert abs(det3(red)) == abs(det3(basis))
    # rows are genuinely shorter than the worst input row
    norms = [sum(x * x for x in row) for row in red]
    assert max(norms) <= max(sum(x * x for x in row) for row in basis)


def test_real_relation_recovered():
    with mpmath.workdps(60):
        s2, s3 = mpmath.sqrt(2), mpmath.sqrt(3)
        target = 3 * s2 - mpmath.mpf(5) / 2 * s3 + 7
        rel = complex_relation(target, [mpmath.mpf(1), s2, s3, s2 * s3], 60)
    assert rel == [mpq(7), mpq(3), mpq(-5, 2), mpq(0)]


def test_complex_relation_recovered():
    with mpmath.workdps(60):
        i_ = mpmath.mpc(0, 1)
        a = 2 + 3 * i_
        b = mpmath.sqrt(mpmath.mpc(-7))
        target = mpmath.mpf(4) / 3 * a - 2 * b + a * b
        rel = complex_relation(target, [a, b, a * b, a * a], 60)
    assert rel == [mpq(4, 3), mpq(-2), mpq(1), mpq(0)]


def test_unrelated_values_give_none():
    with mpmath.workdps(60):
        rel = complex_relation(mpmath.e, [mpmath.mpf(1), mpmath.pi], 60,
                               denom_bound=1000)
    assert rel is None
