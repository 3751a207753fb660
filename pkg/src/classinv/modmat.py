"""2x2 matrices over Z/MZ and constructive S,T word decomposition.

The generators are S = (0,-1;1,0) and T = (1,1;0,1): both act on the upper
half plane as z -> -1/z and z -> z+1.  Determinant-one matrices are
decomposed into words in S and T by integer Euclidean row reduction; the
words are certificates that re-multiply to the input matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd


class ModulusMismatch(ValueError):
    pass


class NotUnimodular(ValueError):
    pass


@dataclass(frozen=True)
class ResidueMatrix:
    a: int
    b: int
    c: int
    d: int
    m: int

    def __post_init__(self):
        m = self.m
        if m < 2:
            raise ValueError("modulus must be >= 2")
        object.__setattr__(self, "a", self.a % m)
        object.__setattr__(self, "b", self.b % m)
        object.__setattr__(self, "c", self.c % m)
        object.__setattr__(self, "d", self.d % m)

    @staticmethod
    def identity(m):
        return ResidueMatrix(1, 0, 0, 1, m)

    @staticmethod
    def gen_s(m):
        return ResidueMatrix(0, -1, 1, 0, m)

    @staticmethod
    def gen_t(m, k=1):
        return ResidueMatrix(1, k, 0, 1, m)

    def det(self):
        return (self.a * self.d - self.b * self.c) % self.m

    def is_unit(self):
        return gcd(self.det(), self.m) == 1

    def __mul__(self, other):
        if not isinstance(other, ResidueMatrix):
            return NotImplemented
        if other.m != self.m:
            raise ModulusMismatch("moduli differ: %d vs %d" % (self.m, other.m))
        return ResidueMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
            self.m,
        )

    def inverse(self):
        det = self.det()
        if gcd(det, self.m) != 1:
            raise NotUnimodular("determinant %d is not a unit mod %d" % (det, self.m))
        di = pow(det, -1, self.m)
        return ResidueMatrix(di * self.d, -di * self.b, -di * self.c, di * self.a, self.m)

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        out = ResidueMatrix.identity(self.m)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __str__(self):
        return "(%d,%d;%d,%d) mod %d" % (self.a, self.b, self.c, self.d, self.m)


@dataclass(frozen=True)
class STWord:
    """Normalized word in the generators: adjacent letters never repeat a
    generator, T exponents are centered in (-M/2, M/2], S exponents in
    {-1, 1, 2}."""

    letters: tuple  # of ("S"|"T", exponent)

    @staticmethod
    def from_letters(letters, m):
        out = []
        for gen, e in letters:
            if gen == "S":
                e %= 4
                if e == 0:
                    continue
                if e == 3:
                    e = -1
            else:
                e %= m
                if e > m // 2:
                    e -= m
                if e == 0:
                    continue
            if out and out[-1][0] == gen:
                prev = out.pop()
                merged = prev[1] + e
                if gen == "S":
                    merged %= 4
                    if merged == 3:
                        merged = -1
                else:
                    merged %= m
                    if merged > m // 2:
                        merged -= m
                if merged:
                    out.append((gen, merged))
            else:
                out.append((gen, e))
        return STWord(tuple(out))

    def __len__(self):
        return len(self.letters)

    def evaluate(self, m):
        """Ordered product of the generator powers, reduced mod m."""
        out = ResidueMatrix.identity(m)
        s = ResidueMatrix.gen_s(m)
        for gen, e in self.letters:
            if gen == "S":
                out = out * (s ** e)
            else:
                out = out * ResidueMatrix.gen_t(m, e)
        return out

    def __str__(self):
        if not self.letters:
            return "1"
        parts = []
        for gen, e in self.letters:
            parts.append(gen if e == 1 else "%s^%d" % (gen, e))
        return " ".join(parts)

    @staticmethod
    def parse(text):
        letters = []
        for tok in text.split():
            if tok == "1":
                continue
            if "^" in tok:
                gen, e = tok.split("^")
                letters.append((gen, int(e)))
            else:
                letters.append((tok, 1))
        return STWord(tuple(letters))


def eval_word(word, m):
    return word.evaluate(m)


def decompose_st(mat):
    """Write a determinant-one matrix as a word in S and T.

    Left multiplication by S swaps the rows (negating the new first row),
    and by T^k adds k times the second row to the first.  Running the
    Euclidean algorithm on integer lifts of the first column drives the
    matrix upper triangular; because det = 1 mod M the surviving corner is
    a unit, which a final S,T cleanup turns into the identity.  The word
    for the input is the reversed sequence of inverse steps.
    """
    m = mat.m
    if mat.det() != 1 % m:
        raise NotUnimodular("decompose_st requires determinant 1 mod %d" % m)

    steps = []  # left-multiplications applied, in order

    a, b, c, d = mat.entries()

    def apply_s():
        nonlocal a, b, c, d
        a, b, c, d = -c, -d, a, b
        steps.append(("S", 1))

    def apply_t(k):
        nonlocal a, b, c, d
        if k % m == 0:
            return
        a += k * c
        b += k * d
        steps.append(("T", k))

    # Euclidean phase on the integer lift of the first column.
    a %= m
    c %= m
    while c % m != 0:
        if a % m == 0:
            apply_s()
            continue
        a %= m
        c %= m
        q = a // c
        apply_t(-q)  # a <- a mod c
        a %= m
        apply_s()    # move the smaller remainder down
    # Matrix is now (a, b; 0, d) with a*d = 1 mod m.
    a %= m
    b %= m
    d %= m
    if a != 1:
        u = a
        apply_s()                # (0, -d; u, b)
        apply_t(pow(u, -1, m))   # (1, u^-1 b - d; u, b)
        apply_s()                # (-u, -b; 1, u^-1 b - d)
        apply_t(u)               # (0, -1; 1, u^-1 b - d) since -b + b - u d = -1
        apply_s()                # (-1, *; 0, -1)
        apply_s()
        apply_s()                # S^2 = -Id flips the signs
    a %= m
    b %= m
    c %= m
    d %= m
    assert a == 1 and c == 0 and d == 1, (a, c, d)
    apply_t(-b)

    # L_r ... L_1 * mat = I, so mat = L_1^-1 * ... * L_r^-1
    letters = [(gen, -e) for gen, e in steps]
    word = STWord.from_letters(letters, m)
    assert word.evaluate(m) == mat, "round-trip failure in decompose_st"
    return word


def split_det(mat):
    """Factor m = b * diag(1, d) with det(b) = 1 and d = det(m)."""
    det = mat.det()
    if gcd(det, mat.m) != 1:
        raise NotUnimodular("determinant %d is not a unit mod %d" % (det, mat.m))
    dinv = pow(det, -1, mat.m)
    b = ResidueMatrix(mat.a, mat.b * dinv, mat.c, mat.d * dinv, mat.m)
    assert b.det() == 1 % mat.m
    return det, b


def crt_lift_generators(p, M):
    """Lift S, T to determinant-one matrices that reduce to S, T modulo
    p^v_p(M) and to the identity modulo the complementary factor."""
    if M % p != 0:
        raise ValueError("%d does not divide %d" % (p, M))
    pe = 1
    while M % (pe * p) == 0:
        pe *= p
    rest = M // pe

    def crt(x, y):
        # x mod pe, y mod rest
        if rest == 1:
            return x % pe
        inv = pow(pe, -1, rest)
        return (x + pe * ((y - x) * inv % rest)) % M

    s = ResidueMatrix.gen_s(M)
    sp = ResidueMatrix(crt(s.a % pe, 1), crt(s.b % pe, 0),
                       crt(s.c % pe, 0), crt(s.d % pe, 1), M)
    tp = ResidueMatrix(crt(1, 1), crt(1, 0), crt(0, 0), crt(1, 1), M)
    assert sp.det() == 1 % M and tp.det() == 1 % M
    return sp, tp
