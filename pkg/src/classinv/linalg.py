"""Exact Gaussian elimination over Q(zeta_M) (or any field with the same
small duck-typed surface: is_zero, inverse, +, -, *)."""

from __future__ import annotations


def rref(rows, ctx):
    """Reduced row echelon form; returns (new_rows, pivot_columns).

    Zero rows are dropped.  The result is canonical for the row span, which
    makes span comparisons and deterministic basis choices trivial.
    """
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for col in range(ncols):
        pr = None
        for i in range(r, len(rows)):
            if not rows[i][col].is_zero():
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = rows[r][col].inverse()
        rows[r] = [inv * v for v in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][col].is_zero():
                f = rows[i][col]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(rows, ctx):
    return len(rref(rows, ctx)[0])


def nullspace(rows, ctx):
    """Basis of the right nullspace {x : rows * x = 0}, canonical via rref."""
    if not rows:
        return []
    ncols = len(rows[0])
    red, pivots = rref(rows, ctx)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [ctx.zero] * ncols
        vec[fc] = ctx.one
        for r, pc in enumerate(pivots):
            vec[pc] = -red[r][fc]
        basis.append(vec)
    return basis


def invert_matrix(rows, ctx):
    n = len(rows)
    aug = [list(r) + [ctx.one if i == j else ctx.zero for j in range(n)]
           for i, r in enumerate(rows)]
    red, pivots = rref(aug, ctx)
    if pivots != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


def in_span(rows, vec, ctx):
    """Does vec lie in the row span of rows?  Exact membership test."""
    if not rows:
        return all(v.is_zero() for v in vec)
    red, _ = rref(rows, ctx)
    red2, _ = rref(red + [list(vec)], ctx)
    return len(red2) == len(red)


def spans_equal(rows_a, rows_b, ctx):
    ra, _ = rref(rows_a, ctx)
    rb, _ = rref(rows_b, ctx)
    return ra == rb
