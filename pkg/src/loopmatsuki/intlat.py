"""Exact integer and rational lattice linear algebra.

Provides Smith normal form with unimodular certificates, kernels, and
finite lattice-quotient invariants.  All matrices are plain lists of
lists (rows) of ``int`` or ``fractions.Fraction``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import List, Optional, Sequence, Tuple

Mat = List[List[int]]


def identity_int(n: int) -> Mat:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list:
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    return [
        [sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)]
        for i in range(rows)
    ]


def mat_vec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(a[i][k] * v[k] for k in range(len(v))) for i in range(len(a))]


def transpose(a: Sequence[Sequence]) -> list:
    return [list(col) for col in zip(*a)] if a else []


def snf_int(m: Sequence[Sequence[int]]) -> Tuple[Mat, Mat, Mat]:
    """Smith normal form.

    Returns (U, D, V) with U*M*V = D, U and V unimodular, and D diagonal
    with d_1 | d_2 | ... (nonnegative), trailing zeros allowed.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    d = [list(map(int, r)) for r in m]
    u = identity_int(rows)
    v = identity_int(cols)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in d:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, c):  # row dst += c * row src
        d[dst] = [x + c * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, c):
        for r in d:
            r[dst] += c * r[src]
        for r in v:
            r[dst] += c * r[src]

    def negate_row(i):
        d[i] = [-x for x in d[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while t < min(rows, cols):
        # find a pivot: smallest nonzero absolute value in the submatrix
        piv = None
        for i in range(t, rows):
            for j in range(t, cols):
                if d[i][j] and (piv is None or abs(d[i][j]) < abs(d[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            # reduce column t below the pivot
            moved = False
            for i in range(t + 1, rows):
                if d[i][t]:
                    q = d[i][t] // d[t][t]
                    add_row(t, i, -q)
                    if d[i][t]:
                        swap_rows(t, i)
                        moved = True
            if moved:
                continue
            # reduce row t to the right of the pivot
            for j in range(t + 1, cols):
                if d[t][j]:
                    q = d[t][j] // d[t][t]
                    add_col(t, j, -q)
                    if d[t][j]:
                        swap_cols(t, j)
                        moved = True
            if moved:
                continue
            # pivot must divide every remaining entry (divisibility chain)
            offender = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if d[i][j] % d[t][t]:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(offender, t, 1)
        if d[t][t] < 0:
            negate_row(t)
        t += 1
    return u, d, v


def snf_diagonal(d: Mat) -> List[int]:
    k = min(len(d), len(d[0]) if d else 0)
    return [d[i][i] for i in range(k)]


def invert_unimodular(u: Mat) -> Mat:
    """Exact inverse of a unimodular integer matrix."""
    n = len(u)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(u)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col])
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    out = [[x for x in row[n:]] for row in a]
    res = [[int(x) for x in row] for row in out]
    if any(Fraction(res[i][j]) != out[i][j] for i in range(n) for j in range(n)):
        raise ValueError("matrix was not unimodular")
    return res


def solve_rational(m: Sequence[Sequence], b: Sequence) -> Optional[List[Fraction]]:
    """One rational solution of M x = b, or None if inconsistent."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [[Fraction(m[i][j]) for j in range(cols)] + [Fraction(b[i])] for i in range(rows)]
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if a[i][cols]:
            return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        x[c] = a[i][cols]
    return x


def rational_kernel_basis(m: Sequence[Sequence]) -> List[List[Fraction]]:
    """Basis of the right kernel of M over Q (as a list of vectors)."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [[Fraction(x) for x in row] for row in m]
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -a[i][f]
        basis.append(v)
    return basis


def integer_left_kernel_basis(m: Sequence[Sequence[int]]) -> List[List[int]]:
    """Basis of {x integer row vector : x M = 0}."""
    u, d, _ = snf_int(m)
    rank = sum(1 for x in snf_diagonal(d) if x) if d else 0
    rows = len(m)
    return [u[i] for i in range(rank, rows)]


def _clear_denominators(vecs: Sequence[Sequence[Fraction]]) -> Tuple[List[List[int]], int]:
    denom = 1
    for v in vecs:
        for x in v:
            denom = lcm(denom, Fraction(x).denominator)
    ints = [[int(Fraction(x) * denom) for x in v] for v in vecs]
    return ints, denom


def lattice_basis(gens: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    """Basis of the lattice in Q^n generated by the given vectors."""
    gens = [list(v) for v in gens if any(v)]
    if not gens:
        return []
    ints, denom = _clear_denominators(gens)
    # columns = generators
    m = transpose(ints)
    u, d, v = snf_int(m)
    uinv = invert_unimodular(u)
    diag = snf_diagonal(d)
    basis = []
    n = len(m)
    for i, dd in enumerate(diag):
        if dd:
            col = [Fraction(uinv[r][i] * dd, denom) for r in range(n)]
            basis.append(col)
    return basis


def in_lattice(vec: Sequence[Fraction], basis: Sequence[Sequence[Fraction]]) -> bool:
    """Is vec an integer combination of the basis vectors?"""
    if not any(vec):
        return True
    if not basis:
        return False
    m = transpose([list(b) for b in basis])
    sol = solve_rational(m, list(vec))
    if sol is None:
        return False
    return all(x.denominator == 1 for x in sol)


def quotient_invariants(
    big: Sequence[Sequence[Fraction]], small: Sequence[Sequence[Fraction]]
) -> List[int]:
    """Invariant factors (> 1) of the finite quotient L_big / L_small.

    Both arguments are lattice bases spanning the same rational subspace,
    with L_small a sublattice of L_big.
    """
    if not big:
        if small:
            raise ValueError("small lattice not contained in big lattice")
        return []
    if len(small) != len(big):
        raise ValueError("quotient is not finite (ranks differ)")
    m = transpose([list(b) for b in big])
    coords = []
    for s in small:
        sol = solve_rational(m, list(s))
        if sol is None or any(x.denominator != 1 for x in sol):
            raise ValueError("small lattice not contained in big lattice")
        coords.append([int(x) for x in sol])
    # columns of the coordinate matrix express L_small in the basis of L_big
    _, d, _ = snf_int(transpose(coords))
    diag = snf_diagonal(d)
    if any(x == 0 for x in diag):
        raise ValueError("quotient is not finite")
    return [x for x in diag if x > 1]
