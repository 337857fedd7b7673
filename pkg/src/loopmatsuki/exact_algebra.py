"""Exact matrix algebra over Q(i)[t, t^-1] and Q(i)[[t]].

The operations here are the computational backbone: valuation coweights,
Smith positioning over the power-series DVR, Birkhoff factorization and
splitting type, unipotent square roots, and exact Cayley unitaries.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Sequence, Tuple

from .errors import InvalidInputError, PrecisionError
from .gaussian import QI, ONE, ZERO
from .laurent import (
    Entry,
    LaurentMatrix,
    SeriesMatrix,
    _clean,
    _eadd,
    _emul,
    _eneg,
    _escale,
    _etrunc,
    _eval_shift,
    _det,
    _series_reciprocal,
    laurent_exp_nilpotent,
    laurent_log_unipotent,
)

# ---------------------------------------------------------------------------
# valuation coweight


def valuation_coweight(s: SeriesMatrix) -> List[int]:
    """Dominant coweight of minor valuations.

    v_k = min valuation over all k x k minors; the elementary-divisor
    exponents are mu_k = v_k - v_{k-1} (ascending); returned sorted
    dominant, i.e. weakly decreasing.  Raises PrecisionError when the
    truncation cannot certify some minimal valuation.
    """
    n = s.n
    v_prev = 0
    mus: List[int] = []
    base_prec = s.precision
    vmat = s.val()
    for k in range(1, n + 1):
        best: int | None = None
        floors: List[int] = []
        for ridx in combinations(range(n), k):
            for cidx in combinations(range(n), k):
                minor = _det(s.rows, list(ridx), list(cidx))
                # a k-fold product of entries known mod t^N with val >= vmat
                prec = base_prec + (k - 1) * min(vmat, 0)
                minor = _etrunc(minor, prec)
                if minor:
                    mv = min(minor)
                    best = mv if best is None else min(best, mv)
                else:
                    floors.append(prec)
        if best is None:
            raise PrecisionError(
                f"all {k}x{k} minors vanish to the recorded precision; "
                "cannot certify the valuation coweight"
            )
        if any(f <= best for f in floors):
            raise PrecisionError(
                f"a {k}x{k} minor is known only above the candidate valuation {best}"
            )
        mus.append(best - v_prev)
        v_prev = best
    # elementary divisors ascend; dominant means weakly decreasing
    return sorted(mus, reverse=True)


# ---------------------------------------------------------------------------
# Smith positioning over the DVR Q(i)[[t]]


def _entry_prec_div(e: Entry, pivot: Entry, a: int, prec: int) -> Entry:
    """e / pivot where pivot = t^a * unit; result truncated to prec - a."""
    unit = _eval_shift(pivot, -a)
    rec = _series_reciprocal(unit, max(prec - a, 0))
    return _etrunc(_eval_shift(_emul(e, rec), -a), prec - a)


def smith_over_dvr(
    s: SeriesMatrix,
) -> Tuple[SeriesMatrix, List[int], SeriesMatrix, int]:
    """Position a series matrix as g1 * t^lam * g2 with g1, g2 in G(O).

    Returns (g1, lam, g2, out_precision) with lam dominant.  The
    factorisation holds modulo t^out_precision; out_precision accounts
    pessimistically for divisions by positive-valuation pivots.
    """
    n = s.n
    prec = s.precision
    a_rows: List[List[Entry]] = [[dict(e) for e in r] for r in s.rows]

    linv = [[({0: ONE} if i == j else {}) for j in range(n)] for i in range(n)]
    rinv = [[({0: ONE} if i == j else {}) for j in range(n)] for i in range(n)]

    pivots: List[int] = []
    for k in range(n):
        # minimal-valuation pivot in the remaining submatrix
        piv = None
        for i in range(k, n):
            for j in range(k, n):
                e = a_rows[i][j]
                if e and (piv is None or min(e) < piv[2]):
                    piv = (i, j, min(e))
        if piv is None:
            raise PrecisionError("matrix singular to recorded precision in Smith positioning")
        i0, j0, a = piv
        if i0 != k:
            a_rows[k], a_rows[i0] = a_rows[i0], a_rows[k]
            # linv tracks the inverse of the accumulated row ops: swap columns
            for r in linv:
                r[k], r[i0] = r[i0], r[k]
        if j0 != k:
            for r in a_rows:
                r[k], r[j0] = r[j0], r[k]
            rinv[k], rinv[j0] = rinv[j0], rinv[k]
        pivot = a_rows[k][k]
        for i in range(k + 1, n):
            if a_rows[i][k]:
                f = _entry_prec_div(a_rows[i][k], pivot, a, prec)
                # row_i -= f * row_k ; linv col update: col_k += f * col_i
                for j in range(k, n):
                    a_rows[i][j] = _etrunc(
                        _eadd(a_rows[i][j], _eneg(_emul(f, a_rows[k][j]))), prec
                    )
                for r in range(n):
                    linv[r][k] = _etrunc(_eadd(linv[r][k], _emul(f, linv[r][i])), prec)
        for j in range(k + 1, n):
            if a_rows[k][j]:
                f = _entry_prec_div(a_rows[k][j], pivot, a, prec)
                for i in range(k, n):
                    a_rows[i][j] = _etrunc(
                        _eadd(a_rows[i][j], _eneg(_emul(a_rows[i][k], f))), prec
                    )
                for c in range(n):
                    rinv[k][c] = _etrunc(_eadd(rinv[k][c], _emul(f, rinv[j][c])), prec)
        pivots.append(a)
        # normalize the pivot to exactly t^a: fold the unit into linv
        unit = _eval_shift(pivot, -a)
        for j in range(k, n):
            a_rows[k][j] = _etrunc(
                _eval_shift(_emul(_eval_shift(a_rows[k][j], -a), _series_reciprocal(unit, prec)), a),
                prec,
            )
        for r in range(n):
            linv[r][k] = _etrunc(_emul(linv[r][k], unit), prec)

    # sort exponents weakly decreasing with a two-sided permutation
    order = sorted(range(n), key=lambda i: -pivots[i])
    lam = [pivots[i] for i in order]
    perm = [[({0: ONE} if order[i] == j else {}) for j in range(n)] for i in range(n)]
    # t^lam = P t^pivots P^{-1}; absorb P into both factors
    linv2 = [[linv[r][order[c]] for c in range(n)] for r in range(n)]
    rinv2 = [[rinv[order[r]][c] for c in range(n)] for r in range(n)]

    out_prec = prec - max(0, max(pivots))
    if out_prec < SeriesMatrix.MIN_RESIDUAL:
        raise PrecisionError(
            f"Smith positioning would leave precision {out_prec} < "
            f"{SeriesMatrix.MIN_RESIDUAL}; supply more input precision"
        )
    g1 = SeriesMatrix(linv2, out_prec)
    g2 = SeriesMatrix(rinv2, out_prec)
    _ = perm
    return g1, lam, g2, out_prec


# ---------------------------------------------------------------------------
# Birkhoff factorization gamma = g_plus t^lam g_minus


def birkhoff_factor(
    gamma: LaurentMatrix,
) -> Tuple[LaurentMatrix, List[int], LaurentMatrix]:
    """Exact Birkhoff factorization by polynomial row reduction.

    gamma must be invertible over Q(i)[t, t^-1] (monomial determinant).
    Returns (g_plus, lam, g_minus) with g_plus in G[t], lam dominant,
    g_minus in G[t^-1], and gamma == g_plus * t^lam * g_minus exactly.
    """
    n = gamma.n
    d = gamma.det()
    if len(d) != 1:
        raise InvalidInputError("Birkhoff factorization needs an invertible Laurent loop")
    m = gamma.val()
    assert m is not None
    p_rows: List[List[Entry]] = [[_eval_shift(e, -m) for e in r] for r in gamma.rows]
    gplus = LaurentMatrix.identity(n)

    def row_deg(i: int) -> int:
        degs = [max(e) for e in p_rows[i] if e]
        return max(degs) if degs else -1

    while True:
        degs = [row_deg(i) for i in range(n)]
        if any(dd < 0 for dd in degs):
            raise InvalidInputError("Birkhoff row reduction hit a zero row")
        lead = [[p_rows[i][j].get(degs[i], ZERO) for j in range(n)] for i in range(n)]
        null = _left_nullvector(lead)
        if null is None:
            break
        # pick the row of maximal degree among those with nonzero coefficient
        cand = [i for i in range(n) if not null[i].is_zero()]
        i0 = max(cand, key=lambda i: degs[i])
        # row_i0 <- sum_j c_j t^{d_i0 - d_j} row_j  (degree of row i0 drops)
        c = null
        new_row = [dict() for _ in range(n)]
        for j in range(n):
            if c[j].is_zero():
                continue
            shift = degs[i0] - degs[j]
            for col in range(n):
                term = _eval_shift(_escale(p_rows[j][col], c[j]), shift)
                new_row[col] = _eadd(new_row[col], term)
        # accumulate gplus <- gplus * E^{-1}, E the row operation just applied
        einv = LaurentMatrix.identity(n)
        ci_inv = c[i0].inv()
        einv.rows[i0][i0] = {0: ci_inv}
        for j in range(n):
            if j != i0 and not c[j].is_zero():
                einv.rows[i0][j] = _clean({degs[i0] - degs[j]: -(c[j] * ci_inv)})
        gplus = gplus * einv
        p_rows[i0] = [_clean(e) for e in new_row]

    degs = [row_deg(i) for i in range(n)]
    lam_unsorted = [m + dd for dd in degs]
    gminus_rows = [[_eval_shift(e, -degs[i]) for e in r] for i, r in enumerate(p_rows)]

    # sort lam weakly decreasing: gamma = (gplus P^-1) t^{sorted} (P gminus)
    order = sorted(range(n), key=lambda i: -lam_unsorted[i])
    lam = [lam_unsorted[i] for i in order]
    perm = LaurentMatrix.zeros(n)
    for new_i, old_i in enumerate(order):
        perm.rows[new_i][old_i] = {0: ONE}
    gplus = gplus * perm.inverse()
    gminus = perm * LaurentMatrix(gminus_rows)

    # exactness and membership checks
    if (gplus * LaurentMatrix.t_power(lam) * gminus) != gamma:
        raise InvalidInputError("internal error: Birkhoff factors do not multiply back")
    if (gplus.val() or 0) < 0:
        raise InvalidInputError("internal error: g_plus escaped G[t]")
    if (gminus.maxdeg() or 0) > 0:
        raise InvalidInputError("internal error: g_minus escaped G[t^-1]")
    return gplus, lam, gminus


def _left_nullvector(m: List[List[QI]]) -> List[QI] | None:
    """A nonzero left null vector of a square Q(i) matrix, or None."""
    n = len(m)
    # work with the transpose and find a right null vector
    a = [[m[j][i] for j in range(n)] for i in range(n)]
    perm_cols = list(range(n))
    pivots: List[Tuple[int, int]] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if not a[i][c].is_zero()), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][c].inv()
        a[r] = [x * inv for x in a[r]]
        for i in range(n):
            if i != r and not a[i][c].is_zero():
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append((r, c))
        r += 1
    if r == n:
        return None
    pivot_cols = [c for _, c in pivots]
    free = next(c for c in range(n) if c not in pivot_cols)
    v = [ZERO] * n
    v[free] = ONE
    for i, c in pivots:
        v[c] = -a[i][free]
    _ = perm_cols
    return v


# ---------------------------------------------------------------------------
# Birkhoff splitting type from section-space dimension jumps


def birkhoff_type(gamma: LaurentMatrix) -> List[int]:
    """Splitting type (dominant) computed from block-Toeplitz rank profiles.

    This route is independent of :func:`birkhoff_factor`: it measures the
    dimension of {v polynomial : exponents of gamma^{-1} v <= m} as m
    varies and reads the type off the dimension jumps.
    """
    delta = gamma.inverse()
    lo = delta.val()
    hi = delta.maxdeg()
    if lo is None or hi is None:
        raise InvalidInputError("zero matrix has no splitting type")
    n = gamma.n
    gdeg = gamma.maxdeg() or 0
    mus: List[int] = []
    m = lo - 1
    prev = _section_dim(delta, m, gdeg + m)
    # exponents mu_j all lie in [lo, hi + n] comfortably; scan until found
    while len(mus) < n:
        m += 1
        if m > hi + n * (abs(hi) + abs(lo) + 2) + 2:
            raise InvalidInputError("splitting-type scan failed to converge")
        cur = _section_dim(delta, m, gdeg + m)
        jump = cur - prev - len(mus)
        for _ in range(jump):
            mus.append(m)
        prev = cur
    return sorted([-x for x in mus], reverse=True)


def _section_dim(delta: LaurentMatrix, m: int, dmax: int) -> int:
    """dim over Q(i) of {v poly vector, deg <= dmax : exps(delta v) <= m}."""
    n = delta.n
    if dmax < 0:
        return 0
    nvars = n * (dmax + 1)
    # constraints: coefficient of t^e in (delta v)_i must vanish for e > m
    emax = (delta.maxdeg() or 0) + dmax
    rows: List[List[QI]] = []
    for i in range(n):
        for e in range(m + 1, emax + 1):
            row = [ZERO] * nvars
            nonzero = False
            for j in range(n):
                ent = delta.rows[i][j]
                for k, coeff in ent.items():
                    dcoef = e - k
                    if 0 <= dcoef <= dmax:
                        row[j * (dmax + 1) + dcoef] = row[j * (dmax + 1) + dcoef] + coeff
                        nonzero = True
            if nonzero:
                rows.append(row)
    return nvars - _rank_qi(rows, nvars)


def _rank_qi(rows: List[List[QI]], ncols: int) -> int:
    a = [list(r) for r in rows]
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(a)) if not a[i][c].is_zero()), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = a[rank][c].inv()
        a[rank] = [x * inv for x in a[rank]]
        for i in range(len(a)):
            if i != rank and not a[i][c].is_zero():
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# unipotent square root and Cayley transform


def unipotent_sqrt(u: LaurentMatrix) -> LaurentMatrix:
    """The unique unipotent square root exp(log(u)/2) of a unipotent matrix."""
    logu = laurent_log_unipotent(u)
    v = laurent_exp_nilpotent(logu.scale(Fraction(1, 2)))
    if v * v != u:
        raise InvalidInputError("internal error: square root failed to square back")
    return v


def conj_transpose(m: LaurentMatrix) -> LaurentMatrix:
    """Adjoint for constant matrices: conjugate transpose."""
    if not m.is_constant():
        raise InvalidInputError("conjugate transpose is defined here for constant matrices")
    return LaurentMatrix(
        [[{0: m.rows[j][i][0].conj()} if m.rows[j][i] else {} for j in range(m.n)]
         for i in range(m.n)]
    )


def cayley_unitary(s: LaurentMatrix) -> LaurentMatrix:
    """Exact unitary (I - S)(I + S)^{-1} from a constant skew-Hermitian S."""
    n = s.n
    if not s.is_constant():
        raise InvalidInputError("Cayley transform expects a constant matrix")
    if conj_transpose(s) != -s:
        raise InvalidInputError("Cayley transform expects a skew-Hermitian matrix")
    ident = LaurentMatrix.identity(n)
    k = (ident - s) * (ident + s).inverse()
    if k * conj_transpose(k) != ident:
        raise InvalidInputError("internal error: Cayley transform is not unitary")
    return k


# ---------------------------------------------------------------------------
# exact Hermitian signature (used by the eta-side classifier)


def char_poly(m: List[List[QI]]) -> List[QI]:
    """Coefficients [c_0, ..., c_n] of det(x I - M), c_n = 1 (Faddeev-LeVerrier)."""
    n = len(m)
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    mk = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]  # identity

    def matmul(a, b):
        return [
            [sum((a[i][k] * b[k][j] for k in range(n)), ZERO) for j in range(n)]
            for i in range(n)
        ]

    ak = m
    mprev = mk
    for k in range(1, n + 1):
        prod = matmul(m, mprev) if k > 1 else [row[:] for row in m]
        tr = sum((prod[i][i] for i in range(n)), ZERO)
        c = tr * Fraction(-1, k)
        coeffs[n - k] = c
        if k < n:
            mprev = [
                [prod[i][j] + (c if i == j else ZERO) for j in range(n)]
                for i in range(n)
            ]
    _ = ak
    return coeffs


def hermitian_signature(h: List[List[QI]]) -> Tuple[int, int]:
    """Signature (p, q) of a nondegenerate Hermitian Q(i) matrix, exactly.

    All eigenvalues are real, so Descartes' rule on the characteristic
    polynomial is exact.
    """
    n = len(h)
    for i in range(n):
        for j in range(n):
            if h[i][j] != h[j][i].conj():
                raise InvalidInputError("matrix is not Hermitian")
    coeffs = char_poly(h)
    reals: List[Fraction] = []
    for c in coeffs:
        if not c.is_real():
            raise InvalidInputError("internal error: Hermitian char poly not real")
        reals.append(c.re)
    if reals[0] == 0:
        raise InvalidInputError("Hermitian form is degenerate")
    signs = [c for c in reals if c != 0]
    pos = sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))
    return pos, n - pos
