"""Canonical forms of anti-fixed loops.

The tau maps land arbitrary loops in the anti-fixed sets.  The two
spherical canonicalizers reduce an anti-fixed loop to its normal form
t^lam * g0 * w1^{-1}: exactly on the eta side, and to a certified
residual precision on the theta side.  The Iwahori reducers handle
pre-positioned inputs t~w * g and return the torus part.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import group_catalog as gc
from .coweight_orbits import (
    SphericalClass,
    _eta_equation_holds,
    _theta_equation_holds,
    blocks_of,
    classify_eta,
    classify_theta,
)
from .errors import InvalidInputError, NotAntiFixedError, PrecisionError
from .exact_algebra import (
    birkhoff_factor,
    hermitian_signature,
    smith_over_dvr,
    unipotent_sqrt,
    valuation_coweight,
)
from .gaussian import QI
from .group_catalog import GroupDatum
from .iwahori_orbits import (
    AffineWeylElement,
    IwahoriClass,
    build_torus_problem,
    classes_at_tw,
)
from .laurent import (
    LaurentMatrix,
    SeriesMatrix,
    laurent_log_unipotent,
    series_exp,
)

MIN_RESIDUAL_PRECISION = 4


@dataclass(frozen=True)
class ThetaLoop:
    """A series loop gamma with gamma * theta(gamma) = z to precision."""

    gamma: SeriesMatrix
    datum: GroupDatum

    @staticmethod
    def of(gamma: SeriesMatrix, datum: GroupDatum) -> "ThetaLoop":
        if not gc.is_anti_fixed_theta(gamma, datum):
            raise NotAntiFixedError("loop is not theta-anti-fixed to its precision")
        return ThetaLoop(gamma, datum)


@dataclass(frozen=True)
class EtaLoop:
    """An exact Laurent loop gamma with gamma * eta(gamma) = z."""

    gamma: LaurentMatrix
    datum: GroupDatum

    @staticmethod
    def of(gamma: LaurentMatrix, datum: GroupDatum) -> "EtaLoop":
        if not gc.is_anti_fixed_eta(gamma, datum):
            raise NotAntiFixedError("loop is not eta-anti-fixed")
        return EtaLoop(gamma, datum)


@dataclass(frozen=True)
class CanonicalForm:
    lam: Tuple[int, ...]
    g0: LaurentMatrix
    orbit_class: object  # SphericalClass, or IwahoriClass for Iwahori reductions
    certificate: object  # the accumulated conjugator (series or Laurent)
    residual_precision: Optional[int]  # None means exact
    side: str
    loop_rep: LaurentMatrix


# ---------------------------------------------------------------------------
# tau maps


def tau_theta(gamma, datum: GroupDatum):
    """gamma * theta(gamma)^{-1}; anti-fixed with z = 1."""
    return gamma * gc.apply_theta(gamma, datum).inverse()


def tau_eta(gamma: LaurentMatrix, datum: GroupDatum) -> LaurentMatrix:
    """gamma * eta(gamma)^{-1}; anti-fixed with z = 1."""
    return gamma * gc.apply_eta(gamma, datum).inverse()


# ---------------------------------------------------------------------------
# small exact linear algebra over Q(i)


def _solve_qi(a: List[List[QI]], b: List[QI]) -> Optional[List[QI]]:
    """One solution of a*x = b over Q(i), or None if inconsistent."""
    m = len(a)
    cols = len(a[0]) if m else 0
    rows = [list(r) + [v] for r, v in zip(a, b)]
    pivots: List[Tuple[int, int]] = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, m) if not rows[i][c].is_zero()), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = rows[r][c].inv()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(m):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append((r, c))
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if not rows[i][cols].is_zero():
            return None
    x = [QI(0)] * cols
    for pr, pc in pivots:
        x[pc] = rows[pr][cols]
    return x


def _block_index(lam: Sequence[int]) -> List[int]:
    idx = [0] * len(lam)
    for b, (start, size, _) in enumerate(blocks_of(lam)):
        for i in range(start, start + size):
            idx[i] = b
    return idx


def _elementary(n: int, i: int, j: int) -> LaurentMatrix:
    m = LaurentMatrix.zeros(n)
    m.rows[i][j] = {0: QI(1)}
    return m


# ---------------------------------------------------------------------------
# class matching


def _middle_block(lam: Sequence[int]):
    for start, size, value in blocks_of(lam):
        if value == 0:
            return start, size
    return None


def _middle_invariant(datum: GroupDatum, lam: Sequence[int], g0: LaurentMatrix, side: str):
    """Conjugation invariant of the middle (lambda = 0) block of g0."""
    mid = _middle_block(lam)
    assert mid is not None
    start, m = mid
    rev = [[QI(1) if r == m - 1 - s else QI(0) for s in range(m)] for r in range(m)]
    b = [[g0.coeff(start + r, start + s, 0) for s in range(m)] for r in range(m)]
    mm = [[sum((rev[r][k] * b[k][s] for k in range(m)), QI(0)) for s in range(m)] for r in range(m)]
    if side == "theta":
        tr = sum((mm[r][r] for r in range(m)), QI(0))
        return ("trace", str(tr))
    h = mm
    if not datum.z.is_real():
        raise InvalidInputError("unitary classification requires z in {1, -1}")
    if datum.z == QI(-1):
        h = [[QI(0, 1) * x for x in row] for row in h]
    return ("signature", hermitian_signature(h))


def _match_spherical_class(datum: GroupDatum, lam: Sequence[int], g0: LaurentMatrix,
                           side: str) -> SphericalClass:
    classes = classify_theta(datum, lam) if side == "theta" else classify_eta(datum, lam)
    if not classes:
        raise NotAntiFixedError(
            "reduced to a coweight with no anti-fixed classes; input cannot be anti-fixed"
        )
    if datum.family != gc.UNITARY or _middle_block(lam) is None:
        assert len(classes) == 1
        return classes[0]
    want = _middle_invariant(datum, lam, g0, side)
    for cls in classes:
        if _middle_invariant(datum, lam, cls.g0, side) == want:
            return cls
    raise AssertionError("reduced g0 matches no classified class")


# ---------------------------------------------------------------------------
# theta side


def _series_of(m: LaurentMatrix, precision: int) -> SeriesMatrix:
    return SeriesMatrix.from_laurent(m, precision)


def canonicalize_theta(x, datum: Optional[GroupDatum] = None) -> CanonicalForm:
    """Reduce a theta-anti-fixed series loop to t^lam * g0 * w1^{-1}.

    g0 is exact and satisfies the spherical equation; the certificate
    conjugator verifies the reduction to residual_precision.
    """
    if isinstance(x, ThetaLoop):
        datum = x.datum
        x = x.gamma
    assert datum is not None
    if isinstance(x, LaurentMatrix):
        top = x.maxdeg() or 0
        bot = min(x.val() or 0, 0)
        x = SeriesMatrix.from_laurent(x, top - bot + 2 * MIN_RESIDUAL_PRECISION)
    if datum.twist is not None:
        return _canonicalize_theta_twisted(x, datum)
    n = x.n
    if not gc.is_anti_fixed_theta(x, datum):
        raise NotAntiFixedError("loop is not theta-anti-fixed to its precision")
    prec_in = x.precision
    lam = valuation_coweight(x)
    spread = lam[0] - lam[-1]
    residual = prec_in - spread
    if residual < MIN_RESIDUAL_PRECISION:
        raise PrecisionError(
            f"residual precision {residual} below the floor {MIN_RESIDUAL_PRECISION}"
        )
    big = prec_in + 2 * spread + 2 * max(abs(lam[0]), abs(lam[-1]), 1) + 8

    g1, lam2, _, _ = smith_over_dvr(x)
    assert lam2 == lam

    def conjugate(cur: SeriesMatrix, h: SeriesMatrix) -> SeriesMatrix:
        return h * cur * gc.apply_theta(h, datum).inverse()

    h_acc = g1.inverse()
    cur = conjugate(x, h_acc)

    tlam_inv = _series_of(LaurentMatrix.t_power([-v for v in lam]), big)
    w1s = _series_of(datum.w1, big)

    def gform(xc: SeriesMatrix) -> SeriesMatrix:
        return tlam_inv * xc * w1s

    g = gform(cur)
    bidx = _block_index(lam)

    # layer 0: the constant term sits in the standard parabolic P_lam;
    # strip its unipotent radical part.
    c0 = g.constant_matrix()
    for i in range(n):
        for j in range(n):
            if bidx[i] > bidx[j] and not c0[i][j].is_zero():
                raise NotAntiFixedError("constant term escapes the parabolic P_lambda")
    ell_rows = [[c0[i][j] if bidx[i] == bidx[j] else QI(0) for j in range(n)] for i in range(n)]
    ell = LaurentMatrix.from_scalars(ell_rows)
    u0 = ell.inverse() * LaurentMatrix.from_scalars(c0)
    if u0 != LaurentMatrix.identity(n):
        h0 = datum.w1.inverse() * gc.theta0(u0, datum) * datum.w1
        h0s = _series_of(h0, big)
        cur = conjugate(cur, h0s)
        h_acc = h0s * h_acc
        g = gform(cur)
        assert LaurentMatrix.from_scalars(g.constant_matrix()) == ell

    # precomputed first-order responses of twisted conjugation at ell
    ell_inv = ell.inverse()
    left_resp = [[(ell_inv * _elementary(n, i, j) * ell).constant_matrix()
                  for j in range(n)] for i in range(n)]
    right_resp = [[(datum.w1.inverse() * gc.d_theta0(_elementary(n, i, j), datum)
                    * datum.w1).constant_matrix() for j in range(n)] for i in range(n)]

    ell_inv_s = _series_of(ell_inv, big)
    depth = g.precision
    for k in range(1, depth):
        red = ell_inv_s * g
        layer = [[red.coeff(i, j, k) for j in range(n)] for i in range(n)]
        if all(v.is_zero() for row in layer for v in row):
            continue
        # y_(i,j) conjugator coefficients; effect on the t^k layer:
        # left factor for lam_i >= lam_j, right factor for lam_i <= lam_j
        unknowns = [(i, j) for i in range(n) for j in range(n)]
        epsk = QI(datum.epsilon ** k)
        a_rows = [[QI(0)] * len(unknowns) for _ in range(n * n)]
        for col, (i, j) in enumerate(unknowns):
            if lam[i] >= lam[j]:
                for r in range(n):
                    for s in range(n):
                        a_rows[r * n + s][col] = a_rows[r * n + s][col] + left_resp[i][j][r][s]
            if lam[i] <= lam[j]:
                for r in range(n):
                    for s in range(n):
                        a_rows[r * n + s][col] = a_rows[r * n + s][col] - epsk * right_resp[i][j][r][s]
        rhs = [-layer[r][s] for r in range(n) for s in range(n)]
        sol = _solve_qi(a_rows, rhs)
        if sol is None:
            raise NotAntiFixedError(f"layer {k} has no killing conjugator")
        y = LaurentMatrix.zeros(n)
        for col, (i, j) in enumerate(unknowns):
            if not sol[col].is_zero():
                y.rows[i][j] = {k + max(0, lam[i] - lam[j]): sol[col]}
        if y.is_zero():
            continue
        h = series_exp(_series_of(y, big))
        cur = conjugate(cur, h)
        h_acc = h * h_acc
        g = gform(cur)
        red = ell_inv_s * g
        for kk in range(1, k + 1):
            assert all(red.coeff(i, j, kk).is_zero() for i in range(n) for j in range(n))

    g0 = ell
    if not _theta_equation_holds(datum, lam, g0):
        raise PrecisionError("constant term equation not certified at this precision")
    loop_rep = LaurentMatrix.t_power(lam) * g0 * datum.w1.inverse()
    # the certified window: g was cleaned to its own precision, and row i of
    # the loop carries an extra t^{lam_i}; the worst row bounds the claim
    residual = min(residual, cur.precision, g.precision + min(lam[-1], 0))
    if residual < MIN_RESIDUAL_PRECISION:
        raise PrecisionError(
            f"residual precision {residual} below the floor {MIN_RESIDUAL_PRECISION}"
        )
    defect = cur - SeriesMatrix.from_laurent(loop_rep, cur.precision)
    assert all(
        v.is_zero()
        for row in defect.retruncate(residual).rows
        for e in row
        for v in e.values()
    )
    orbit_class = _match_spherical_class(datum, lam, g0, "theta")
    return CanonicalForm(
        lam=tuple(lam),
        g0=g0,
        orbit_class=orbit_class,
        certificate=h_acc,
        residual_precision=residual,
        side="theta",
        loop_rep=loop_rep,
    )


def _canonicalize_theta_twisted(x: SeriesMatrix, datum: GroupDatum) -> CanonicalForm:
    """Transport through the pure inner twist, reduce, and transport back."""
    base = gc.build_datum(datum.family, datum.n, datum.epsilon,
                          gc.base_sector_theta(datum))
    cs = SeriesMatrix.from_laurent(datum.twist, x.precision)
    form = canonicalize_theta(x * cs, base)
    twist_inv = datum.twist.inverse()
    loop_rep = form.loop_rep * twist_inv
    g0 = form.g0 * datum.w1.inverse() * twist_inv * datum.w1
    classes = classify_theta(datum, form.lam)
    orbit_class = next(c for c in classes if c.label == form.orbit_class.label)
    return CanonicalForm(
        lam=form.lam,
        g0=g0,
        orbit_class=orbit_class,
        certificate=form.certificate,
        residual_precision=form.residual_precision,
        side="theta",
        loop_rep=loop_rep,
    )


# ---------------------------------------------------------------------------
# eta side


def canonicalize_eta(x, datum: Optional[GroupDatum] = None) -> CanonicalForm:
    """Reduce an eta-anti-fixed Laurent loop to t^lam * g0 * w1^{-1}, exactly."""
    if isinstance(x, EtaLoop):
        datum = x.datum
        x = x.gamma
    assert datum is not None
    if not gc.is_anti_fixed_eta(x, datum):
        raise NotAntiFixedError("loop is not eta-anti-fixed")

    if datum.twist is not None:
        return _canonicalize_eta_twisted(x, datum)

    n = x.n
    gplus, lam, _ = birkhoff_factor(x)
    h_acc = gplus.inverse()
    cur = h_acc * x * gc.apply_eta(h_acc, datum).inverse()

    m = LaurentMatrix.t_power([-v for v in lam]) * cur * datum.w1
    bidx = _block_index(lam)
    ell_rows = [[QI(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            e = m.entry(i, j)
            if bidx[i] > bidx[j]:
                if e:
                    raise NotAntiFixedError("positioned loop escapes the parabolic")
            elif bidx[i] == bidx[j]:
                if any(k != 0 for k in e):
                    raise NotAntiFixedError("Levi part of the positioned loop is not constant")
                ell_rows[i][j] = e.get(0, QI(0))
    ell = LaurentMatrix.from_scalars(ell_rows)
    u = m * ell.inverse()
    nil = u - LaurentMatrix.identity(n)
    if any(e for i in range(n) for j in range(n) if bidx[i] >= bidx[j]
           for e in [nil.entry(i, j)] if e):
        raise InvalidInputError("unipotent factor is not strictly block-upper")
    tlam = LaurentMatrix.t_power(lam)
    h = tlam * unipotent_sqrt(u).inverse() * tlam.inverse()
    hv = h.val()
    assert hv is None or hv >= 0
    cur = h * cur * gc.apply_eta(h, datum).inverse()
    h_acc = h * h_acc

    g0 = ell
    loop_rep = tlam * g0 * datum.w1.inverse()
    assert cur == loop_rep
    assert _eta_equation_holds(datum, lam, g0)
    orbit_class = _match_spherical_class(datum, lam, g0, "eta")
    return CanonicalForm(
        lam=tuple(lam),
        g0=g0,
        orbit_class=orbit_class,
        certificate=h_acc,
        residual_precision=None,
        side="eta",
        loop_rep=loop_rep,
    )


def _canonicalize_eta_twisted(x: LaurentMatrix, datum: GroupDatum) -> CanonicalForm:
    """Transport through the pure inner twist, reduce, and transport back."""
    base = gc.build_datum(datum.family, datum.n, datum.epsilon, gc.base_sector(datum))
    y = gc.transport_to_base(x, datum)
    form = canonicalize_eta(y, base)
    twist_inv = datum.twist.inverse()
    loop_rep = form.loop_rep * twist_inv
    g0 = form.g0 * datum.w1.inverse() * twist_inv * datum.w1
    h = form.certificate
    assert h * x * gc.apply_eta(h, datum).inverse() == loop_rep
    classes = classify_eta(datum, form.lam)
    orbit_class = next(c for c in classes if c.label == form.orbit_class.label)
    return CanonicalForm(
        lam=form.lam,
        g0=g0,
        orbit_class=orbit_class,
        certificate=h,
        residual_precision=None,
        side="eta",
        loop_rep=loop_rep,
    )


# ---------------------------------------------------------------------------
# Iwahori-level reduction (inputs must be pre-positioned as t~w * g)


def _diag_const_part(g, n: int) -> LaurentMatrix:
    c = g.constant_matrix()
    return LaurentMatrix.from_scalars(
        [[c[i][j] if i == j else QI(0) for j in range(n)] for i in range(n)]
    )


def _first_dirt(red: SeriesMatrix) -> Optional[Tuple[int, int]]:
    """Lexicographic defect position of red vs the identity.

    Returns (k, s): k the lowest t-degree with a defect, s the least
    superdiagonal offset j - i carrying one at that degree.
    """
    n = red.n
    best: Optional[Tuple[int, int]] = None
    for i in range(n):
        for j in range(n):
            for k, v in red.entry(i, j).items():
                if v.is_zero() or (k == 0 and i == j and v == QI(1)):
                    continue
                if k == 0 and i == j:
                    key = (0, 0)
                else:
                    key = (k, j - i)
                if best is None or key < best:
                    best = key
    return best


_QUARTER_ROOTS = {
    Fraction(0): QI(1),
    Fraction(1, 4): QI(0, 1),
    Fraction(1, 2): QI(-1),
    Fraction(3, 4): QI(0, -1),
}


def _same_class_multiplicative(m_act, rep_args: Sequence[Fraction],
                               diag: Sequence[QI]) -> bool:
    """Class test for an exact diagonal, possibly of infinite order.

    The reduction can land on any diagonal solution in the divisible
    torus; classes are separated by the integer characters vanishing on
    the action image, evaluated multiplicatively on the candidate and
    by argument arithmetic on the torsion representative.
    """
    from .intlat import integer_left_kernel_basis

    for k in integer_left_kernel_basis([list(r) for r in m_act]):
        val = QI(1)
        for ki, v in zip(k, diag):
            if ki:
                val = val * v ** ki
        want = sum((ki * a for ki, a in zip(k, rep_args)), Fraction(0)) % 1
        root = _QUARTER_ROOTS.get(want)
        if root is None:
            return False
        # conjugation-twisted actions move character values by positive
        # reals only, which never mixes the quarter-root fibres
        q = val / root
        if not q.is_real() or q.re <= 0:
            return False
    return True


def _check_torus_diag(d: LaurentMatrix, n: int) -> List[QI]:
    vals = []
    for i in range(n):
        v = d.coeff(i, i, 0)
        if v.is_zero():
            raise InvalidInputError("reduced torus element is singular")
        vals.append(v)
    return vals


def _match_iwahori_class(datum: GroupDatum, tw: AffineWeylElement, side: str,
                         diag: Sequence[QI]) -> IwahoriClass:
    problem = build_torus_problem(datum, tw, side)
    for cls in classes_at_tw(datum, tw, side):
        if _same_class_multiplicative(problem.m_act, list(cls.g0_args), diag):
            return cls
    raise AssertionError("reduced torus element matches no classified class")


def _theta_layer_steps(datum: GroupDatum, carrier: LaurentMatrix,
                       carrier_inv: LaurentMatrix, red: SeriesMatrix,
                       key: Tuple[int, int], lam_span: int) -> List[SeriesMatrix]:
    """Conjugators whose combined first-order effect clears the dirty layer.

    Candidates are the elementary Iwahori elements I + Ad_{t~w d}(t^m E_ij);
    each response is probed exactly at the clean torus point and kept only
    if it touches nothing below the current layer, so that applying the
    solved combination makes strict progress in the layer order.
    """
    n = red.n
    k, off = key
    stripe = [(i, j) for i in range(n) for j in range(n)
              if j - i == off and not (k == 0 and i == j)]
    target = [-red.coeff(i, j, k) for (i, j) in stripe]
    pp = k + 3
    ident = LaurentMatrix.identity(n)
    cols: List[List[QI]] = []
    moves: List[LaurentMatrix] = []
    for i0 in range(n):
        for j0 in range(n):
            for m in range(0, k + 2 * lam_span + 3):
                if m == 0 and i0 >= j0:
                    continue
                if (m, j0 - i0) < key:
                    # a coefficient of order the current dirt would feed
                    # its own square back into this layer
                    continue
                yb = LaurentMatrix.zeros(n)
                yb.rows[i0][j0] = {m: QI(1)}
                ad = carrier * yb * carrier_inv
                av = ad.val()
                if av is None or av < 0:
                    continue
                if av == 0:
                    c0 = ad.constant_matrix()
                    if any(not c0[i][j].is_zero()
                           for i in range(n) for j in range(i + 1)):
                        continue  # would leave the Iwahori subgroup
                hs = SeriesMatrix.from_laurent(ident + ad, pp)
                s_full = gc.apply_theta(hs, datum).inverse() \
                    - SeriesMatrix.identity(n, pp)
                admissible = True
                for i in range(n):
                    if not admissible:
                        break
                    for j in range(n):
                        if not admissible:
                            break
                        for deg, v in s_full.entry(i, j).items():
                            if v.is_zero():
                                continue
                            if (deg == 0 and i == j) or (deg, j - i) < key:
                                admissible = False
                                break
                if not admissible:
                    continue
                # at the clean torus point, red responds exactly by
                # (I + yb) * theta(I + ad)^-1; every product of the two
                # admissible factors lands strictly above the layer, so
                # the stripe coefficients below are genuinely linear
                col = [yb.coeff(i, j, k) + s_full.coeff(i, j, k)
                       for (i, j) in stripe]
                if all(v.is_zero() for v in col):
                    continue
                cols.append(col)
                moves.append(ad)
    rows = [[cols[b][r] for b in range(len(cols))] for r in range(len(stripe))]
    sol = _solve_qi(rows, target)
    if sol is None:
        raise InvalidInputError(
            "no admissible reduction step at this layer; "
            "the input is not in the positioned Iwahori slice")
    steps = []
    for y, ad in zip(sol, moves):
        if not y.is_zero():
            steps.append(SeriesMatrix.from_laurent(
                ident + ad.scale(y), red.precision + 4 + 2 * lam_span))
    return steps


def _transport_iwahori_form(form: CanonicalForm, datum: GroupDatum,
                            tw: AffineWeylElement, side: str) -> CanonicalForm:
    cinv = datum.twist.inverse()
    cls = next(c for c in classes_at_tw(datum, tw, side)
               if c.g0_args == form.orbit_class.g0_args)
    return CanonicalForm(
        lam=form.lam,
        g0=form.g0 * cinv,
        orbit_class=cls,
        certificate=form.certificate,
        residual_precision=form.residual_precision,
        side=side,
        loop_rep=form.loop_rep * cinv,
    )


def iwahori_reduce_theta(tw: AffineWeylElement, g: SeriesMatrix,
                         datum: GroupDatum) -> CanonicalForm:
    """Reduce t~w * g (g in the Iwahori subgroup) to its torus form."""
    if datum.twist is not None:
        base = gc.build_datum(datum.family, datum.n, datum.epsilon,
                              gc.base_sector_theta(datum))
        cs = SeriesMatrix.from_laurent(datum.twist, g.precision)
        form = iwahori_reduce_theta(tw, g * cs, base)
        return _transport_iwahori_form(form, datum, tw, "theta")
    n = g.n
    tw_loop = tw.loop()
    c = g.constant_matrix()
    if any(not c[i][j].is_zero() for i in range(n) for j in range(i)) or g.val() < 0:
        raise InvalidInputError("g is not an Iwahori element")
    x = SeriesMatrix.from_laurent(tw_loop, g.precision + 2 * max(
        abs(v) for v in list(tw.lam) + [1])) * g
    if not gc.is_anti_fixed_theta(x, datum):
        raise NotAntiFixedError("t~w * g violates the Iwahori membership equation")

    lam_span = max(abs(v) for v in list(tw.lam) + [1])
    h_acc = SeriesMatrix.identity(n, x.precision + 4)
    tw_inv = SeriesMatrix.from_laurent(tw_loop.inverse(), x.precision + 4 + 2 * lam_span)
    guard = 0
    last_key: Optional[Tuple[int, int]] = None
    while True:
        gcur = tw_inv * x
        d = _diag_const_part(gcur, n)
        red = SeriesMatrix.from_laurent(d.inverse(), gcur.precision + 4) * gcur
        key = _first_dirt(red)
        if key is None:
            break
        if last_key is not None and key <= last_key:
            raise PrecisionError("Iwahori reduction stalled; precision exhausted")
        last_key = key
        guard += 1
        assert guard <= 4 * n * (gcur.precision + 1)
        carrier = tw_loop * d
        carrier_inv = carrier.inverse()
        steps = _theta_layer_steps(datum, carrier, carrier_inv, red, key,
                                   lam_span)
        for hs in steps:
            x = hs * x * gc.apply_theta(hs, datum).inverse()
            h_acc = hs * h_acc

    gcur = tw_inv * x
    d = _diag_const_part(gcur, n)
    args = _check_torus_diag(d, n)
    cls = _match_iwahori_class(datum, tw, "theta", args)
    loop_rep = tw_loop * d
    return CanonicalForm(
        lam=tuple(tw.lam),
        g0=d,
        orbit_class=cls,
        certificate=h_acc,
        residual_precision=gcur.precision,
        side="theta",
        loop_rep=loop_rep,
    )


def iwahori_reduce_eta(tw: AffineWeylElement, g: LaurentMatrix,
                       datum: GroupDatum) -> CanonicalForm:
    """Reduce t~w * g (exact, pre-positioned) to its torus form, exactly."""
    if datum.twist is not None:
        base = gc.build_datum(datum.family, datum.n, datum.epsilon,
                              gc.base_sector(datum))
        form = iwahori_reduce_eta(tw, g * datum.twist, base)
        return _transport_iwahori_form(form, datum, tw, "eta")
    n = g.n
    tw_loop = tw.loop()
    x = tw_loop * g
    if not gc.is_anti_fixed_eta(x, datum):
        raise NotAntiFixedError("t~w * g violates the Iwahori membership equation")

    h_acc = LaurentMatrix.identity(n)
    guard = 0
    while True:
        gcur = tw_loop.inverse() * x
        d = _diag_const_part(gcur, n)
        u = d.inverse() * gcur
        nil = u - LaurentMatrix.identity(n)
        if nil.is_zero():
            break
        guard += 1
        if guard > 2 * n + 4:
            raise InvalidInputError("Iwahori eta reduction did not terminate")
        power = nil.copy()
        for _ in range(n - 1):
            power = power * nil
        if not power.is_zero():
            # t-degree layers can still be nilpotent; take enough extra powers
            span = (nil.maxdeg() or 0) - (nil.val() or 0) + n
            power = nil.copy()
            for _ in range(span + n):
                power = power * nil
            if not power.is_zero():
                raise InvalidInputError("unipotent defect is not nilpotent")
        h = tw_loop * d * unipotent_sqrt(u).inverse() * (tw_loop * d).inverse()
        x = h * x * gc.apply_eta(h, datum).inverse()
        h_acc = h * h_acc

    args = _check_torus_diag(d, n)
    cls = _match_iwahori_class(datum, tw, "eta", args)
    return CanonicalForm(
        lam=tuple(tw.lam),
        g0=d,
        orbit_class=cls,
        certificate=h_acc,
        residual_precision=None,
        side="eta",
        loop_rep=tw_loop * d,
    )
