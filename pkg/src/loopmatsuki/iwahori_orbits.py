"""Iwahori-level orbit data via integer-lattice computations on the torus.

An admissible extended affine Weyl element tw = t^lambda * w (with a fixed
permutation lift) gives a twisted-conjugation problem on the diagonal torus:

  equation   Ad_w(g) * theta0(g) = t_tw * z          (unknown g in the torus)
  action     g  ->  Ad_{w^-1}(h) * g * theta0(h)^-1  (h in the torus)

Writing torus elements multiplicatively, both maps are given by integer
matrices M_eq and M_act on exponent/argument vectors.  Over the divisible
group the equation is solvable iff every integer character vanishing on the
image kills the target; the class set is the finite quotient of the solution
coset by the action image, and the stabilizer component group is read off the
Smith normal form of M_act.  Arguments are kept as exact rationals mod 1, so
representatives are roots of unity (embedded into Q(i) when their order
divides 4).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from typing import List, Optional, Sequence, Tuple

from .errors import InvalidInputError
from .gaussian import QI
from .group_catalog import (
    GroupDatum, theta0, eta0, is_anti_fixed_theta, is_anti_fixed_eta,
    build_datum, base_sector, base_sector_theta,
)
from .intlat import (
    snf_int, invert_unimodular, mat_mul, mat_vec, integer_left_kernel_basis,
    rational_kernel_basis, solve_rational, lattice_basis, snf_diagonal,
)
from .laurent import LaurentMatrix

Args = Tuple[Fraction, ...]

_QUARTER_ARGS = {QI(1): Fraction(0), QI(0, 1): Fraction(1, 4),
                 QI(-1): Fraction(1, 2), QI(0, -1): Fraction(3, 4)}
_QUARTER_VALS = {v: k for k, v in _QUARTER_ARGS.items()}


def qi_arg(x: QI) -> Fraction:
    if x not in _QUARTER_ARGS:
        raise InvalidInputError(f"{x} is not a 4th root of unity")
    return _QUARTER_ARGS[x]


def args_to_matrix(args: Sequence[Fraction]) -> Optional[LaurentMatrix]:
    """Diagonal root-of-unity matrix for argument vector, or None when some
    entry has order not dividing 4 (outside Q(i))."""
    vals = []
    for a in args:
        key = Fraction(a) % 1
        if key not in _QUARTER_VALS:
            return None
        vals.append(_QUARTER_VALS[key])
    return LaurentMatrix.diag_scalars(vals)


def perm_matrix(w: Sequence[int]) -> LaurentMatrix:
    n = len(w)
    rows = [[QI(0)] * n for _ in range(n)]
    for i in range(n):
        rows[w[i]][i] = QI(1)
    return LaurentMatrix.from_scalars(rows)


def _perm_inverse(w: Sequence[int]) -> Tuple[int, ...]:
    inv = [0] * len(w)
    for i, wi in enumerate(w):
        inv[wi] = i
    return tuple(inv)


@dataclass(frozen=True)
class AffineWeylElement:
    lam: Tuple[int, ...]
    w: Tuple[int, ...]  # permutation, w[i] = image of index i
    lift: LaurentMatrix
    signs: Tuple[int, ...]

    @staticmethod
    def of(lam: Sequence[int], w: Sequence[int]) -> "AffineWeylElement":
        w = tuple(w)
        return AffineWeylElement(tuple(int(x) for x in lam), w,
                                 perm_matrix(w), (1,) * len(w))

    def loop(self) -> LaurentMatrix:
        return LaurentMatrix.t_power(list(self.lam)) * self.lift


def _ad_matrix(m: LaurentMatrix) -> List[List[int]]:
    """Integer matrix A with m * t^v * m^-1 = t^(A v), for monomial m."""
    n = m.n
    minv = m.inverse()
    cols = []
    for k in range(n):
        e = [0] * n
        e[k] = 1
        img = m * LaurentMatrix.t_power(e) * minv
        col = []
        for i in range(n):
            ent = img.entry(i, i)
            col.append(min(ent) if ent else 0)
        cols.append(col)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def _involution_torus_matrix(datum: GroupDatum, side: str) -> List[List[int]]:
    """E with involution(torus element of argument a) having arguments E a.
    The theta path probes t-powers; the eta path probes 4th roots of unity in
    the compact torus."""
    n = datum.n
    cols = []
    if side == "theta":
        for k in range(n):
            e = [0] * n
            e[k] = 1
            img = theta0(LaurentMatrix.t_power(e), datum)
            col = []
            for i in range(n):
                ent = img.entry(i, i)
                col.append(min(ent) if ent else 0)
            cols.append(col)
    else:
        for k in range(n):
            vals = [QI(1)] * n
            vals[k] = QI(0, 1)  # argument 1/4 in coordinate k
            img = eta0(LaurentMatrix.diag_scalars(vals), datum)
            col = []
            for i in range(n):
                a = qi_arg(img.constant_matrix()[i][i])
                c = int(4 * a)
                col.append(c - 4 if c > 1 else c)  # entries lie in {-1,0,1}
            cols.append(col)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def theta0_weyl(datum: GroupDatum, w: Sequence[int]) -> Tuple[int, ...]:
    """Permutation part of theta0 applied to the lift of w."""
    img = theta0(perm_matrix(w), datum)
    const = img.constant_matrix()
    n = datum.n
    out = [0] * n
    for j in range(n):
        hits = [i for i in range(n) if not const[i][j].is_zero()]
        assert len(hits) == 1
        out[j] = hits[0]
    return tuple(out)


def is_admissible_tw(datum: GroupDatum, lam: Sequence[int], w: Sequence[int]) -> bool:
    """theta0(w) = w^-1 in W and theta0(lambda) = -w^-1 lambda."""
    if theta0_weyl(datum, w) != _perm_inverse(w):
        return False
    e = _involution_torus_matrix(datum, "theta")
    winv = _ad_matrix(perm_matrix(_perm_inverse(w)))
    lhs = mat_vec(e, list(lam))
    rhs = [-x for x in mat_vec(winv, list(lam))]
    return lhs == rhs


def enumerate_admissible_tw(datum: GroupDatum, bound: int) -> List[AffineWeylElement]:
    if bound < 0:
        raise InvalidInputError("bound must be nonnegative")
    out = []
    for w in permutations(range(datum.n)):
        if theta0_weyl(datum, w) != _perm_inverse(w):
            continue
        for lam in product(range(-bound, bound + 1), repeat=datum.n):
            if is_admissible_tw(datum, lam, w):
                out.append(AffineWeylElement.of(lam, w))
    return sorted(out, key=lambda tw: (tw.lam, tw.w))


def t_tw(tw: AffineWeylElement, datum: GroupDatum) -> List[QI]:
    """t_tw = eps^lambda * (w * theta0(w))^-1, a 4th-root diagonal."""
    m = (tw.lift * theta0(tw.lift, datum)).inverse()
    const = m.constant_matrix()
    n = datum.n
    if not m.is_constant() or any(
            not const[i][j].is_zero() for i in range(n) for j in range(n) if i != j):
        raise InvalidInputError("w * theta0(w) is not a torus element")
    eps = datum.epsilon
    out = []
    for i in range(n):
        s = QI(1) if eps == 1 or tw.lam[i] % 2 == 0 else QI(-1)
        out.append(s * const[i][i])
    for x in out:
        qi_arg(x)  # raises if not a 4th root
    return out


@dataclass(frozen=True)
class TorusTwistProblem:
    n: int
    m_eq: Tuple[Tuple[int, ...], ...]
    m_act: Tuple[Tuple[int, ...], ...]
    target: Args


def build_torus_problem(datum: GroupDatum, tw: AffineWeylElement,
                        side: str = "theta") -> TorusTwistProblem:
    e = _involution_torus_matrix(datum, side)
    a_w = _ad_matrix(tw.lift)
    a_winv = _ad_matrix(tw.lift.inverse())
    n = datum.n
    m_eq = [[a_w[i][j] + e[i][j] for j in range(n)] for i in range(n)]
    m_act = [[a_winv[i][j] - e[i][j] for j in range(n)] for i in range(n)]
    assert all(x == 0 for row in mat_mul(m_eq, m_act) for x in row)
    # solutions modulo the action must form a finite set
    for v in rational_kernel_basis(m_eq):
        assert solve_rational(m_act, v) is not None, \
            "equation kernel escapes the action image"
    zarg = qi_arg(datum.z)
    target = tuple((a + zarg) % 1 for a in (qi_arg(x) for x in t_tw(tw, datum)))
    return TorusTwistProblem(n, tuple(tuple(r) for r in m_eq),
                             tuple(tuple(r) for r in m_act), target)


# ---------------------------------------------------------------------------
# solving over the divisible torus, in argument coordinates (Q mod Z)


def _span_echelon(m) -> List[List[Fraction]]:
    """Echelonized basis of the rational column span of m."""
    cols = [[Fraction(m[i][j]) for i in range(len(m))] for j in range(len(m[0]))]
    basis: List[List[Fraction]] = []
    pivots: List[int] = []
    for c in cols:
        c = list(c)
        for b, p in zip(basis, pivots):
            if c[p]:
                f = c[p]
                c = [x - f * y for x, y in zip(c, b)]
        piv = next((i for i, x in enumerate(c) if x), None)
        if piv is None:
            continue
        c = [x / c[piv] for x in c]
        basis.append(c)
        pivots.append(piv)
    return basis


def _reduce_mod_span(v: List[Fraction], basis, pivots) -> List[Fraction]:
    v = list(v)
    for b, p in zip(basis, pivots):
        if v[p]:
            f = v[p]
            v = [x - f * y for x, y in zip(v, b)]
    return v


def _canonicalizer(m_act):
    """Returns a function reducing argument vectors to a canonical
    representative modulo Z^n + span_Q(columns of m_act)."""
    n = len(m_act)
    basis = _span_echelon(m_act)
    pivots = [next(i for i, x in enumerate(b) if x) for b in basis]
    proj_ints = []
    for k in range(n):
        e = [Fraction(1) if i == k else Fraction(0) for i in range(n)]
        proj_ints.append(_reduce_mod_span(e, basis, pivots))
    lat = lattice_basis(proj_ints)  # image of Z^n in the quotient space

    def canon(v: Sequence[Fraction]) -> Args:
        r = _reduce_mod_span([Fraction(x) for x in v], basis, pivots)
        if lat:
            bt = [[lat[j][i] for j in range(len(lat))] for i in range(n)]
            coords = solve_rational(bt, r)
            assert coords is not None
            for c, b in zip(coords, lat):
                f = Fraction(int(c // 1))
                r = [x - f * y for x, y in zip(r, b)]
        return tuple(r)

    return canon


def solve_torus_classes(problem: TorusTwistProblem):
    """Returns (nonempty, classes) with classes a list of
    (argument tuple, component-group invariant factors)."""
    m_eq = [list(r) for r in problem.m_eq]
    m_act = [list(r) for r in problem.m_act]
    targ = [Fraction(x) for x in problem.target]
    for k in integer_left_kernel_basis(m_eq):
        if sum(ki * t for ki, t in zip(k, targ)).denominator != 1:
            return False, []
    u, d, v = snf_int(m_eq)
    n = problem.n
    ut = mat_vec(u, targ)
    c = []
    for i in range(n):
        di = d[i][i]
        if di == 0:
            assert ut[i].denominator == 1
            c.append(Fraction(0))
        else:
            c.append(Fraction(ut[i], 1) / di)
    a0 = mat_vec(v, c)

    gens = []
    orders = []
    for i in range(n):
        di = d[i][i]
        if di > 1:
            gens.append([Fraction(v[j][i], di) for j in range(n)])
            orders.append(di)

    canon = _canonicalizer(m_act)
    comp = tuple(f for f in snf_diagonal(snf_int(m_act)[1]) if f > 1)
    seen = {}
    for combo in product(*(range(o) for o in orders)):
        vec = list(a0)
        for m, g in zip(combo, gens):
            vec = [x + m * gx for x, gx in zip(vec, g)]
        key = canon(vec)
        if key not in seen:
            seen[key] = (tuple(x % 1 for x in key), comp)
    classes = sorted(seen.values(), key=lambda t: t[0])
    # canonical representatives still solve the equation
    for args, _ in classes:
        img = mat_vec(m_eq, list(args))
        assert all((x - t).denominator == 1 for x, t in zip(img, targ))
    return True, classes


def same_torus_class(problem: TorusTwistProblem, a: Sequence[Fraction],
                     b: Sequence[Fraction]) -> bool:
    """Whether two solutions differ by Z^n + the rational action image."""
    diff = [Fraction(x) - Fraction(y) for x, y in zip(a, b)]
    for k in integer_left_kernel_basis([list(r) for r in problem.m_act]):
        if sum(ki * x for ki, x in zip(k, diff)).denominator != 1:
            return False
    return True


# ---------------------------------------------------------------------------
# classes


@dataclass(frozen=True)
class IwahoriClass:
    datum: GroupDatum
    tw: AffineWeylElement
    side: str
    g0_args: Args
    g0: Optional[LaurentMatrix]
    loop_rep: Optional[LaurentMatrix]
    component_group: Tuple[int, ...]
    spherical_parent: Tuple[int, ...]


def classes_at_tw(datum: GroupDatum, tw: AffineWeylElement,
                  side: str = "theta") -> List[IwahoriClass]:
    if datum.twist is not None:
        # transport x -> x * c^-1 between the base anti-fixed set at the
        # matching z-sector and the twisted one; class labels are shared
        sector = base_sector(datum) if side == "eta" \
            else base_sector_theta(datum)
        base = build_datum(datum.family, datum.n, datum.epsilon, sector)
        cinv = datum.twist.inverse()
        out = []
        for cls in classes_at_tw(base, tw, side):
            g0 = loop = None
            if cls.g0 is not None:
                g0 = cls.g0 * cinv
                loop = tw.loop() * g0
                if side == "eta":
                    assert is_anti_fixed_eta(loop, datum), (tw, cls.g0_args)
                else:
                    assert is_anti_fixed_theta(loop, datum), (tw, cls.g0_args)
            out.append(IwahoriClass(datum, tw, side, cls.g0_args, g0, loop,
                                    cls.component_group, cls.spherical_parent))
        return out
    problem = build_torus_problem(datum, tw, side)
    nonempty, classes = solve_torus_classes(problem)
    out = []
    parent = tuple(sorted(tw.lam, reverse=True))
    for args, comp in classes:
        g0 = args_to_matrix(args)
        loop = None
        if g0 is not None:
            loop = tw.loop() * g0
            if side == "theta":
                assert is_anti_fixed_theta(loop, datum), (tw, args)
            else:
                assert is_anti_fixed_eta(loop, datum), (tw, args)
        out.append(IwahoriClass(datum, tw, side, args, g0, loop, comp, parent))
    return out


def enumerate_iwahori(datum: GroupDatum, bound: int, side: str = "theta") -> List[IwahoriClass]:
    out = []
    for tw in enumerate_admissible_tw(datum, bound):
        out.extend(classes_at_tw(datum, tw, side))
    return out


def spherical_projection(cls: IwahoriClass):
    """The spherical class at the dominant sort of lambda carrying the same
    form invariant as the Iwahori representative."""
    from .coweight_orbits import classify_theta, classify_eta
    datum = cls.datum
    lam_dom = list(cls.spherical_parent)
    classify = classify_theta if cls.side == "theta" else classify_eta
    spherical = classify(datum, lam_dom)
    if not spherical:
        raise InvalidInputError("no spherical class above this Iwahori class")
    if datum.family != "unitary":
        assert len(spherical) == 1
        return spherical[0]
    if cls.g0 is None:
        raise InvalidInputError("representative lies outside Q(i)")
    # sort lambda dominantly by a twisted conjugation with a permutation
    # (theta0 = id for this family), then read the middle-block involution
    order = sorted(range(datum.n), key=lambda i: -cls.tw.lam[i])
    p = perm_matrix(_perm_inverse(order))
    cmat = p * (cls.tw.lift * cls.g0) * p.inverse()
    g0p = cmat * datum.w1
    zero_idx = [i for i, x in enumerate(lam_dom) if x == 0]
    m = len(zero_idx)
    const = g0p.constant_matrix()
    # middle-block involution M = R * B; its trace gives the multiplicity pair
    block = [[const[zero_idx[a]][zero_idx[b]] for b in range(m)] for a in range(m)]
    tr = QI(0)
    for a in range(m):
        tr = tr + block[m - 1 - a][a]
    assert tr.is_real() and tr.re.denominator == 1
    pcount = (m + int(tr.re)) // 2
    label = f"({pcount},{m - pcount})"
    for s in spherical:
        if s.label == label:
            return s
    raise InvalidInputError(f"no spherical class with label {label}")
