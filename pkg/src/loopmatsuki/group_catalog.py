"""Catalog of supported group data and the loop-level involutions theta, eta.

Three matrix families are supported, each presented on GL_n over the Gaussian
rationals:

  split_gl         theta0(g) = transpose(g)^-1,      eta0(g) = conj(g)
  quaternionic_gl  theta0(g) = J transpose(g)^-1 J^-1, eta0(g) = J conj(g) J^-1
                   (n even, J the standard skew block matrix)
  unitary          theta0(g) = g,                    eta0(g) = transpose(conj(g))^-1

In every family the compact involution is eta_{c,0}(g) = transpose(conj(g))^-1,
so the compact form is U(n).  Loop involutions are

  theta(gamma)(t) = theta0(gamma(epsilon t))
  eta(gamma)(t)   = eta0(gamma(epsilon t^-1))   (coefficientwise conjugation)

A datum may carry an inner twist c with c*eta0(c) scalar, replacing eta0 by
Ad_c o eta0 (e.g. U(2) -> U(1,1) with c = diag(1,-1)).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import List, Optional, Sequence

from .errors import InvalidInputError, UnsupportedFamilyError
from .gaussian import QI, ONE, qi_from_str
from .laurent import LaurentMatrix, SeriesMatrix

SPLIT_GL = "split_gl"
QUATERNIONIC_GL = "quaternionic_gl"
UNITARY = "unitary"
FAMILIES = (SPLIT_GL, QUATERNIONIC_GL, UNITARY)


def j_matrix(n: int) -> LaurentMatrix:
    """Block-diagonal matrix of 2x2 blocks [[0,1],[-1,0]]; requires n even."""
    rows = [[QI(0)] * n for _ in range(n)]
    for b in range(n // 2):
        rows[2 * b][2 * b + 1] = QI(1)
        rows[2 * b + 1][2 * b] = QI(-1)
    return LaurentMatrix.from_scalars(rows)


def antidiagonal_matrix(n: int) -> LaurentMatrix:
    rows = [[QI(0)] * n for _ in range(n)]
    for i in range(n):
        rows[i][n - 1 - i] = QI(1)
    return LaurentMatrix.from_scalars(rows)


@dataclass(frozen=True)
class GroupDatum:
    family: str
    n: int
    epsilon: int
    z: QI
    w1: LaurentMatrix
    w2: LaurentMatrix
    real_form: str
    compact_form: str
    symmetric_subgroup: str
    twist: Optional[LaurentMatrix] = None  # inner twist c, or None

    def untwisted(self) -> "GroupDatum":
        if self.twist is None:
            return self
        base = build_datum(self.family, self.n, self.epsilon, self.z)
        return base


def _names(family: str, n: int) -> tuple:
    if family == SPLIT_GL:
        return (f"GL{n}(R)", f"U({n})", f"O({n},C)")
    if family == QUATERNIONIC_GL:
        return (f"GL{n // 2}(H)", f"U({n})", f"Sp({n},C)")
    return (f"U({n})", f"U({n})", f"GL{n}(C)")


def build_datum(family: str, n: int, epsilon: int, z: QI | int = 1) -> GroupDatum:
    if family not in FAMILIES:
        raise UnsupportedFamilyError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if n < 1:
        raise InvalidInputError("rank must be positive")
    if family == QUATERNIONIC_GL and n % 2 != 0:
        raise UnsupportedFamilyError("quaternionic_gl requires even rank")
    if epsilon not in (1, -1):
        raise InvalidInputError("epsilon must be +1 or -1")
    zq = QI.of(z) if not isinstance(z, QI) else z
    if (zq ** 4) != ONE:
        raise InvalidInputError("central twist z must be a 4th root of unity")

    if family == SPLIT_GL:
        w1 = LaurentMatrix.identity(n)
    elif family == QUATERNIONIC_GL:
        w1 = j_matrix(n)
    else:
        w1 = antidiagonal_matrix(n)
    real, compact, symm = _names(family, n)
    datum = GroupDatum(family, n, epsilon, zq, w1, LaurentMatrix.identity(n),
                       real, compact, symm)
    w2 = theta0(w1, datum) * w1
    return replace(datum, w2=w2)


def datum_from_config(cfg: dict) -> GroupDatum:
    """Build a datum from the JSON configuration dictionary."""
    try:
        family = cfg["family"]
        n = int(cfg["n"])
        epsilon = int(cfg["epsilon"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"bad datum config: {exc}") from exc
    z: QI | int = 1
    if "z" in cfg and cfg["z"] is not None:
        zc = cfg["z"]
        if isinstance(zc, str):
            z = qi_from_str(zc)
        elif isinstance(zc, dict):
            z = QI(Fraction(zc.get("num_re", 0), zc.get("den_re", 1)),
                   Fraction(zc.get("num_im", 0), zc.get("den_im", 1)))
        else:
            z = int(zc)
    datum = build_datum(family, n, epsilon, z)
    if cfg.get("inner_twist") is not None:
        g = matrix_from_config(cfg["inner_twist"], n)
        datum = pure_inner_twist(datum, g)
    return datum


def matrix_from_config(rows: Sequence[Sequence], n: int) -> LaurentMatrix:
    if len(rows) != n or any(len(r) != n for r in rows):
        raise InvalidInputError(f"matrix must be {n}x{n}")
    out = []
    for r in rows:
        row = []
        for x in r:
            if isinstance(x, str):
                row.append(qi_from_str(x))
            else:
                row.append(QI.of(x))
        out.append(row)
    return LaurentMatrix.from_scalars(out)


# ---------------------------------------------------------------------------
# constant-level involutions


def theta0(m: LaurentMatrix, datum: GroupDatum) -> LaurentMatrix:
    """The symmetric-subgroup involution, applied entrywise to a Laurent matrix
    (no substitution in t)."""
    if datum.family == SPLIT_GL:
        return m.inverse().transpose()
    if datum.family == QUATERNIONIC_GL:
        j = j_matrix(datum.n)
        return j * m.inverse().transpose() * j.inverse()
    return m


def eta0(m: LaurentMatrix, datum: GroupDatum) -> LaurentMatrix:
    """The real-form involution on constant matrices (entrywise for Laurent
    matrices; no substitution in t).  Honors the datum's inner twist."""
    if datum.family == SPLIT_GL:
        out = m.substitute(ONE, invert=False, conj=True)
    elif datum.family == QUATERNIONIC_GL:
        j = j_matrix(datum.n)
        out = j * m.substitute(ONE, invert=False, conj=True) * j.inverse()
    else:
        out = m.substitute(ONE, invert=False, conj=True).inverse().transpose()
    if datum.twist is not None:
        out = datum.twist * out * datum.twist.inverse()
    return out


def eta_c0(m: LaurentMatrix, datum: GroupDatum) -> LaurentMatrix:
    """Compact-form involution theta0 o eta0."""
    return theta0(eta0(m, datum), datum)


def is_compact(m: LaurentMatrix, datum: GroupDatum) -> bool:
    """True iff the constant matrix m lies in the compact form U(n) of the
    untwisted datum, i.e. m * conj-transpose(m) = I."""
    ct = m.substitute(ONE, invert=False, conj=True).transpose()
    return (m * ct) == LaurentMatrix.identity(datum.n)


# ---------------------------------------------------------------------------
# loop-level involutions


def apply_theta(gamma, datum: GroupDatum):
    """theta(gamma)(t) = theta0(gamma(epsilon t)), conjugated by the inner
    twist when one is present.  Accepts LaurentMatrix or SeriesMatrix
    (precision is tracked by the series arithmetic)."""
    eps = QI(datum.epsilon)
    g = gamma.substitute(eps, invert=False, conj=False)
    if datum.family == SPLIT_GL:
        out = g.inverse().transpose()
    elif datum.family == QUATERNIONIC_GL:
        j = j_matrix(datum.n)
        ji = j.inverse()
        if isinstance(g, SeriesMatrix):
            prec = g.precision
            j = SeriesMatrix.from_laurent(j, prec)
            ji = SeriesMatrix.from_laurent(ji, prec)
        out = j * g.inverse().transpose() * ji
    else:
        out = g
    if datum.twist is not None:
        c = datum.twist
        ci = c.inverse()
        if isinstance(out, SeriesMatrix):
            c = SeriesMatrix.from_laurent(c, out.precision)
            ci = SeriesMatrix.from_laurent(ci, out.precision)
        out = c * out * ci
    return out


def apply_eta(gamma: LaurentMatrix, datum: GroupDatum) -> LaurentMatrix:
    """eta(gamma)(t) = eta0(gamma(epsilon t^-1)), with exact coefficientwise
    conjugation.  Laurent matrices only."""
    if not isinstance(gamma, LaurentMatrix):
        raise InvalidInputError("eta requires an exact Laurent matrix")
    eps = QI(datum.epsilon)
    g = gamma.substitute(eps, invert=True, conj=True)
    if datum.family == SPLIT_GL:
        out = g
    elif datum.family == QUATERNIONIC_GL:
        j = j_matrix(datum.n)
        out = j * g * j.inverse()
    else:
        out = g.inverse().transpose()
    if datum.twist is not None:
        out = datum.twist * out * datum.twist.inverse()
    return out


def d_theta0(y: LaurentMatrix, datum: GroupDatum) -> LaurentMatrix:
    """Differential of theta0 at the identity."""
    if datum.family == SPLIT_GL:
        return -y.transpose()
    if datum.family == QUATERNIONIC_GL:
        j = j_matrix(datum.n)
        return -(j * y.transpose() * j.inverse())
    return y


def theta0_torus_matrix(datum: GroupDatum) -> List[List[int]]:
    """Integer matrix E with theta0(t^lambda) = t^(E lambda); the same matrix
    gives the action of eta0 on the compact-torus argument vector."""
    n = datum.n
    if datum.family == SPLIT_GL:
        return [[-1 if i == j else 0 for j in range(n)] for i in range(n)]
    if datum.family == QUATERNIONIC_GL:
        # theta0 inverts and swaps within each consecutive pair
        e = [[0] * n for _ in range(n)]
        for b in range(n // 2):
            e[2 * b][2 * b + 1] = -1
            e[2 * b + 1][2 * b] = -1
        return e
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def anti_fixed_defect_theta(gamma, datum: GroupDatum):
    """gamma * theta(gamma) - z; zero iff gamma is z-anti-fixed for theta."""
    prod = gamma * apply_theta(gamma, datum)
    if isinstance(prod, SeriesMatrix):
        zid = SeriesMatrix.from_laurent(
            LaurentMatrix.diag_scalars([datum.z] * datum.n), prod.precision)
    else:
        zid = LaurentMatrix.diag_scalars([datum.z] * datum.n)
    return prod - zid


def anti_fixed_defect_eta(gamma: LaurentMatrix, datum: GroupDatum) -> LaurentMatrix:
    prod = gamma * apply_eta(gamma, datum)
    return prod - LaurentMatrix.diag_scalars([datum.z] * datum.n)


def is_anti_fixed_theta(gamma, datum: GroupDatum) -> bool:
    d = anti_fixed_defect_theta(gamma, datum)
    if isinstance(d, SeriesMatrix):
        return all(not e for row in d.rows for e in row)
    return d.is_zero()


def is_anti_fixed_eta(gamma: LaurentMatrix, datum: GroupDatum) -> bool:
    return anti_fixed_defect_eta(gamma, datum).is_zero()


# ---------------------------------------------------------------------------
# pure inner twists


def twist_scalar(datum: GroupDatum, g: LaurentMatrix) -> QI:
    """For a candidate inner twist g, return the scalar z_c with
    g * eta0(g) = z_c * I; raises if the product is not scalar."""
    base = datum.untwisted()
    prod = g * eta0(g, base)
    const = prod.constant_matrix() if prod.is_constant() else None
    if const is None:
        raise InvalidInputError("g * eta0(g) is not constant")
    s = const[0][0]
    n = datum.n
    for i in range(n):
        for j in range(n):
            want = s if i == j else QI(0)
            if const[i][j] != want:
                raise InvalidInputError("g * eta0(g) is not a scalar matrix")
    if (s ** 4) != ONE:
        raise InvalidInputError("g * eta0(g) must be a 4th root of unity")
    return s


def twist_scalar_theta(datum: GroupDatum, g: LaurentMatrix) -> QI:
    """For a candidate inner twist g, return the scalar s with
    g * theta0(g) = s * I; raises if the product is not scalar."""
    base = datum.untwisted()
    prod = g * theta0(g, base)
    const = prod.constant_matrix() if prod.is_constant() else None
    if const is None:
        raise InvalidInputError("g * theta0(g) is not constant")
    s = const[0][0]
    n = datum.n
    for i in range(n):
        for j in range(n):
            want = s if i == j else QI(0)
            if const[i][j] != want:
                raise InvalidInputError("g * theta0(g) is not a scalar matrix")
    if (s ** 4) != ONE:
        raise InvalidInputError("g * theta0(g) must be a 4th root of unity")
    return s


def pure_inner_twist(datum: GroupDatum, g: LaurentMatrix) -> GroupDatum:
    """Replace both involutions by their Ad_g twists.  Requires g * eta0(g)
    and g * theta0(g) scalar (4th roots of unity); w1 is unchanged."""
    if datum.twist is not None:
        raise InvalidInputError("datum is already twisted; twist the base datum")
    if not g.is_constant():
        raise InvalidInputError("inner twist must be a constant matrix")
    twist_scalar(datum, g)
    twist_scalar_theta(datum, g)
    if g == LaurentMatrix.identity(datum.n):
        return datum
    real = _twisted_real_form_name(datum, g)
    return replace(datum, twist=g, real_form=real)


def _twisted_real_form_name(datum: GroupDatum, g: LaurentMatrix) -> str:
    if datum.family == UNITARY:
        const = g.constant_matrix()
        n = datum.n
        diag = all(const[i][j].is_zero() for i in range(n) for j in range(n) if i != j)
        if diag and all(const[i][i] in (QI(1), QI(-1)) for i in range(n)):
            p = sum(1 for i in range(n) if const[i][i] == QI(1))
            return f"U({p},{n - p})"
    return datum.real_form + " (inner twist)"


def transport_to_base(x: LaurentMatrix, datum: GroupDatum) -> LaurentMatrix:
    """Carry a z-anti-fixed loop for the twisted eta to a (z*z_c)-anti-fixed
    loop for the base eta: x -> x * c."""
    if datum.twist is None:
        return x
    return x * datum.twist


def transport_from_base(y: LaurentMatrix, datum: GroupDatum) -> LaurentMatrix:
    if datum.twist is None:
        return y
    return y * datum.twist.inverse()


def base_sector(datum: GroupDatum) -> QI:
    """The central sector of the base datum matching this datum's z-sector
    under the eta-side transport bijection."""
    if datum.twist is None:
        return datum.z
    return datum.z * twist_scalar(datum, datum.twist)


def base_sector_theta(datum: GroupDatum) -> QI:
    """The central sector of the base datum matching this datum's z-sector
    under the theta-side transport bijection x -> x * c."""
    if datum.twist is None:
        return datum.z
    return datum.z * twist_scalar_theta(datum, datum.twist)


# ---------------------------------------------------------------------------
# verification


def _random_invertible(n: int, rng: random.Random) -> LaurentMatrix:
    while True:
        rows = [[QI(Fraction(rng.randint(-4, 4)), Fraction(rng.randint(-4, 4)))
                 for _ in range(n)] for _ in range(n)]
        m = LaurentMatrix.from_scalars(rows)
        d = m.det()
        if d and any(not c.is_zero() for c in d.values()):
            return m


def verify_datum(datum: GroupDatum, seed: int = 0, samples: int = 20) -> dict:
    """Run the datum invariants; returns {check_name: bool}."""
    rng = random.Random(seed)
    n = datum.n
    report = {}

    mats = [_random_invertible(n, rng) for _ in range(samples)]
    report["theta0_involutive"] = all(theta0(theta0(m, datum), datum) == m for m in mats)
    report["eta0_involutive"] = all(eta0(eta0(m, datum), datum) == m for m in mats)
    report["involutions_commute"] = all(
        theta0(eta0(m, datum), datum) == eta0(theta0(m, datum), datum) for m in mats)
    report["w2_consistent"] = datum.w2 == theta0(datum.w1, datum) * datum.w1

    # Ad_{w1^-1} o theta0 sends lower elementary generators to upper matrices
    ok = True
    w1i = datum.w1.inverse()
    for i in range(n):
        for j in range(i):
            rows = [[QI(1) if a == b else QI(0) for b in range(n)] for a in range(n)]
            rows[i][j] = QI(2)
            gen = LaurentMatrix.from_scalars(rows)
            img = w1i * theta0(gen, datum) * datum.w1
            const = img.constant_matrix()
            if not img.is_constant() or any(
                    not const[a][b].is_zero() for a in range(n) for b in range(a)):
                ok = False
    report["borel_condition"] = ok

    report["z_fixed"] = (
        theta0(LaurentMatrix.diag_scalars([datum.z] * n), datum)
        == LaurentMatrix.diag_scalars([datum.z] * n)
        and eta0(LaurentMatrix.diag_scalars([datum.z] * n), datum)
        == LaurentMatrix.diag_scalars([datum.z] * n))

    lam_ok = True
    for _ in range(10):
        lam = [rng.randint(-5, 5) for _ in range(n)]
        tl = LaurentMatrix.t_power(lam)
        if apply_eta(tl, datum) != apply_theta(tl, datum):
            lam_ok = False
    report["eta_theta_agree_on_coweights"] = lam_ok
    return report
