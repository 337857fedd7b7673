"""Spherical orbit classification for both loop involutions.

For a dominant coweight lambda satisfying lambda = -w1^{-1} theta0(lambda),
the twisted orbit sets at level lambda are classified by constant matrices
g0 in the Levi L_lambda solving

  theta side:  g0 = w2 * Ad_{w1^-1}(theta0(g0)^-1) * eps^lambda * z
  eta side:    g0 = w2 * Ad_{w1^-1}(eta0(g0^-1))   * eps^lambda * z

with loop representative t^lambda * g0 * w1^-1.  Per family the per-block
solutions reduce to classical form theory:

  split_gl / quaternionic_gl: on a block of size m with lambda-value mu the
    equation reads B = c * transpose(B) (theta) or B * conj(B) = c (eta) for
    a sign c; c = +1 gives the symmetric/real type (rep I_m), c = -1 the
    alternating/quaternionic type (rep the standard skew form, m even), and
    anything else is empty.
  unitary: mirror-paired blocks carry a unique class; the middle block
    carries an involution (theta) or Hermitian form (eta) M = R * B and the
    classes are eigenvalue-multiplicity / signature pairs (p, q).

Both sides produce the same compact representatives, so one matrix serves as
x_lambda on either side.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import List, Optional, Sequence, Tuple

from .errors import InvalidInputError
from .gaussian import QI, ONE
from .group_catalog import (
    SPLIT_GL, QUATERNIONIC_GL, UNITARY, GroupDatum,
    theta0, apply_theta, apply_eta,
    is_anti_fixed_theta, is_anti_fixed_eta,
    eta0, base_sector, base_sector_theta, build_datum,
)
from .laurent import LaurentMatrix

Block = Tuple[int, int, int]  # (start, size, lambda-value)


def blocks_of(lam: Sequence[int]) -> List[Block]:
    """Maximal constant runs of lambda, the Levi block structure."""
    out: List[Block] = []
    i = 0
    while i < len(lam):
        j = i
        while j < len(lam) and lam[j] == lam[i]:
            j += 1
        out.append((i, j - i, lam[i]))
        i = j
    return out


def is_dominant(lam: Sequence[int]) -> bool:
    return all(lam[i] >= lam[i + 1] for i in range(len(lam) - 1))


def is_admissible(datum: GroupDatum, lam: Sequence[int]) -> bool:
    """lambda = -w1^{-1} theta0(lambda), checked on torus loops."""
    tl = LaurentMatrix.t_power(list(lam))
    img = datum.w1.inverse() * theta0(tl, datum) * datum.w1
    return img * tl == LaurentMatrix.identity(datum.n)


@dataclass(frozen=True)
class AdmissibleCoweight:
    lam: Tuple[int, ...]
    blocks: Tuple[Block, ...]

    @staticmethod
    def of(datum: GroupDatum, lam: Sequence[int]) -> "AdmissibleCoweight":
        lam = tuple(int(x) for x in lam)
        if not is_dominant(lam):
            raise InvalidInputError(f"coweight {lam} is not dominant")
        if not is_admissible(datum, lam):
            raise InvalidInputError(f"coweight {lam} fails the admissibility equation")
        return AdmissibleCoweight(lam, tuple(blocks_of(lam)))


def enumerate_admissible(datum: GroupDatum, bound: int) -> List[AdmissibleCoweight]:
    if bound < 0:
        raise InvalidInputError("bound must be nonnegative")
    out = []
    vals = range(-bound, bound + 1)
    for tup in combinations_with_replacement(vals, datum.n):
        lam = tuple(sorted(tup, reverse=True))
        if is_admissible(datum, lam):
            out.append(AdmissibleCoweight(lam, tuple(blocks_of(lam))))
    seen = set()
    uniq = []
    for a in sorted(out, key=lambda a: a.lam):
        if a.lam not in seen:
            seen.add(a.lam)
            uniq.append(a)
    return uniq


@dataclass(frozen=True)
class SphericalClass:
    datum: GroupDatum
    lam: Tuple[int, ...]
    side: str  # "theta" | "eta"
    label: str
    g0: LaurentMatrix
    loop_rep: LaurentMatrix
    component_group: Tuple[int, ...]
    aut_label: Optional[str] = None


# ---------------------------------------------------------------------------
# building blocks for representatives


def _identity_block(m: int) -> List[List[QI]]:
    return [[QI(1) if a == b else QI(0) for b in range(m)] for a in range(m)]


def _skew_block(m: int) -> List[List[QI]]:
    rows = [[QI(0)] * m for _ in range(m)]
    for b in range(m // 2):
        rows[2 * b][2 * b + 1] = QI(1)
        rows[2 * b + 1][2 * b] = QI(-1)
    return rows


def _reversal_block(m: int) -> List[List[QI]]:
    rows = [[QI(0)] * m for _ in range(m)]
    for a in range(m):
        rows[a][m - 1 - a] = QI(1)
    return rows


def _matmul_q(a, b):
    m = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(m)), QI(0)) for j in range(m)]
            for i in range(m)]


def _assemble(n: int, blocks: Sequence[Block], parts: Sequence[List[List[QI]]]) -> LaurentMatrix:
    rows = [[QI(0)] * n for _ in range(n)]
    for (start, size, _), part in zip(blocks, parts):
        for a in range(size):
            for b in range(size):
                rows[start + a][start + b] = part[a][b]
    return LaurentMatrix.from_scalars(rows)


def _sign_power(eps: int, mu: int) -> QI:
    return QI(1) if eps == 1 or mu % 2 == 0 else QI(-1)


# ---------------------------------------------------------------------------
# classification


def _real_z(z: QI) -> QI:
    if z not in (QI(1), QI(-1)):
        raise InvalidInputError(
            "classification supports central twist z in {1,-1} only")
    return z


def _classify_symalt(datum: GroupDatum, adm: AdmissibleCoweight, side: str) -> List[SphericalClass]:
    """split_gl and quaternionic_gl: at most one class, of per-block
    symmetric/alternating types."""
    z = _real_z(datum.z)
    flip = QI(-1) if datum.family == QUATERNIONIC_GL else QI(1)
    parts = []
    types = []
    for (_, size, mu) in adm.blocks:
        c = flip * _sign_power(datum.epsilon, mu) * z
        if c == ONE:
            parts.append(_identity_block(size))
            types.append(("Sym", size))
        elif c == QI(-1) and size % 2 == 0:
            parts.append(_skew_block(size))
            types.append(("Alt", size))
        else:
            return []
    g0 = _assemble(datum.n, adm.blocks, parts)
    label = "|".join(t for t, _ in types)
    return [_finish_class(datum, adm, side, label, g0, types)]


def _classify_unitary(datum: GroupDatum, adm: AdmissibleCoweight, side: str) -> List[SphericalClass]:
    z = _real_z(datum.z)
    blocks = adm.blocks
    r = len(blocks)
    half = r // 2
    mid = blocks[half] if r % 2 == 1 else None

    # mirror-paired blocks: one class, B_i = I, B_{r-1-i} = eps^{lambda} * z
    pair_parts = {}
    for i in range(half):
        _, size, _ = blocks[i]
        _, size2, mu2 = blocks[r - 1 - i]
        assert size == size2
        pair_parts[i] = _identity_block(size)
        c = _sign_power(datum.epsilon, mu2) * z
        pair_parts[r - 1 - i] = [[c if a == b else QI(0) for b in range(size)]
                                 for a in range(size)]

    out = []
    if mid is None:
        parts = [pair_parts[i] for i in range(r)]
        g0 = _assemble(datum.n, blocks, parts)
        types = [("Pair", blocks[i][1]) for i in range(half)] + [("Mid", 0, 0, 0)]
        out.append(_finish_class(datum, adm, side, "(0,0)", g0,
                                 [("Pair", blocks[i][1]) for i in range(half)],
                                 sig=(0, 0)))
        return out

    m = mid[1]
    scale = QI(1) if z == ONE else QI(0, 1)  # M^2 = z needs eigenvalues sqrt(z)
    rev = _reversal_block(m)
    for p in range(m, -1, -1):
        q = m - p
        sig = [[scale * (QI(1) if a < p else QI(-1)) if a == b else QI(0)
                for b in range(m)] for a in range(m)]
        mid_part = _matmul_q(rev, sig)  # B = R * M_{p,q}
        parts = [pair_parts[i] if i != half else mid_part for i in range(r)]
        g0 = _assemble(datum.n, blocks, parts)
        out.append(_finish_class(datum, adm, side, f"({p},{q})", g0,
                                 [("Pair", blocks[i][1]) for i in range(half)],
                                 sig=(p, q)))
    return out


def _finish_class(datum: GroupDatum, adm: AdmissibleCoweight, side: str,
                  label: str, g0: LaurentMatrix, types, sig=None) -> SphericalClass:
    loop = LaurentMatrix.t_power(list(adm.lam)) * g0 * datum.w1.inverse()
    if side == "theta":
        comp = _component_group_theta(datum, types, sig)
        assert is_anti_fixed_theta(loop, datum), (adm.lam, label)
        assert _theta_equation_holds(datum, adm.lam, g0), (adm.lam, label)
        aut = None
    else:
        comp = _component_group_eta(datum, types, sig)
        assert is_anti_fixed_eta(loop, datum), (adm.lam, label)
        assert _eta_equation_holds(datum, adm.lam, g0), (adm.lam, label)
        aut = _aut_label(datum, types, sig)
    return SphericalClass(datum, adm.lam, side, label, g0, loop, tuple(comp), aut)


def _eps_lambda(datum: GroupDatum, lam: Sequence[int]) -> LaurentMatrix:
    return LaurentMatrix.diag_scalars(
        [_sign_power(datum.epsilon, mu) for mu in lam])


def _theta_equation_holds(datum: GroupDatum, lam, g0: LaurentMatrix) -> bool:
    rhs = (datum.w2 * (datum.w1.inverse() * theta0(g0, datum).inverse() * datum.w1)
           * _eps_lambda(datum, lam)).scale(datum.z)
    return g0 == rhs


def _eta_equation_holds(datum: GroupDatum, lam, g0: LaurentMatrix) -> bool:
    rhs = (datum.w2 * (datum.w1.inverse() * eta0(g0.inverse(), datum) * datum.w1)
           * _eps_lambda(datum, lam)).scale(datum.z)
    return g0 == rhs


# component groups: the theta path counts components of complexified
# centralizers (O(m,C), Sp(m,C), GL_p x GL_q, block GL_m); the eta path uses
# the compact/real forms (O(m), compact Sp, U(p) x U(q), diagonal U(m)).
# Both are products of the per-block component groups.

def _component_group_theta(datum: GroupDatum, types, sig) -> List[int]:
    out = []
    for t in types:
        if t[0] == "Sym":  # centralizer O(m, C), two components
            out.append(2)
        # Alt -> Sp(m, C), connected; Pair -> GL_m(C), connected
    # unitary middle: GL_p(C) x GL_q(C), connected
    return sorted(out)


def _component_group_eta(datum: GroupDatum, types, sig) -> List[int]:
    out = []
    for t in types:
        if t[0] == "Sym":  # centralizer O(m), two components
            out.append(2)
        # Alt -> compact symplectic group, connected; Pair -> U(m), connected
    # unitary middle: U(p) x U(q), connected
    return sorted(out)


def _aut_label(datum: GroupDatum, types, sig) -> str:
    parts = []
    for t in types:
        kind, m = t[0], t[1]
        if kind == "Sym":
            parts.append("R*" if m == 1 else f"GL{m}(R)")
        elif kind == "Alt":
            parts.append(f"GL{m // 2}(H)")
        elif kind == "Pair":
            parts.append("{(z,zbar)}" if m == 1 else f"GL{m}(C)")
    if sig is not None and sum(sig) > 0:
        parts.append(f"U({sig[0]},{sig[1]})")
    return " x ".join(parts) if parts else "GL0"


# ---------------------------------------------------------------------------
# public classifiers


def classify_theta(datum: GroupDatum, lam: Sequence[int] | AdmissibleCoweight) -> List[SphericalClass]:
    adm = lam if isinstance(lam, AdmissibleCoweight) else AdmissibleCoweight.of(datum, lam)
    if datum.twist is not None:
        return _classify_theta_twisted(datum, adm)
    if datum.family in (SPLIT_GL, QUATERNIONIC_GL):
        return _classify_symalt(datum, adm, "theta")
    return _classify_unitary(datum, adm, "theta")


def _classify_theta_twisted(datum: GroupDatum, adm: AdmissibleCoweight) -> List[SphericalClass]:
    """Classify via the transport bijection x -> x * c between the twisted
    anti-fixed set and the base anti-fixed set at the matching z-sector."""
    base = build_datum(datum.family, datum.n, datum.epsilon,
                       base_sector_theta(datum))
    base_classes = classify_theta(base, adm)
    cinv = datum.twist.inverse()
    out = []
    for cls in base_classes:
        loop = cls.loop_rep * cinv
        g0 = cls.g0 * datum.w1.inverse() * cinv * datum.w1
        assert is_anti_fixed_theta(loop, datum), (adm.lam, cls.label)
        out.append(SphericalClass(datum, adm.lam, "theta", cls.label, g0, loop,
                                  cls.component_group, cls.aut_label))
    return out


def classify_eta(datum: GroupDatum, lam: Sequence[int] | AdmissibleCoweight) -> List[SphericalClass]:
    adm = lam if isinstance(lam, AdmissibleCoweight) else AdmissibleCoweight.of(datum, lam)
    if datum.twist is not None:
        return _classify_eta_twisted(datum, adm)
    if datum.family in (SPLIT_GL, QUATERNIONIC_GL):
        return _classify_symalt(datum, adm, "eta")
    return _classify_unitary(datum, adm, "eta")


def _classify_eta_twisted(datum: GroupDatum, adm: AdmissibleCoweight) -> List[SphericalClass]:
    """Classify via the transport bijection x -> x * c between the twisted
    anti-fixed set and the base anti-fixed set at the matching z-sector."""
    base = build_datum(datum.family, datum.n, datum.epsilon, base_sector(datum))
    base_classes = classify_eta(base, adm)
    cinv = datum.twist.inverse()
    out = []
    for cls in base_classes:
        loop = cls.loop_rep * cinv
        g0 = cls.g0 * datum.w1.inverse() * cinv * datum.w1
        assert is_anti_fixed_eta(loop, datum), (adm.lam, cls.label)
        out.append(SphericalClass(datum, adm.lam, "eta", cls.label, g0, loop,
                                  cls.component_group, cls.aut_label))
    return out


def component_group(cls: SphericalClass) -> List[int]:
    return list(cls.component_group)
