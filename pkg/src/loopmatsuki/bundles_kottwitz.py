"""Bundles on the real twistor line and Kottwitz-set points.

An eta-anti-fixed loop determines a bundle on P^1 with a real structure:
the canonical form t^lam * g0 * w1^{-1} reads off the splitting type
(the dominant coweight) and the constant gluing datum c.  Iwahori-level
inputs additionally carry a line at 0 and its image at infinity.  The
same canonical forms enumerate the (extended) Kottwitz set: pairs
(lam, g) with g * eta0(g) = lam(eps) * z and Ad_{g^-1}(lam(t)) equal to
theta0(lam(t^-1)).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from . import group_catalog as gc
from .canonicalize import EtaLoop, canonicalize_eta, iwahori_reduce_eta
from .coweight_orbits import classify_eta, enumerate_admissible
from .errors import InvalidInputError
from .gaussian import QI
from .group_catalog import GroupDatum
from .iwahori_orbits import AffineWeylElement
from .laurent import LaurentMatrix

Line = Tuple[QI, ...]

# Aut(E, c, l0, linf)_red for the parabolic catalog entries; keyed by
# (family, epsilon, whether the position permutes the coordinate lines)
_PARABOLIC_AUT = {
    ("split_gl", 1, False): "R* x R*",
    ("split_gl", 1, True): "C*",
}


@dataclass(frozen=True)
class RealBundleDatum:
    epsilon: int
    z: QI
    splitting: Tuple[int, ...]
    gluing: LaurentMatrix  # constant matrix c with t^lam * c anti-fixed
    aut_label: str
    lines: Optional[Tuple[Line, Line]] = None  # (l0, linf = c(l0))


@dataclass(frozen=True)
class KottwitzPoint:
    lam: Tuple[int, ...]
    g: LaurentMatrix
    z: QI


def _normalize_line(col: List[QI]) -> Line:
    lead = next((v for v in col if not v.is_zero()), None)
    if lead is None:
        raise InvalidInputError("gluing datum annihilates the marked line")
    inv = lead.inv()
    return tuple(v * inv for v in col)


def loop_to_bundle(x, datum: GroupDatum) -> RealBundleDatum:
    """The splitting type and gluing datum of an anti-fixed loop."""
    if isinstance(x, EtaLoop):
        x = x.gamma
    form = canonicalize_eta(x, datum)
    c = form.g0 * datum.w1.inverse()
    rep = LaurentMatrix.t_power(list(form.lam)) * c
    assert gc.is_anti_fixed_eta(rep, datum)
    return RealBundleDatum(
        epsilon=datum.epsilon,
        z=datum.z,
        splitting=form.lam,
        gluing=c,
        aut_label=form.orbit_class.aut_label or "unlabeled",
    )


def loop_to_parabolic_bundle(x: LaurentMatrix, tw: AffineWeylElement,
                             datum: GroupDatum) -> RealBundleDatum:
    """Bundle with marked lines from an Iwahori-positioned loop t~w * g."""
    if isinstance(x, EtaLoop):
        x = x.gamma
    g = tw.loop().inverse() * x
    form = iwahori_reduce_eta(tw, g, datum)
    c = tw.lift * form.g0  # loop_rep = t^lam * (w-part * torus)
    n = datum.n
    l0 = _normalize_line([QI(1) if i == 0 else QI(0) for i in range(n)])
    linf = _normalize_line([c.coeff(i, 0, 0) for i in range(n)])
    permutes = linf != l0
    aut = _PARABOLIC_AUT.get((datum.family, datum.epsilon, permutes),
                             "unlabeled")
    return RealBundleDatum(
        epsilon=datum.epsilon,
        z=datum.z,
        splitting=tuple(sorted(tw.lam, reverse=True)),
        gluing=c,
        aut_label=aut,
        lines=(l0, linf),
    )


def enumerate_bundles(datum: GroupDatum, bound: int) -> List[RealBundleDatum]:
    """One bundle datum per eta-class with splitting bounded by bound."""
    out = []
    for adm in enumerate_admissible(datum, bound):
        for cls in classify_eta(datum, adm):
            out.append(loop_to_bundle(cls.loop_rep, datum))
    return out


def _lam_of_eps(lam, epsilon: int) -> LaurentMatrix:
    return LaurentMatrix.from_scalars(
        [[QI(epsilon) ** lam[i] if i == j else QI(0)
          for j in range(len(lam))] for i in range(len(lam))])


def kottwitz_validate(p: KottwitzPoint, datum: GroupDatum) -> bool:
    """Exact check of the defining identities of a Kottwitz pair."""
    n = datum.n
    if len(p.lam) != n or p.g.n != n or not p.g.is_constant():
        return False
    base = datum.untwisted()
    want = _lam_of_eps(p.lam, datum.epsilon).scale(p.z)
    if p.g * gc.eta0(p.g, base) != want:
        return False
    lam_t = LaurentMatrix.t_power(list(p.lam))
    lam_tinv = LaurentMatrix.t_power([-v for v in p.lam])
    return p.g.inverse() * lam_t * p.g == gc.theta0(lam_tinv, base)


def kottwitz_to_loop(p: KottwitzPoint, datum: GroupDatum) -> LaurentMatrix:
    """gamma(t) = lam(t) * g; exactly anti-fixed when the point validates."""
    if not kottwitz_validate(p, datum):
        raise InvalidInputError("invalid Kottwitz point")
    loop = LaurentMatrix.t_power(list(p.lam)) * p.g
    assert gc.is_anti_fixed_eta(loop, datum)
    return loop


def enumerate_kottwitz(datum: GroupDatum, bound: int,
                       z: QI | int | None = None) -> List[KottwitzPoint]:
    """One Kottwitz point per eta-class up to the coweight bound."""
    if z is not None and QI.of(z) != datum.z:
        datum = gc.build_datum(datum.family, datum.n, datum.epsilon, z)
    out = []
    for adm in enumerate_admissible(datum, bound):
        for cls in classify_eta(datum, adm):
            p = KottwitzPoint(lam=tuple(adm.lam),
                              g=cls.g0 * datum.w1.inverse(), z=datum.z)
            if not kottwitz_validate(p, datum):
                raise AssertionError(
                    f"classifier representative at {adm.lam} fails the "
                    f"Kottwitz identities")
            out.append(p)
    return out


def twist_kottwitz(p: KottwitzPoint, h: LaurentMatrix,
                   datum: GroupDatum) -> KottwitzPoint:
    """The equivalent point (h lam h^-1, h g eta0(h)^-1).

    h must be a constant matrix normalizing lam(t); in the diagonal
    torus picture that means permuting equal entries of lam.
    """
    base = datum.untwisted()
    lam_t = LaurentMatrix.t_power(list(p.lam))
    conj = h * lam_t * h.inverse()
    new_lam = []
    for i in range(datum.n):
        e = conj.entry(i, i)
        if any(j != i and conj.entry(i, j) for j in range(datum.n)) or len(e) != 1:
            raise InvalidInputError("h does not normalize the cocharacter")
        ((k, v),) = e.items()
        if v != QI(1):
            raise InvalidInputError("h does not normalize the cocharacter")
        new_lam.append(k)
    return KottwitzPoint(lam=tuple(new_lam),
                         g=h * p.g * gc.eta0(h, base).inverse(), z=p.z)
