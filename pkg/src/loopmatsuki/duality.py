"""Matching of theta-side and eta-side orbit classes.

The two classifications are indexed by the same dominant coweights (or
affine Weyl elements) and carry the same labels; pairing them up is the
duality.  Pairs can be spot-checked by twisting the shared representative
with exact compact elements: theta- and eta-twisting agree on constants
in U(n), and the canonical labels must not move.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Union

from . import group_catalog as gc
from .canonicalize import (
    canonicalize_eta,
    canonicalize_theta,
    iwahori_reduce_eta,
    iwahori_reduce_theta,
)
from .coweight_orbits import SphericalClass, classify_eta, classify_theta, \
    enumerate_admissible
from .errors import InvalidInputError
from .gaussian import QI
from .group_catalog import GroupDatum
from .iwahori_orbits import IwahoriClass, classes_at_tw, enumerate_admissible_tw
from .laurent import LaurentMatrix, SeriesMatrix
from .randgen import (
    FOURTH_ROOTS,
    random_compact,
    random_compact_symmetric,
    random_signed_permutation,
)

OrbitClass = Union[SphericalClass, IwahoriClass]


@dataclass(frozen=True)
class MatchedPair:
    theta_class: OrbitClass
    eta_class: OrbitClass
    common_rep: Optional[LaurentMatrix]
    level: str  # "spherical" | "iwahori"


def _common_rep(datum: GroupDatum, *candidates) -> Optional[LaurentMatrix]:
    for x in candidates:
        if x is None:
            continue
        if gc.is_anti_fixed_theta(x, datum) and gc.is_anti_fixed_eta(x, datum):
            return x
    return None


def match_spherical(datum: GroupDatum, bound: int) -> List[MatchedPair]:
    """One matched pair per (admissible coweight, label), both levels full."""
    pairs = []
    for adm in enumerate_admissible(datum, bound):
        thetas = {c.label: c for c in classify_theta(datum, adm)}
        etas = {c.label: c for c in classify_eta(datum, adm)}
        if sorted(thetas) != sorted(etas):
            raise AssertionError(
                f"label mismatch at lambda={adm.lam}: "
                f"theta {sorted(thetas)} vs eta {sorted(etas)}")
        for label in sorted(thetas):
            th, et = thetas[label], etas[label]
            if tuple(th.component_group) != tuple(et.component_group):
                raise AssertionError(
                    f"component group mismatch at lambda={adm.lam}, "
                    f"label {label}")
            pairs.append(MatchedPair(
                theta_class=th,
                eta_class=et,
                common_rep=_common_rep(datum, et.loop_rep, th.loop_rep),
                level="spherical",
            ))
    return pairs


def match_iwahori(datum: GroupDatum, bound: int) -> List[MatchedPair]:
    """Pairs at every admissible t~w; both sides share the torus problem."""
    pairs = []
    for tw in enumerate_admissible_tw(datum, bound):
        thetas = classes_at_tw(datum, tw, "theta")
        etas = classes_at_tw(datum, tw, "eta")
        by_args: Dict[tuple, IwahoriClass] = {
            tuple(c.g0_args): c for c in etas}
        if len(thetas) != len(etas):
            raise AssertionError(
                f"class count mismatch at t~w=({tw.lam}, {tw.w})")
        for th in thetas:
            et = by_args.get(tuple(th.g0_args))
            if et is None:
                raise AssertionError(
                    f"unmatched torus class {th.g0_args} at "
                    f"t~w=({tw.lam}, {tw.w})")
            pairs.append(MatchedPair(
                theta_class=th,
                eta_class=et,
                common_rep=_common_rep(datum, et.loop_rep, th.loop_rep),
                level="iwahori",
            ))
    return pairs


def _random_torus_compact(n: int, rng: random.Random) -> LaurentMatrix:
    return LaurentMatrix.from_scalars(
        [[rng.choice(FOURTH_ROOTS) if i == j else QI(0) for j in range(n)]
         for i in range(n)])


def _compact_sample(datum: GroupDatum, level: str, index: int,
                    rng: random.Random) -> LaurentMatrix:
    if level == "iwahori":
        return _random_torus_compact(datum.n, rng)
    kind = index % 3
    if kind == 0:
        return random_signed_permutation(datum.n, rng)
    if kind == 1:
        return random_compact(datum.n, rng)
    return random_compact_symmetric(datum, rng)


def _labels_match(pair: MatchedPair, xt: LaurentMatrix,
                  datum: GroupDatum) -> Optional[str]:
    """None if the twisted loop canonicalizes to the pair's labels."""
    if pair.level == "spherical":
        et = canonicalize_eta(xt, datum)
        if et.orbit_class.label != pair.eta_class.label:
            return (f"eta label moved: {et.orbit_class.label} != "
                    f"{pair.eta_class.label}")
        lo = xt.val() or 0
        hi = xt.maxdeg() or 0
        xs = SeriesMatrix.from_laurent(xt, hi - lo + 10)
        th = canonicalize_theta(xs, datum)
        if th.orbit_class.label != pair.theta_class.label:
            return (f"theta label moved: {th.orbit_class.label} != "
                    f"{pair.theta_class.label}")
        return None
    tw = pair.theta_class.tw
    g = tw.loop().inverse() * xt
    et = iwahori_reduce_eta(tw, g, datum)
    if et.orbit_class.g0_args != pair.eta_class.g0_args:
        return "eta torus class moved"
    hi = (g.maxdeg() or 0) - (g.val() or 0)
    th = iwahori_reduce_theta(tw, SeriesMatrix.from_laurent(g, hi + 10), datum)
    if th.orbit_class.g0_args != pair.theta_class.g0_args:
        return "theta torus class moved"
    return None


def verify_intersection(pair: MatchedPair, samples: int, seed: int) -> dict:
    """Twist the common representative by exact compact elements.

    For each sample k in U(n) (torus-valued for Iwahori pairs), checks
    that the theta- and eta-twists of the representative coincide exactly
    and that both canonical labels are unchanged.
    """
    if pair.common_rep is None:
        raise InvalidInputError("pair has no exact common representative")
    datum = pair.theta_class.datum
    x = pair.common_rep
    rng = random.Random(seed)
    failures = []
    for s in range(samples):
        k = _compact_sample(datum, pair.level, s, rng)
        th_img = gc.apply_theta(k, datum)
        et_img = gc.apply_eta(k, datum)
        if th_img != et_img:
            failures.append({"sample": s,
                             "reason": "theta and eta twists differ"})
            continue
        xt = k * x * th_img.inverse()
        reason = _labels_match(pair, xt, datum)
        if reason is not None:
            failures.append({"sample": s, "reason": reason})
    return {"samples": samples, "failures": failures}


def finite_matsuki(datum: GroupDatum) -> dict:
    """The constant-group specialization of both matchers.

    Spherical pairs at lambda = 0 are the orbits of the two involutions
    on the group itself; Iwahori pairs at t~w in W are the classical
    Borel-level orbit matching on the flag variety.
    """
    spherical = [p for p in match_spherical(datum, 0)
                 if not any(p.theta_class.lam)]
    borel = [p for p in match_iwahori(datum, 0)
             if not any(p.theta_class.tw.lam)]
    return {"spherical": spherical, "borel": borel}
