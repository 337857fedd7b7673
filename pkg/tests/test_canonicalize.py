"""Canonical forms: invariance under twists, certificate replay, reducers."""

import random

import pytest

import loopmatsuki.group_catalog as gc
from loopmatsuki.canonicalize import (
    canonicalize_eta,
    canonicalize_theta,
    iwahori_reduce_eta,
    iwahori_reduce_theta,
    tau_eta,
    tau_theta,
)
from loopmatsuki.coweight_orbits import classify_eta, classify_theta, \
    enumerate_admissible
from loopmatsuki.errors import NotAntiFixedError, PrecisionError
from loopmatsuki.iwahori_orbits import AffineWeylElement, classes_at_tw
from loopmatsuki.laurent import LaurentMatrix, SeriesMatrix
from loopmatsuki.randgen import random_arc_element, random_poly_element


def _data():
    return [gc.build_datum("split_gl", 2, 1),
            gc.build_datum("split_gl", 2, -1),
            gc.build_datum("quaternionic_gl", 2, -1),
            gc.build_datum("unitary", 2, 1)]


def test_theta_invariance_and_replay():
    rng = random.Random(13)
    precision = 8
    reps = [(d, c) for d in _data()
            for adm in enumerate_admissible(d, 1)
            for c in classify_theta(d, adm)]
    for d, cls in reps[:8]:
        h = random_arc_element(d.n, precision, rng)
        # the sample is an exact polynomial, so recompute it at extra
        # working precision before twisting
        hp = LaurentMatrix.zeros(d.n)
        for r in range(d.n):
            for c in range(d.n):
                hp.rows[r][c] = dict(h.entry(r, c))
        hs = SeriesMatrix.from_laurent(hp, precision + 6)
        x = hs * SeriesMatrix.from_laurent(cls.loop_rep, precision + 6) \
            * gc.apply_theta(hs, d).inverse()
        form = canonicalize_theta(x, d)
        assert form.lam == cls.lam
        assert form.orbit_class.label == cls.label
        lhs = form.certificate * x * gc.apply_theta(
            form.certificate, d).inverse()
        r = form.residual_precision
        assert lhs.retruncate(r) == SeriesMatrix.from_laurent(
            form.loop_rep, r)


def test_eta_invariance_and_replay():
    rng = random.Random(14)
    reps = [(d, c) for d in _data()
            for adm in enumerate_admissible(d, 1)
            for c in classify_eta(d, adm)]
    for d, cls in reps[:8]:
        h = random_poly_element(d.n, 3, rng)
        x = h * cls.loop_rep * gc.apply_eta(h, d).inverse()
        form = canonicalize_eta(x, d)
        assert form.lam == cls.lam
        assert form.orbit_class.label == cls.label
        assert form.residual_precision is None
        lhs = form.certificate * x * gc.apply_eta(
            form.certificate, d).inverse()
        assert lhs == form.loop_rep


def test_twisted_canonicalization():
    base = gc.build_datum("unitary", 2, 1)
    d = gc.pure_inner_twist(base, LaurentMatrix.from_scalars([[1, 0], [0, -1]]))
    for adm in enumerate_admissible(d, 1):
        for cls in classify_eta(d, adm):
            form = canonicalize_eta(cls.loop_rep, d)
            assert form.lam == cls.lam
            assert form.orbit_class.label == cls.label
        for cls in classify_theta(d, adm):
            x = SeriesMatrix.from_laurent(cls.loop_rep, 12)
            form = canonicalize_theta(x, d)
            assert form.lam == cls.lam
            assert form.orbit_class.label == cls.label


def test_tau_maps_land_in_sector_one():
    d = gc.build_datum("split_gl", 2, -1)
    d1 = gc.build_datum("split_gl", 2, -1, 1)
    for adm in enumerate_admissible(d, 1):
        for cls in classify_eta(d, adm):
            tau = tau_eta(cls.loop_rep, d)
            assert gc.is_anti_fixed_theta(tau, d1)
        for cls in classify_theta(d, adm):
            tau = tau_theta(cls.loop_rep, d)
            assert gc.is_anti_fixed_eta(tau, d1)


def test_iwahori_reducers():
    d = gc.build_datum("split_gl", 2, 1)
    tw = AffineWeylElement.of((2, 1), (0, 1))
    for cls in classes_at_tw(d, tw, "eta"):
        g = tw.loop().inverse() * cls.loop_rep
        form = iwahori_reduce_eta(tw, g, d)
        assert tuple(form.orbit_class.g0_args) == tuple(cls.g0_args)
        assert gc.is_anti_fixed_eta(form.loop_rep, d)
    for cls in classes_at_tw(d, tw, "theta"):
        g = SeriesMatrix.from_laurent(tw.loop().inverse() * cls.loop_rep, 8)
        form = iwahori_reduce_theta(tw, g, d)
        assert tuple(form.orbit_class.g0_args) == tuple(cls.g0_args)


def test_precision_floor_raises():
    d = gc.build_datum("split_gl", 2, 1)
    x = SeriesMatrix.from_laurent(LaurentMatrix.t_power([2, 1]), 4)
    with pytest.raises(PrecisionError):
        canonicalize_theta(x, d)


def test_not_anti_fixed_raises():
    d = gc.build_datum("split_gl", 2, -1)
    with pytest.raises(NotAntiFixedError):
        canonicalize_eta(LaurentMatrix.t_power([1, 0]), d)
