import random

import pytest

from loopmatsuki import group_catalog as gc
from loopmatsuki.errors import InvalidInputError, UnsupportedFamilyError
from loopmatsuki.gaussian import QI
from loopmatsuki.laurent import LaurentMatrix
from loopmatsuki.randgen import random_poly_element

ALL_DATA = [gc.build_datum(f, n, e)
            for f in ("split_gl", "quaternionic_gl", "unitary")
            for n in ((2, 4) if f == "quaternionic_gl" else (1, 2, 3))
            for e in (1, -1)]


def test_build_datum_validation():
    with pytest.raises(UnsupportedFamilyError):
        gc.build_datum("symplectic", 2, 1)
    with pytest.raises(UnsupportedFamilyError):
        gc.build_datum("quaternionic_gl", 3, 1)
    with pytest.raises(InvalidInputError):
        gc.build_datum("split_gl", 2, 2)
    with pytest.raises(InvalidInputError):
        gc.build_datum("split_gl", 2, 1, 2)  # z must be a 4th root


def test_verify_datum_invariants():
    for datum in ALL_DATA:
        report = gc.verify_datum(datum, seed=1, samples=8)
        assert all(report.values()), (datum.real_form, datum.epsilon, report)


def test_involutions_are_homomorphisms():
    rng = random.Random(2)
    for datum in ALL_DATA:
        for _ in range(3):
            a = random_poly_element(datum.n, 2, rng)
            b = random_poly_element(datum.n, 2, rng)
            assert gc.apply_theta(a * b, datum) == \
                gc.apply_theta(a, datum) * gc.apply_theta(b, datum)
            assert gc.apply_eta(a * b, datum) == \
                gc.apply_eta(a, datum) * gc.apply_eta(b, datum)


def test_involutions_square_to_identity():
    rng = random.Random(4)
    for datum in ALL_DATA:
        a = random_poly_element(datum.n, 2, rng)
        assert gc.apply_theta(gc.apply_theta(a, datum), datum) == a
        assert gc.apply_eta(gc.apply_eta(a, datum), datum) == a


def test_datum_from_config():
    datum = gc.datum_from_config(
        {"family": "unitary", "n": 2, "epsilon": -1, "z": "-1"})
    assert datum.z == QI(-1) and datum.epsilon == -1
    with pytest.raises(InvalidInputError):
        gc.datum_from_config({"family": "unitary"})


def test_pure_inner_twist():
    uni = gc.build_datum("unitary", 2, 1)
    c = LaurentMatrix.diag_scalars([QI(1), QI(-1)])
    tw = gc.pure_inner_twist(uni, c)
    assert tw.real_form == "U(1,1)"
    assert tw.twist == c
    with pytest.raises(InvalidInputError):
        gc.pure_inner_twist(tw, c)  # already twisted
    with pytest.raises(InvalidInputError):
        gc.pure_inner_twist(uni, LaurentMatrix.from_scalars([[2, 0], [0, 1]]))


def test_twisted_involutions():
    uni = gc.build_datum("unitary", 2, 1)
    c = LaurentMatrix.diag_scalars([QI(1), QI(-1)])
    tw = gc.pure_inner_twist(uni, c)
    rng = random.Random(6)
    a = random_poly_element(2, 2, rng)
    assert gc.apply_theta(a, tw) == c * gc.apply_theta(a, uni) * c.inverse()
    assert gc.apply_eta(a, tw) == c * gc.apply_eta(a, uni) * c.inverse()
    # transport carries anti-fixed loops between the sectors
    x = LaurentMatrix.diag_scalars([QI(1), QI(-1)])  # anti-fixed for tw
    assert gc.is_anti_fixed_eta(x, tw)
    assert gc.is_anti_fixed_eta(gc.transport_to_base(x, tw),
                                gc.build_datum("unitary", 2, 1,
                                               gc.base_sector(tw)))
