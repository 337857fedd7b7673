import random

import pytest

from loopmatsuki.errors import InvalidInputError, PrecisionError
from loopmatsuki.gaussian import QI
from loopmatsuki.laurent import LaurentMatrix, SeriesMatrix, series_exp
from loopmatsuki.randgen import random_poly_element


def test_identity_and_t_power():
    ident = LaurentMatrix.identity(3)
    tl = LaurentMatrix.t_power([2, 0, -1])
    assert tl * ident == tl
    assert tl.val() == -1 and tl.maxdeg() == 2
    assert tl.inverse() == LaurentMatrix.t_power([-2, 0, 1])


def test_laurent_inverse_random():
    rng = random.Random(1)
    for _ in range(10):
        m = random_poly_element(3, 2, rng)
        assert m * m.inverse() == LaurentMatrix.identity(3)
        assert m.inverse() * m == LaurentMatrix.identity(3)


def test_transpose_and_substitute():
    m = LaurentMatrix.zeros(2)
    m.rows[0][1] = {3: QI(2, 1)}
    mt = m.transpose()
    assert mt.coeff(1, 0, 3) == QI(2, 1)
    s = m.substitute(QI(-1), invert=False, conj=True)
    assert s.coeff(0, 1, 3) == QI(-2, 1)  # (-1)^3 * conj(2+i)
    si = m.substitute(QI(1), invert=True, conj=False)
    assert si.coeff(0, 1, -3) == QI(2, 1)


def test_series_precision_tracking():
    x = SeriesMatrix.from_laurent(LaurentMatrix.t_power([1, 0]), 5)
    y = SeriesMatrix.from_laurent(LaurentMatrix.t_power([-1, 0]), 5)
    p = x * y
    assert p.precision == 4  # the t^-1 factor costs one unit
    with pytest.raises(PrecisionError):
        p.coeff(0, 0, 4)


def test_series_inverse():
    rng = random.Random(3)
    m = SeriesMatrix.from_laurent(random_poly_element(2, 2, rng), 8)
    prod = m * m.inverse()
    ident = SeriesMatrix.identity(2, prod.precision)
    assert prod == ident


def test_series_inverse_rejects_singular():
    m = LaurentMatrix.zeros(2)
    m.rows[0][0] = {1: QI(1)}
    s = SeriesMatrix.from_laurent(m, 3)
    with pytest.raises((InvalidInputError, PrecisionError)):
        s.inverse()


def test_series_exp_of_nilpotent_layer():
    y = LaurentMatrix.zeros(2)
    y.rows[0][1] = {1: QI(1)}
    e = series_exp(SeriesMatrix.from_laurent(y, 6))
    assert e.coeff(0, 1, 1) == QI(1)
    assert e.coeff(0, 0, 0) == QI(1)
    assert e * e.inverse() == SeriesMatrix.identity(2, e.precision)


def test_retruncate_only_downward():
    m = SeriesMatrix.identity(2, 6)
    assert m.retruncate(3).precision == 3
    with pytest.raises(PrecisionError):
        m.retruncate(9)
