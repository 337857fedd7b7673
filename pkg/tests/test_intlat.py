import random
from fractions import Fraction

from loopmatsuki.intlat import (
    identity_int, in_lattice, integer_left_kernel_basis, invert_unimodular,
    lattice_basis, mat_mul, quotient_invariants, rational_kernel_basis,
    snf_diagonal, snf_int, solve_rational,
)


def _random_int_matrix(rng, rows, cols, bound=5):
    return [[rng.randint(-bound, bound) for _ in range(cols)]
            for _ in range(rows)]


def test_snf_random():
    rng = random.Random(7)
    for _ in range(25):
        m = _random_int_matrix(rng, rng.randint(1, 4), rng.randint(1, 4))
        u, d, v = snf_int(m)
        assert mat_mul(mat_mul(u, m), v) == d
        diag = snf_diagonal(d)
        for a, b in zip(diag, diag[1:]):
            assert b % a == 0 if a else b == 0
        assert mat_mul(u, invert_unimodular(u)) == identity_int(len(m))


def test_solve_rational():
    m = [[2, 0], [0, 3]]
    assert solve_rational(m, [1, 1]) == [Fraction(1, 2), Fraction(1, 3)]
    assert solve_rational([[1, 1], [1, 1]], [0, 1]) is None


def test_kernels():
    m = [[1, -1, 0], [0, 0, 2]]
    rk = rational_kernel_basis(m)
    assert len(rk) == 1
    lk = integer_left_kernel_basis([[2, 4], [1, 2]])
    assert len(lk) == 1
    k = lk[0]
    assert k[0] * 2 + k[1] * 1 == 0 and k[0] * 4 + k[1] * 2 == 0


def test_lattice_membership():
    basis = lattice_basis([[Fraction(1, 2), Fraction(0)],
                           [Fraction(0), Fraction(1)]])
    assert in_lattice([Fraction(3, 2), Fraction(2)], basis)
    assert not in_lattice([Fraction(1, 3), Fraction(0)], basis)


def test_quotient_invariants():
    # Z^2 / <(2,0),(0,4)> = Z/2 x Z/4
    big = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
    small = [[Fraction(2), Fraction(0)], [Fraction(0), Fraction(4)]]
    assert sorted(quotient_invariants(big, small)) == [2, 4]
