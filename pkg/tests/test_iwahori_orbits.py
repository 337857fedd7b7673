from fractions import Fraction

from loopmatsuki import group_catalog as gc
from loopmatsuki.iwahori_orbits import (
    AffineWeylElement, build_torus_problem, classes_at_tw,
    enumerate_admissible_tw, enumerate_iwahori, same_torus_class,
    solve_torus_classes, spherical_projection,
)


def test_admissible_tw_condition():
    d = gc.build_datum("split_gl", 2, 1)
    tws = enumerate_admissible_tw(d, 1)
    for tw in tws:
        # theta0(lam) = -w^-1 lam w as affine Weyl elements
        m = tw.loop() * gc.theta0(tw.loop(), d)
        assert m.is_constant()


def test_solve_torus_classes_invariants():
    for family, n in (("split_gl", 2), ("unitary", 2)):
        for eps in (1, -1):
            d = gc.build_datum(family, n, eps)
            for tw in enumerate_admissible_tw(d, 1):
                for side in ("theta", "eta"):
                    problem = build_torus_problem(d, tw, side)
                    nonempty, classes = solve_torus_classes(problem)
                    if not nonempty:
                        assert classes == []
                        continue
                    # canonical representatives are pairwise inequivalent
                    for i, (a, _) in enumerate(classes):
                        for b, _ in classes[i + 1:]:
                            assert not same_torus_class(problem, a, b)


def test_classes_carry_anti_fixed_reps():
    for family in ("split_gl", "unitary"):
        for eps in (1, -1):
            d = gc.build_datum(family, 2, eps)
            for cls in enumerate_iwahori(d, 1, "eta"):
                if cls.loop_rep is not None:
                    assert gc.is_anti_fixed_eta(cls.loop_rep, d)
            for cls in enumerate_iwahori(d, 1, "theta"):
                if cls.loop_rep is not None:
                    assert gc.is_anti_fixed_theta(cls.loop_rep, d)


def test_gl2r_iwahori_goldens():
    d = gc.build_datum("split_gl", 2, 1)
    # t^(1,2) (dominant-sorted there is a single class, group Z/2 x Z/2)
    classes = classes_at_tw(d, AffineWeylElement.of((1, 2), (0, 1)), "eta")
    assert len(classes) == 1
    assert tuple(classes[0].component_group) == (2, 2)
    # t^(mu,mu).s is one class with trivial stabilizer
    classes = classes_at_tw(d, AffineWeylElement.of((1, 1), (1, 0)), "eta")
    assert len(classes) == 1
    assert tuple(classes[0].component_group) == ()


def test_spherical_projection():
    d = gc.build_datum("split_gl", 2, 1)
    for cls in enumerate_iwahori(d, 1, "eta"):
        parent = spherical_projection(cls)
        assert tuple(parent.lam) == tuple(
            sorted(cls.tw.lam, reverse=True))


def test_twisted_iwahori_transport():
    uni = gc.build_datum("unitary", 2, 1)
    tw_datum = gc.pure_inner_twist(
        uni, gc.matrix_from_config([["1", "0"], ["0", "-1"]], 2))
    for tw in enumerate_admissible_tw(uni, 0):
        for side in ("theta", "eta"):
            base = classes_at_tw(uni, tw, side)
            twisted = classes_at_tw(tw_datum, tw, side)
            assert [c.g0_args for c in base] == [c.g0_args for c in twisted]
            for c in twisted:
                if c.loop_rep is None:
                    continue
                if side == "eta":
                    assert gc.is_anti_fixed_eta(c.loop_rep, tw_datum)
                else:
                    assert gc.is_anti_fixed_theta(c.loop_rep, tw_datum)


def test_g0_args_are_fractions():
    d = gc.build_datum("split_gl", 2, -1)
    for cls in enumerate_iwahori(d, 1, "eta"):
        assert all(isinstance(a, Fraction) for a in cls.g0_args)
