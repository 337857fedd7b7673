"""Acceptance gate: every published-table criterion at full size.

All checks are exact (Fraction/Gaussian-rational arithmetic), so the
tolerance everywhere is zero.  One test per criterion; `pytest -v`
emits one pass/fail line each.
"""

from loopmatsuki import selftest as st


def _report(num: int, name: str) -> None:
    print(f"criterion {num} ({name}): PASS")


def test_criterion_01_gl2r_split_tables():
    st.check_gl2r_split(bound=3)
    _report(1, "GL2(R) eps=+1 spherical/Iwahori tables, bundles, lines")


def test_criterion_02_gl2r_twisted_tables():
    st.check_gl2r_twisted(bound=3)
    _report(2, "GL2(R) eps=-1 parity emptiness, stabilizers, bundles")


def test_criterion_03_gl1h_tables():
    st.check_gl1h(bound=2)
    _report(3, "GL1(H) tables and bundle automorphism labels, both eps")


def test_criterion_04_u2_and_u11_tables():
    st.check_u2(bound=2)
    _report(4, "U(2) classes and the identical U(1,1) inner-twist tables")


def test_criterion_05_tau_coset_remark():
    st.check_tau_remark()
    _report(5, "tau_theta images of the four GL2((t^2))-coset representatives")


def test_criterion_06_duality_suite():
    st.check_duality(bound=2, samples=20, seed=2026)
    _report(6, "matched pairs over the catalog verify with 0 failures")


def test_criterion_07_canonicalizer_invariance():
    st.check_invariance(theta_twists=100, eta_twists=50, precision=8, seed=11)
    _report(7, "150 random twists keep (lambda, label); certificates replay")


def test_criterion_08_coweight_agreement():
    st.check_coweight_agreement(count=50, seed=5)
    _report(8, "theta and eta agree exactly on 50 random coweight loops")


def test_criterion_09_kottwitz_suite():
    st.check_kottwitz(bound=2, hsamples=20, seed=3)
    _report(9, "Kottwitz enumeration matches classification; twists collapse")


def test_criterion_10_finite_matsuki():
    st.check_finite_matsuki()
    _report(10, "finite Matsuki counts, invariant under pure inner twist")
