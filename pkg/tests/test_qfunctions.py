"""Pochhammer, theta, triple and quintuple product builders."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qrr import catalog, identities
from qrr.errors import InvalidTheta, NonTerminating
from qrr.qfunctions import (PochSpec, ThetaSpec, euler_f, jtp_dissect, jtp_dissect_nodes,
                            multi_pochhammer, phi_builder, pochhammer, psi_builder, quintuple,
                            theta_product, theta_sum)
from qrr.series import LaurentPoly, QSeries, SignedMonomial, qs_mul, qs_substitute_a
from qrr.terms import lcm

M = SignedMonomial
q = M.q(1)
a = M.a(1)


def ints(s, upto=None):
    return s.integer_coefficients()[: None if upto is None else upto + 1]


def pentagonal(order):
    # oracle: (-1)^j at generalized pentagonal numbers j(3j-1)/2
    out = [0] * (order + 1)
    for j in range(-order, order + 1):
        e = j * (3 * j - 1) // 2
        if 0 <= e <= order:
            out[e] += (-1) ** (j % 2)
    return out


# -- Pochhammer -----------------------------------------------------------


def test_poch_empty():
    assert pochhammer(PochSpec(-a, q, 0), 10) == QSeries.one(10)


def test_poch_q_q_3():
    assert ints(pochhammer(PochSpec(q, q, 3), 8)) == [1, -1, -1, 0, 1, 1, -1, 0, 0]


def test_poch_symbolic():
    got = pochhammer(PochSpec(-a, q, 2), 5)
    assert got.coefficient(0) == LaurentPoly({0: 1, 1: 1})
    assert got.coefficient(1) == LaurentPoly({1: 1, 2: 1})
    assert all(not got.coefficient(k) for k in range(2, 6))


def test_multi_poch():
    assert multi_pochhammer([], 5) == QSeries.one(5)
    assert ints(multi_pochhammer([PochSpec(q, q, 1), PochSpec(q, q, 1)], 4)) == [1, -2, 1, 0, 0]
    got = multi_pochhammer([PochSpec(-(a * q), q * q, 1), PochSpec(-(q / a), q * q, 1)], 3)
    assert got.coefficient(1) == LaurentPoly({1: 1, -1: 1}) and got.coefficient(2) == 1


def test_poch_rejects_bad_modulus():
    with pytest.raises(NonTerminating):
        PochSpec(q, M.q(-1))
    with pytest.raises(ValueError):
        PochSpec(q, a)


@settings(max_examples=150)
@given(st.integers(0, 8), st.fractions(0, 3, max_denominator=2), st.sampled_from([1, -1]),
       st.integers(-1, 1), st.sampled_from([Fraction(1), Fraction(1, 2), Fraction(2)]))
def test_poch_finite_infinite(n, p, sign, e, step):
    base = M(sign, e, p)
    Q = M.q(step)
    order = 30
    whole = pochhammer(PochSpec(base, Q), order)
    head = pochhammer(PochSpec(base, Q, n), order, whole.scale)
    tail = pochhammer(PochSpec(base * Q ** n, Q), order, whole.scale)
    assert qs_mul(head, tail).agree(whole).passed


# -- theta ----------------------------------------------------------------


def test_euler_pentagonal():
    assert euler_f(1, 15).format(show_order=False) == "1 - q - q^2 + q^5 + q^7 - q^12 - q^15"
    assert ints(euler_f(1, 200)) == pentagonal(200)


def test_theta_sum_examples():
    assert theta_sum(ThetaSpec(-q, -(q * q)), 15).format(show_order=False) == \
        "1 - q - q^2 + q^5 + q^7 - q^12 - q^15"
    assert theta_sum(ThetaSpec(q, q ** 3), 10).format(show_order=False) == "1 + q + q^3 + q^6 + q^10"
    r1 = theta_sum(ThetaSpec(a * q ** 3, q ** 3 / a), 12)
    assert r1.coefficient(0) == 1
    assert r1.coefficient(3) == LaurentPoly({-1: 1, 1: 1})
    assert r1.coefficient(12) == LaurentPoly({-2: 1, 2: 1})


def test_theta_product_examples():
    spec = ThetaSpec(-q, -(q * q))
    assert theta_sum(spec, 100).agree(theta_product(spec, 100)).passed
    assert ints(theta_product(ThetaSpec(q, q), 9)) == [1, 2, 0, 0, 2, 0, 0, 0, 0, 2]
    with pytest.raises(InvalidTheta):
        ThetaSpec(a, q)
    with pytest.raises(InvalidTheta):
        ThetaSpec(q, M.q(-2))


def test_psi_phi():
    assert ints(phi_builder(-q, 9)) == [1, -2, 0, 0, 2, 0, 0, 0, 0, -2]
    assert ints(psi_builder(-q, 10)) == [1, -1, 0, -1, 0, 0, 1, 0, 0, 0, 1]
    assert ints(psi_builder(q, 10)) == [1, 1, 0, 1, 0, 0, 1, 0, 0, 0, 1]
    # product form vs the bilateral sums f(x, x^3) and f(x, x)
    for x in (q, -q, M.q(Fraction(1, 2)), -M.q(3)):
        assert psi_builder(x, 60).agree(theta_sum(ThetaSpec(x, x ** 3), 60)).passed
        assert phi_builder(x, 60).agree(theta_sum(ThetaSpec(x, x), 60)).passed
    assert euler_f(Fraction(3, 2), 30).scale == 2


def _theta_specs_in_catalog():
    """Every f(A, B) the catalog builders construct, by recording the builder calls."""
    seen = set()
    real_sum, real_prod = identities.theta_node, identities.theta_prod_node

    def rec_sum(A, B):
        seen.add((A, B))
        return real_sum(A, B)

    def rec_prod(A, B):
        seen.add((A, B))
        return real_prod(A, B)

    identities.theta_node, identities.theta_prod_node = rec_sum, rec_prod
    try:
        for tag in catalog.TAGS:
            catalog.build_nodes(tag)
        for row in catalog.TABLE_ROWS + catalog.POST_TABLE_ROWS:
            catalog.build_nodes(row.tag, row.params())
        for tag in ("TGEN1", "TGEN2", "TGEN3", "TGEN4", "TGEN5"):
            for m in (1, 2, 3):
                catalog.build_nodes(tag, catalog.IdentityParams(m=m))
        for name in ("1a", "1b", "2a", "2b", "3a", "3b", "4a", "4b", "5a", "5b"):
            identities.corollary(name, identities.Ctx(q, a))
    finally:
        identities.theta_node, identities.theta_prod_node = real_sum, real_prod
    return sorted(seen, key=str)


def test_every_catalog_theta_spec_sum_equals_product():
    specs = _theta_specs_in_catalog()
    assert len(specs) >= 10
    for A, B in specs:
        spec = ThetaSpec(A, B)
        s = theta_sum(spec, 100)
        p = theta_product(spec, 100, s.scale)
        rep = s.agree(p)
        assert rep.passed and rep.q_order >= 100, (A, B, rep.describe())


# -- dissection and quintuple ---------------------------------------------------


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_jtp_dissection(m):
    lhs, rhs = jtp_dissect(m, 80)
    rep = lhs.agree(rhs)
    assert rep.passed and rep.q_order >= 80


def test_jtp_m1_is_the_product():
    lhs, rhs = jtp_dissect_nodes(1)
    assert lhs.at(30, 1) == rhs.at(30, 1)


def test_jtp_specialised_z():
    lhs, rhs = jtp_dissect(3, 40)
    L = qs_substitute_a(lhs, M(1))
    R = qs_substitute_a(rhs, M(1))
    assert L.agree(R).passed


def test_quintuple_three_way():
    s, t, p = quintuple(80)
    assert s.agree(t).passed and s.agree(p).passed and t.agree(p).passed
    assert min(x.q_order for x in (s, t, p)) >= 80


def test_quintuple_low_terms():
    s, _, p = quintuple(0)
    assert p.coefficient(0) == LaurentPoly({0: 1, -1: -1})
    assert s.coefficient(0) == LaurentPoly({0: 1, -1: -1})
