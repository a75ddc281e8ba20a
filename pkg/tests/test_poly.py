from fractions import Fraction
from itertools import product
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from exset.poly import MPoly, homogeneous_layer, length_upper, lex_monomials
from exset.scalars import GaussRat, PiExpr

from conftest import g

z1z2 = MPoly.monomial((1, 1))


def test_distributivity_example():
    p = z1z2 * MPoly(2, {(1, 0): 2, (0, 0): -2})
    assert p == MPoly(2, {(2, 1): 2, (1, 1): -2})


def test_negation_cancels():
    p = MPoly(2, {(2, 1): 2, (1, 1): g(-2, 1)})
    assert (p + p.scale(-1)).is_zero()


def test_pi_coefficients():
    p = MPoly.variable(1, 0).scale(PiExpr.pi_power(1))
    assert p.coeff((1,)) == PiExpr.pi_power(1)
    assert p.eval([g(2)]) == PiExpr.pi_power(1, 2)


def test_eval_examples():
    assert MPoly(1, {(1,): 2, (0,): -2}).eval([g(1)]) == PiExpr()
    assert z1z2.eval([g(0), g(7, 3)]) == PiExpr()


def test_layer_examples():
    p = MPoly(2, {(2, 1): 2, (1, 1): -2})
    assert homogeneous_layer(p, 3) == MPoly(2, {(2, 1): 2})
    assert homogeneous_layer(MPoly.constant(2, 5), 1).is_zero()
    total = MPoly.zero(2)
    for d in range(p.degree() + 1):
        total = total + homogeneous_layer(p, d)
    assert total == p


def brute_lex(d, m):
    comps = [e for e in product(range(1, d + 1), repeat=m) if sum(e) == d]
    return sorted(comps, reverse=True)


def test_lex_examples():
    assert lex_monomials(4, 2) == [(3, 1), (2, 2), (1, 3)]
    assert lex_monomials(3, 3) == [(1, 1, 1)]
    assert len(lex_monomials(5, 3)) == 6


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_lex_against_enumeration(m):
    for d in range(m, 13):
        got = lex_monomials(d, m)
        assert got == brute_lex(d, m)
        assert len(got) == comb(d - 1, m - 1)


def test_length_examples():
    assert length_upper(MPoly(1, {(1,): 2, (0,): -2})) == 4
    assert length_upper(MPoly.zero(2)) == 0
    L = length_upper(MPoly.variable(1, 0).scale(PiExpr.pi_power(1)), 20)
    assert Fraction(314159, 100000) <= L <= Fraction(31416, 10000) + Fraction(1, 2**18)


def test_term_order_is_canonical():
    p = MPoly(2, {(0, 2): 1, (1, 1): 1, (2, 0): 1, (0, 0): 1})
    assert [e for e, _ in p.items()] == [(0, 0), (2, 0), (1, 1), (0, 2)]
    assert MPoly.from_json(2, p.to_json()) == p


rats = st.fractions(min_value=-20, max_value=20, max_denominator=9)
gauss = st.builds(GaussRat, rats, rats)
exps = st.tuples(st.integers(0, 3), st.integers(0, 3))
polys = st.dictionaries(exps, gauss, max_size=5).map(lambda t: MPoly(2, t))
points = st.tuples(gauss, gauss)


@settings(max_examples=60)
@given(polys, polys, polys, points)
def test_ring_and_eval_homomorphism(p, q, r, z):
    assert p * (q + r) == p * q + p * r
    assert (p * q) * r == p * (q * r)
    assert (p * q).eval(z) == p.eval(z) * q.eval(z)
    assert (p + q).eval(z) == p.eval(z) + q.eval(z)


@settings(max_examples=40)
@given(polys, st.integers(0, 6))
def test_truncate_is_sum_of_layers(p, d):
    acc = MPoly.zero(2)
    for k in range(d + 1):
        acc = acc + p.homogeneous_layer(k)
    assert acc == p.truncate(d)
