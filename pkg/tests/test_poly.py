import pytest
from hypothesis import given, strategies as st

from floerkit.poly import (ONE, U, V, ZERO, Bigrading, Flavor, Poly, format_poly,
                           monomial_bidegree, monomial_for_shift, parse_poly, poly_add,
                           poly_mul, specialize, u_derivative, v_derivative, v_bits)

from conftest import monomials, polys


def dense_mul(p, q):
    """Schoolbook product on a coefficient grid, independent of Poly.__mul__."""
    grid = [[0] * 13 for _ in range(13)]
    for a1, b1 in p.terms:
        for a2, b2 in q.terms:
            grid[a1 + a2][b1 + b2] ^= 1
    return {(a, b) for a in range(13) for b in range(13) if grid[a][b]}


def P(*terms):
    return Poly(terms)


def test_add_examples():
    assert P((1, 0)) + P((1, 0)) == ZERO
    assert P((0, 0)) + P((1, 1)) == P((0, 0), (1, 1))
    assert P((2, 0), (0, 1)) + P((0, 1), (1, 0)) == P((2, 0), (1, 0))


def test_mul_examples():
    assert U * V == P((1, 1))
    assert (ONE + U) * (ONE + U) == P((0, 0), (2, 0))
    assert ZERO * P((0, 3)) == ZERO


def test_specialize_examples():
    assert specialize(P((1, 0), (0, 2)), Flavor.CIRC) == P((0, 2))
    assert specialize(P((0, 0), (1, 1)), "hat") == ONE
    p = P((3, 1), (0, 2))
    assert specialize(p, Flavor.MINUS) == p


def test_bidegree_examples():
    assert monomial_bidegree((1, 0)) == Bigrading(-2, 0)
    assert monomial_bidegree((0, 1)) == Bigrading(0, -2)
    assert monomial_bidegree((2, 3)) == Bigrading(-4, -6)


def test_monomial_for_shift():
    assert monomial_for_shift(Bigrading(-4, -2)) == (2, 1)
    assert monomial_for_shift(Bigrading(1, 0)) is None
    assert monomial_for_shift(Bigrading(2, 0)) is None


def test_negative_and_overflow():
    with pytest.raises(ValueError):
        Poly([(-1, 0)])
    with pytest.raises(OverflowError):
        Poly([(1 << 21, 0)])


@given(polys)
def test_self_inverse(p):
    assert p + p == ZERO


@given(polys, polys)
def test_mul_matches_dense_oracle(p, q):
    assert set(poly_mul(p, q).terms) == dense_mul(p, q)


@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert poly_add(p, q) == q + p


@given(polys, polys, st.sampled_from(list(Flavor)))
def test_specialize_is_homomorphism(p, q, f):
    assert specialize(p * q, f) == specialize(p, f) * specialize(q, f)
    assert specialize(p + q, f) == specialize(p, f) + specialize(q, f)


@given(monomials, monomials)
def test_bidegree_additive(m1, m2):
    prod = (m1[0] + m2[0], m1[1] + m2[1])
    assert monomial_bidegree(prod) == monomial_bidegree(m1) + monomial_bidegree(m2)


@given(polys)
def test_format_parse_roundtrip(p):
    assert parse_poly(format_poly(p)) == p


@given(polys, polys)
def test_derivatives_leibniz(p, q):
    assert u_derivative(p * q) == u_derivative(p) * q + p * u_derivative(q)
    assert v_derivative(p * q) == v_derivative(p) * q + p * v_derivative(q)


def test_parse_forms():
    assert parse_poly("u^2 + u v^3 + 1") == P((2, 0), (1, 3), (0, 0))
    assert parse_poly("0") == ZERO
    assert parse_poly("uv") == P((1, 1))
    with pytest.raises(ValueError):
        parse_poly("2u")
    with pytest.raises(ValueError):
        parse_poly("w")


def test_v_bits():
    assert v_bits(P((0, 0), (0, 2), (1, 1))) == 0b101
