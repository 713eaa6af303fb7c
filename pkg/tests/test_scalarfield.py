import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from quarksym.scalarfield import (
    GaussQuad,
    I,
    QuadScalar,
    R2,
    R3,
    R6,
    parse_gauss,
    parse_quad,
    quad_sqrt,
    to_exact,
)

big = st.integers(min_value=-(2 ** 64), max_value=2 ** 64)
pos = st.integers(min_value=1, max_value=2 ** 64)
rationals = st.builds(Fraction, big, pos)
quads = st.builds(QuadScalar, rationals, rationals, rationals, rationals)
nonzero_quads = quads.filter(lambda q: not q.is_zero())
gauss = st.builds(GaussQuad, quads, quads)


def test_radical_products():
    assert R2 * R2 == 2
    assert (1 + R2) * (1 - R2) == -1
    assert (R2 + R3) ** 2 == 5 + 2 * R6
    assert R2 * R3 == R6


def test_invert_examples():
    assert QuadScalar(2).invert() == Fraction(1, 2)
    assert R2.invert() == R2 / 2
    x = 1 + R2 + R3
    v = x.invert()
    assert x * v == 1
    # conjugation oracle: x * conj2(x) * conj3(x) * conj2(conj3(x)) is rational
    norm = x * x.conj2() * x.conj3() * x.conj2().conj3()
    assert norm.is_rational()
    assert v == x.conj2() * x.conj3() * x.conj2().conj3() / norm


def test_invert_zero_raises():
    with pytest.raises(ZeroDivisionError):
        QuadScalar(0).invert()
    with pytest.raises(ZeroDivisionError):
        _ = R2 / QuadScalar()


def test_to_float():
    assert QuadScalar(0).to_float() == 0.0
    assert abs(R2.to_float() - 1.4142135623730951) <= math.ulp(1.4142135623730951)
    assert abs(R6.to_float() - 2.449489742783178) <= math.ulp(2.449489742783178)


def test_lowest_terms_and_text():
    q = QuadScalar(Fraction(2, 4), Fraction(-6, 8), 0, 3)
    assert q.coords == (Fraction(1, 2), Fraction(-3, 4), 0, 3)
    assert str(q) == "1/2 + -3/4*r2 + 0*r3 + 3*r6"
    assert parse_quad(str(q)) == q


def test_hash_matches_rationals():
    assert hash(QuadScalar(Fraction(3, 7))) == hash(Fraction(3, 7))
    assert QuadScalar(5) == 5 and hash(QuadScalar(5)) == hash(5)


def test_quad_sqrt():
    assert quad_sqrt(Fraction(3, 2)) == R6 / 2
    assert quad_sqrt(4) == 2
    assert quad_sqrt(Fraction(3, 14)) is None


def test_gauss_basics():
    z = GaussQuad(1, R2)
    assert z * z.conjugate() == z.norm_sq() == 3
    assert z * z.invert() == 1
    assert I * I == -1
    assert parse_gauss(str(z)) == z
    assert to_exact(GaussQuad(Fraction(1, 2), 0)) == Fraction(1, 2)
    assert to_exact(GaussQuad(R3, 0)) == R3


def test_mixing_with_float_gives_float():
    assert isinstance(R2 * 1.5, float)
    assert isinstance(R2 + 1j, complex)


@given(quads, quads, quads)
def test_ring_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert x - x == 0


@given(nonzero_quads)
def test_inverse(x):
    assert x * x.invert() == 1


@given(quads)
def test_text_round_trip(x):
    assert parse_quad(str(x)) == x


@given(quads, quads)
def test_float_is_homomorphic(x, y):
    lhs = (x * y).to_float()
    rhs = x.to_float() * y.to_float()
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs), abs(x.to_float()) * abs(y.to_float()))


@given(gauss, gauss)
def test_gauss_field(z, w):
    assert (z * w).conjugate() == z.conjugate() * w.conjugate()
    if not z.is_zero():
        assert (w / z) * z == w
    assert parse_gauss(str(z)) == z
