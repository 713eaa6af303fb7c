import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from quarksym.irreps import build_irrep, rho_word
from quarksym.polyalg import PolyElement, coordinate, kaks_bracket, tau
from quarksym.scalarfield import R2
from quarksym.sl3core import DIM
from quarksym.uea import (
    UeaElement,
    beta,
    beta_at_weight,
    beta_d,
    commutator,
    cubic_casimir,
    ell,
    generator,
    multiply,
    normal_order,
    normal_order_random,
    one,
    parse_uea,
    project_degree,
    random_element,
    symmetrize,
    two_t3,
    two_u3,
)

e = [generator(j) for j in range(DIM)]
words = st.lists(st.integers(0, DIM - 1), max_size=6)
seeds = st.integers(0, 2 ** 32)


def elements(max_degree):
    return seeds.map(lambda s: random_element(random.Random(s), max_degree))


def test_normal_order_examples():
    assert normal_order([1, 0]) == e[0] * e[1] - e[2]
    assert str(normal_order([1, 0])) == "(1)*e1*e2 + (-1)*e3"
    assert normal_order([0, 1]) == multiply(e[0], e[1])
    assert normal_order([]) == one()


def test_normal_order_matches_irrep_products():
    irr = build_irrep(2, 1)
    for w in ([3, 0, 3], [5, 2, 1, 0], [7, 4, 6, 0]):
        direct = np.eye(irr.dim)
        for j in w:
            direct = direct @ irr.dense[j]
        assert np.allclose(rho_word(irr, normal_order(w)), direct, atol=1e-10)


def test_multiply_and_commutator():
    u = e[0] * e[3] + 2
    assert multiply(one(), u) == u
    assert commutator(e[0], e[1]) == e[2]
    assert commutator(u, u).is_zero()


def test_project_degree():
    u = normal_order([1, 0])
    assert project_degree(u, 2) == e[0] * e[1]
    assert project_degree(one(), 0) == one()
    assert project_degree(e[0] * e[1] * e[2], 5).is_zero()
    with pytest.raises(ValueError):
        project_degree(u, -1)


def test_beta_examples():
    assert beta(one()) == PolyElement.constant(1)
    assert beta_d(normal_order([1, 0]), 2) == beta(e[0] * e[1])
    assert beta_d(one().scale(5), 0) == PolyElement.constant(5)
    assert beta_d(e[2], 1) == ell(2)


@pytest.mark.parametrize("pq", [(1, 0), (2, 1), (3, 3), (0, 2)])
def test_cartan_anchor(pq):
    p, q = pq
    assert beta_at_weight(two_t3(), p, q) == p
    assert beta_at_weight(two_u3(), p, q) == q


def test_symmetrize_examples():
    assert symmetrize(ell(0)) == e[0]
    assert symmetrize(ell(0) * ell(1)) == e[0] * e[1] - e[2].scale(Fraction(1, 2))
    assert str(symmetrize(ell(0) * ell(1))) == "(1)*e1*e2 + (-1/2)*e3"


def test_symmetrize_right_inverse_random():
    rng = random.Random(4)
    for _ in range(20):
        d = rng.randint(1, 4)
        f = PolyElement()
        for _ in range(3):
            ex = [0] * DIM
            for _ in range(d):
                ex[rng.randrange(DIM)] += 1
            f = f + PolyElement({tuple(ex): rng.choice([1, -2, R2])})
        assert beta_d(symmetrize(f), d) == f


def test_cubic_casimir_central_and_scalar():
    c = cubic_casimir()
    assert len(c.terms) == 16
    for j in range(DIM):
        assert commutator(c, e[j]).is_zero()
    m = rho_word(build_irrep(1, 0), c)
    off = m - np.diag(np.diag(m))
    assert np.max(np.abs(off)) <= 1e-10 * np.max(np.abs(m))
    assert beta_d(c, 3) == tau()


def test_parse_round_trip():
    rng = random.Random(2)
    for _ in range(20):
        u = random_element(rng, 3)
        assert parse_uea(str(u)) == u
    assert parse_uea("0").is_zero()


@given(words, seeds)
def test_confluence(w, seed):
    assert normal_order(w) == normal_order_random(w, random.Random(seed))


@given(elements(2), elements(2), elements(2))
def test_associativity(u, v, w):
    assert multiply(multiply(u, v), w) == multiply(u, multiply(v, w))


@given(elements(3), elements(3))
def test_beta_product_identity(u, v):
    du, dv = u.degree(), v.degree()
    assert beta_d(multiply(u, v), du + dv) == beta_d(u, du) * beta_d(v, dv)


@given(elements(3), elements(3))
def test_beta_bracket_identity(u, v):
    du, dv = u.degree(), v.degree()
    assert beta_d(commutator(u, v), du + dv - 1) == kaks_bracket(beta_d(u, du), beta_d(v, dv))


@given(elements(3))
def test_degree_never_increases(u):
    for w, _ in u.terms.items():
        assert sum(w) <= 3
    assert isinstance(u, UeaElement)


def test_ell_and_coordinates():
    # l_j(X) = tr(e_j X) is linear in x with the Gram coefficients
    assert ell(0).degree() == 1
    assert kaks_bracket(coordinate(0), coordinate(0)).is_zero()
