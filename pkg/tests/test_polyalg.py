import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from quarksym.irreps import haar_bank
from quarksym.polyalg import (
    OrbitSample,
    PolyElement,
    check_tau,
    chi,
    coordinate,
    evaluate,
    kaks_bracket,
    pointwise_mul,
    sup_norm_estimate,
    tau,
    tau_on_arc,
    x_coords,
)
from quarksym.scalarfield import R2, R3
from quarksym.sl3core import DIM, RationalOrbit, gellmann_basis, mat_to_numpy, structure_constants, weyl_point
from quarksym.uea import beta, beta_d, generator

coef = st.sampled_from([1, -1, 2, Fraction(1, 2), R2, R3 - 1])


def _exponent(indices):
    e = [0] * DIM
    for k in indices:
        e[k] += 1
    return tuple(e)


exps = st.lists(st.integers(0, DIM - 1), max_size=2).map(_exponent)
polys = st.dictionaries(exps, coef, max_size=3).map(PolyElement)

X = [coordinate(k) for k in range(DIM)]


def sphere_sum():
    return sum((x * x for x in X), PolyElement())


def test_pointwise_examples():
    f = X[0] + 3 * X[4]
    assert pointwise_mul(f, PolyElement.constant(1)) == f
    assert pointwise_mul(X[0], X[0]) == X[0] ** 2
    assert str(X[0] ** 2 * X[7] - X[2]) == "(1)*x1^2*x8 + (-1)*x3"


def test_coordinate_brackets():
    sc = structure_constants("GellMann")
    for j in range(DIM):
        for k in range(DIM):
            expect = PolyElement({tuple(int(m == l) for m in range(DIM)): c for l, c in sc[(k, j)].items()})
            assert kaks_bracket(X[j], X[k]) == expect


def test_degree_one_bracket_is_beta_of_commutator():
    e1, e2, e3 = generator(0), generator(1), generator(2)
    assert kaks_bracket(beta_d(e1, 1), beta_d(e2, 1)) == beta_d(e3, 1)


def test_tau_invariance_and_values():
    t = tau()
    for j in range(DIM):
        assert kaks_bracket(X[j], t).is_zero()
    assert chi(RationalOrbit(1, 0)) == 2
    assert chi(RationalOrbit(0, 1)) == -2
    assert chi(RationalOrbit(1, 1)) == 0
    assert tau_on_arc(1.0, 0.0) == 2
    assert abs(tau_on_arc(1 / math.sqrt(3), 1 / math.sqrt(3))) < 1e-15


def test_tau_matches_arc_formula_and_is_odd():
    t = tau()
    for y in np.linspace(0, 1, 7):
        p = weyl_point(y)
        v = evaluate(t, p.matrix())
        assert abs(v - tau_on_arc(p.x, p.y)) < 1e-12
        assert abs(evaluate(t, -p.matrix()) + v) < 1e-12


def test_tau_separates_on_arc():
    ys = np.linspace(0, 1, 1000)
    xs = (-ys + np.sqrt(4 - 3 * ys ** 2)) / 2
    vals = tau_on_arc(xs, ys)
    assert np.all(np.diff(vals) < 0)


def test_check_tau():
    o = RationalOrbit(1, 0)
    sample = OrbitSample.draw(o, seed=3, count=64)
    assert sup_norm_estimate(check_tau(o), sample) <= 1e-10
    assert evaluate(check_tau(o), RationalOrbit(0, 1).xi_exact()) == -4
    assert evaluate(check_tau(o), o.xi_exact()) == 0


def test_tau_invariant_under_adjoint_action():
    o = RationalOrbit(2, 1)
    pts = OrbitSample.draw(o, seed=5, count=32).points
    vals = evaluate(tau(), pts)
    assert np.max(np.abs(vals - chi(o))) < 1e-9


def test_evaluate_examples():
    E = gellmann_basis()
    assert evaluate(X[2], E[2]) == 1
    assert evaluate(PolyElement.constant(1), E[0]) == 1
    sample = OrbitSample.draw(RationalOrbit(1, 1), seed=0, count=64)
    assert abs(sup_norm_estimate(sphere_sum() - 1, sample)) <= 1e-12
    assert sup_norm_estimate(PolyElement(), sample) == 0


def test_x_coords_is_minus_trace():
    E = np.array([mat_to_numpy(m) for m in gellmann_basis()])
    g = haar_bank(0, 4)
    X0 = g[0] @ E[3] @ g[0].conj().T
    xs = x_coords(X0)
    assert np.allclose(xs, [-np.trace(E[k] @ X0) for k in range(DIM)])
    assert np.allclose(np.einsum("k,kab->ab", xs, E), X0)


def test_exact_and_numeric_evaluation_agree():
    f = tau() * X[1] - X[3] ** 2 * R2
    xe = RationalOrbit(1, 1).xi_exact()
    exact = complex(evaluate(f, xe))
    num = evaluate(f, RationalOrbit(1, 1).xi.matrix())
    assert abs(exact - num) < 1e-12


def test_sample_json_round_trip():
    s = OrbitSample.draw(RationalOrbit(2, 1), seed=7, count=16)
    t = OrbitSample.from_json(s.to_json())
    assert np.array_equal(s.points, t.points)


def test_empty_sample_rejected():
    s = OrbitSample(RationalOrbit(1, 0), 0, 0, np.zeros((0, 3, 3)))
    with pytest.raises(ValueError):
        sup_norm_estimate(X[0], s)


def test_beta_is_multiplicative_on_top_degree():
    u, v = generator(0) * generator(3), generator(5)
    assert beta_d(u * v, 3) == beta(u).homogeneous_part(2) * beta(v)


@given(polys, polys, polys)
def test_ring_axioms(f, g, h):
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == PolyElement()


@given(polys, polys, polys)
def test_bracket_antisymmetry_leibniz_jacobi(f, g, h):
    assert kaks_bracket(f, f).is_zero()
    assert kaks_bracket(f, g) == -kaks_bracket(g, f)
    assert kaks_bracket(f * g, h) == f * kaks_bracket(g, h) + kaks_bracket(f, h) * g
    jac = (kaks_bracket(f, kaks_bracket(g, h)) + kaks_bracket(g, kaks_bracket(h, f))
           + kaks_bracket(h, kaks_bracket(f, g)))
    assert jac.is_zero()


@given(polys, polys)
def test_numeric_evaluation_is_homomorphic(f, g):
    pts = np.random.default_rng(0).normal(size=(5, DIM))
    assert np.allclose((f * g).eval_coords(pts), f.eval_coords(pts) * g.eval_coords(pts))
