import math
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from quarksym.irreps import build_irrep, haar_bank, rho_word
from quarksym.sl3core import RationalOrbit
from quarksym.symbols import (
    BEREZIN,
    SCALED_BEREZIN,
    OrbitBank,
    PairSymbols,
    RaySpec,
    appendixB_constants,
    berezin_symbol_operator,
    char_number_limit_check,
    characteristic_number,
    error_map_curve,
    error_map_eval,
    fit_slope,
    fit_slope_band,
    limit_values,
    poisson_diagnostics,
    rate_verdict,
    symbol_values,
    twisted_product_eval,
    universal_berezin,
)
from quarksym.uea import commutator, generator, normal_order, one, random_element, two_t3

S = tuple(range(2, 17))
E1, E2, E4 = generator(0), generator(1), generator(3)


@pytest.fixture(scope="module")
def bank10():
    return OrbitBank.build(RationalOrbit(1, 0), seed=0, count=512)


def test_operator_symbol_examples():
    irr = build_irrep(2, 1)
    g = haar_bank(0, 1)[0]
    from quarksym.irreps import group_rep

    rep = group_rep(irr, g)
    assert abs(berezin_symbol_operator(irr, np.eye(irr.dim), rep) - 1) < 1e-12
    proj = np.zeros((irr.dim, irr.dim))
    proj[irr.hw_index, irr.hw_index] = 1
    assert abs(berezin_symbol_operator(irr, proj, np.eye(irr.dim)) - 1) < 1e-12
    a = rho_word(irr, two_t3())
    assert abs(berezin_symbol_operator(irr, a, np.eye(irr.dim)) - 2) < 1e-9
    with pytest.raises(ValueError):
        berezin_symbol_operator(irr, np.eye(3), rep)


def test_universal_examples():
    ray = RaySpec(RationalOrbit(1, 0), BEREZIN, (1, 2, 3, 4))
    g = haar_bank(4, 1)[0]
    for s in ray.s_range:
        a, b = universal_berezin(one(), ray, s, g)
        assert abs(a - 1) < 1e-12 and abs(b - 1) < 1e-12
        a, b = universal_berezin(two_t3(), ray, s, np.eye(3))
        assert abs(a - s) < 1e-9 and abs(b - s) < 1e-9
    ray21 = RaySpec(RationalOrbit(2, 1), BEREZIN, (2,))
    a, b = universal_berezin(E1 * E4, ray21, 2, g)
    assert abs(a - b) <= 1e-8 * max(1, abs(a))
    with pytest.raises(ValueError):
        universal_berezin(E1, ray21, 3, g)


@given(st.integers(0, 10 ** 6))
def test_dual_route_property(seed):
    rng = random.Random(seed)
    u = random_element(rng, 3)
    ray = RaySpec(RationalOrbit(1, 1), BEREZIN, (1, 2, 3))
    g = haar_bank(seed % 97, 1)[0]
    for s in ray.s_range:
        a, b = universal_berezin(u, ray, s, g)
        assert abs(a - b) <= 1e-8 * max(1.0, abs(a), abs(b))


def test_twisted_product_examples(bank10):
    ray = RaySpec(bank10.orbit, BEREZIN, S)
    for s in (2, 7):
        assert np.allclose(twisted_product_eval(one(), one(), ray, s, bank10), 1)
        lhs = twisted_product_eval(E1, E4, ray, s, bank10) - twisted_product_eval(E4, E1, ray, s, bank10)
        assert np.allclose(lhs, symbol_values(commutator(E1, E4), bank10, s))
    ident = OrbitBank.build(RationalOrbit(1, 0), g=np.eye(3)[None])
    for s in (5, 50):
        v = twisted_product_eval(two_t3(), two_t3(), ray, s, ident)[0]
        assert abs(v - s * s) < 1e-8 * s * s


def test_symbol_linearity(bank10):
    u, v = E1 * E4, E2 + E1
    for s in (3, 9):
        lhs = symbol_values(u.scale(3) + v, bank10, s)
        assert np.allclose(lhs, 3 * symbol_values(u, bank10, s) + symbol_values(v, bank10, s), atol=1e-10)


def test_error_map(bank10):
    ray = RaySpec(bank10.orbit, BEREZIN, S)
    assert error_map_eval(E1, ray, 5, bank10) <= 1e-9
    for u in (E1 * E4, (E1 * E4) * E2):
        slope = fit_slope(S, error_map_curve(u, ray, bank10))
        assert -1.3 <= slope <= -0.7
    with pytest.raises(ValueError):
        error_map_curve(E1, RaySpec(bank10.orbit, SCALED_BEREZIN, S), bank10)


def test_limit_is_top_degree_beta(bank10):
    # degree-1 symbols are exactly (s r) times the limit
    for s in (2, 11):
        assert np.allclose(symbol_values(E2, bank10, s) / (s * bank10.r), limit_values(E2, bank10))


def test_poisson_diagnostics(bank10):
    ray = RaySpec(bank10.orbit, BEREZIN, S)
    same = poisson_diagnostics(E1 * E4, E1 * E4, ray, bank10)
    assert np.max(same.bracket_defect) < 1e-12
    t = poisson_diagnostics(E1, E4, ray, bank10)
    assert -1.3 <= t.prod_slope <= -0.7
    assert np.max(t.bracket_defect) <= 1e-8
    rows = list(t.rows())
    assert rows[0][:3] == (1, 0, 2) and len(rows) == len(S)
    with pytest.raises(ValueError):
        poisson_diagnostics(E1 * E1 * E1 * E1, E4, ray, bank10)


def test_scaled_berezin_excess(bank10):
    """ScaledBerezin differs from Berezin by (r/s) times the non-invariant part."""
    pair = PairSymbols(E1, E4, bank10)
    s = 16
    diff = pair.prod_error(s, SCALED_BEREZIN) - pair.prod_error(s, BEREZIN)
    f = pair.f1f2
    bound = bank10.r / s * np.max(np.abs(f - f.mean()))
    assert np.max(np.abs(diff)) >= 0.5 * bound
    b = symbol_values(E1 * E4, bank10, s)
    w = symbol_values(E1 * E4, bank10, s, SCALED_BEREZIN)
    assert abs(w.mean() - b.mean()) < 1e-12
    with pytest.raises(ValueError):
        symbol_values(E1, bank10, s, "Toeplitz")


def test_ray_validation():
    with pytest.raises(ValueError):
        RaySpec(RationalOrbit(1, 0), "Other")
    with pytest.raises(ValueError):
        RaySpec(RationalOrbit(1, 0), BEREZIN, ())
    with pytest.raises(ValueError):
        RaySpec(RationalOrbit(1, 0), BEREZIN, (0, 1))


def test_slope_helpers():
    s = np.arange(2, 17)
    assert fit_slope(s, 3.0 / s) == pytest.approx(-1.0)
    assert math.isnan(fit_slope(s, np.zeros(len(s))))
    slope, err = fit_slope_band(s, 2.0 / s ** 2 * (1 + 0.01 * np.sin(s)))
    assert abs(slope + 2) < 0.05 and err < 0.05
    verdict, slope = rate_verdict(s, np.full(len(s), 1e-15))
    assert verdict == "exact" and math.isnan(slope)
    assert rate_verdict(s, 1.0 / s)[0] == "PASS"
    assert rate_verdict(s, 1.0 / s ** 2)[0] == "FAIL"


def test_characteristic_numbers():
    for p in (1, 5, 40):
        assert characteristic_number(p, 0) == 1
    assert characteristic_number(1, 1) == 0.5
    assert abs(characteristic_number(200, 1) - 1) <= 2 / 200
    with pytest.raises(ValueError):
        characteristic_number(2, 3)
    for p in range(1, 30):
        for n in range(p + 1):
            assert 0 < characteristic_number(p, n) <= 1


def test_appendix_b_constants():
    x, y = appendixB_constants(2, 1)
    assert math.isfinite(x) and math.isfinite(y)
    n = 2
    limit = 2 * n * (n + 2) / ((2 * n + 1) * (2 * n + 3))
    for p in (10 ** 4, 10 ** 6):
        x, _ = appendixB_constants(p, n)
        scaled = abs(math.sqrt(p * (p + 1) * (p + 2) * (p + 3)) * x / (2 * p + 3))
        assert abs(scaled - limit) < 1e-12
    with pytest.raises(ValueError):
        appendixB_constants(3, 3)


def test_limit_check_report():
    rep = char_number_limit_check(2000, 4)
    rows = {r["n"]: r for r in rep["rows"]}
    assert rows[0]["verdict"] == "PASS"
    assert all(c["b"] == 1 for c in rows[0]["columns"])
    assert rows[4]["verdict"] == "PASS"
    gaps = [abs(c["gap"]) for c in rows[4]["columns"] if c["p"] >= 10]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))


def test_bank_geometry(bank10):
    assert bank10.points.shape == (512, 3, 3)
    x = np.real(np.einsum("kab,nba->nk", -np.array(__import__("quarksym.sl3core", fromlist=["E_NUM"]).E_NUM), bank10.points))
    assert np.allclose(np.sum(x ** 2, axis=1), 1)
    assert bank10.r == pytest.approx(math.sqrt(2 / 3))
    u = normal_order([0, 3])
    assert symbol_values(u, bank10, 4).shape == (512,)
