"""Berezin symbols on rational orbits and their semiclassical diagnostics.

Two independent evaluations of the universal Berezin symbol are provided.

Operator route
    ``<rho(g) v_hw, rho(u) rho(g) v_hw>`` in the irrep ``(s*p1, s*q1)``.
Algebraic route
    Push ``u`` through ``Ad_{g^-1}``, normal order, and read off the
    highest-weight expectation, which only sees pure Cartan monomials and
    equals ``beta`` evaluated at ``-i*s*omega``.

The algebraic route is exact as a polynomial in ``s``.  For each degree it
precomputes, once, the normal forms of all zero-weight words together with
their pure-Cartan coefficients; a symbol is then a contraction of those
tables with the adjoint matrices of a whole sample bank.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .irreps import build_irrep, group_rep, haar_bank, rho_word
from .sl3core import DIM, RationalOrbit, e_NUM
from .uea import UeaElement, exps_to_word, multiply, commutator, normal_order, project_degree

__all__ = [
    "BEREZIN",
    "SCALED_BEREZIN",
    "RaySpec",
    "SymbolEval",
    "OrbitBank",
    "berezin_symbol_operator",
    "universal_berezin",
    "universal_berezin_operator",
    "universal_berezin_algebraic",
    "symbol_coefficients",
    "symbol_values",
    "limit_values",
    "twisted_product_eval",
    "error_map_eval",
    "error_map_curve",
    "poisson_diagnostics",
    "fit_slope",
    "fit_slope_band",
    "rate_verdict",
    "characteristic_number",
    "appendixB_constants",
    "char_number_limit_check",
]

BEREZIN = "Berezin"
SCALED_BEREZIN = "ScaledBerezin"
KINDS = (BEREZIN, SCALED_BEREZIN)

# weight of each ladder generator in the simple-root basis
_WEIGHTS = ((-1, 0), (0, -1), (-1, -1), (1, 0), (0, 1), (1, 1), (0, 0), (0, 0))


@dataclass(frozen=True)
class RaySpec:
    orbit: RationalOrbit
    kind: str = BEREZIN
    s_range: tuple = tuple(range(2, 17))

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown ray kind {self.kind!r}")
        if not self.s_range:
            raise ValueError("empty s range")
        if any(int(s) != s or s < 1 for s in self.s_range):
            raise ValueError("s values must be positive integers")


@dataclass
class SymbolEval:
    u: UeaElement
    s: int
    values: np.ndarray


# -- sample banks ----------------------------------------------------------------

@dataclass
class OrbitBank:
    """Shared Haar bank pushed onto one orbit.

    ``adinv[n, k, j] = tr(e_k^dagger g_n^-1 e_j g_n)`` is ``Ad_{g^-1}`` in the
    ladder basis; ``ell[n, j] = tr(e_j (-i X_n))`` at the orbit point
    ``X_n = g_n xi g_n^dagger``.
    """

    orbit: RationalOrbit
    seed: int
    count: int
    g: np.ndarray = field(repr=False)
    points: np.ndarray = field(repr=False)
    adinv: np.ndarray = field(repr=False)
    ell: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, orbit: RationalOrbit, seed: int = 0, count: int = 512,
              g: np.ndarray | None = None) -> OrbitBank:
        if g is None:
            g = haar_bank(seed, count)
        g = np.asarray(g)
        gd = np.conj(np.swapaxes(g, -1, -2))
        pts = g @ orbit.xi.matrix() @ gd
        adinv = adjoint_inverse_ladder(g)
        ell = np.einsum("jab,nba->nj", e_NUM, -1j * pts)
        return cls(orbit, seed, len(g), g, pts, adinv, ell)

    @property
    def r(self) -> float:
        return self.orbit.r


def adjoint_inverse_ladder(g: np.ndarray) -> np.ndarray:
    """Matrix of ``Ad_{g^-1}`` in the ladder basis for a stack of group elements."""
    g = np.asarray(g)
    single = g.ndim == 2
    if single:
        g = g[None]
    gd = np.conj(np.swapaxes(g, -1, -2))
    conj = np.einsum("nab,jbc,ncd->njad", gd, e_NUM, g)
    out = np.einsum("kba,njba->nkj", e_NUM.conj(), conj)
    return out[0] if single else out


# -- algebraic route tables ---------------------------------------------------------

_WORD_TABLES: dict = {}


def _zero_weight_words(d: int) -> list:
    """Words of length ``d`` whose total weight vanishes, built prefix by prefix."""
    if d == 0:
        return [()]
    prefixes = {(): (0, 0)}
    for depth in range(d):
        nxt = {}
        remaining = d - depth - 1
        for w, (a, b) in prefixes.items():
            for j in range(DIM):
                na, nb = a + _WEIGHTS[j][0], b + _WEIGHTS[j][1]
                # each remaining letter moves a weight coordinate by at most 1
                if abs(na) <= remaining and abs(nb) <= remaining:
                    nxt[w + (j,)] = (na, nb)
        prefixes = nxt
    return sorted(w for w, wt in prefixes.items() if wt == (0, 0))


def word_table(d: int):
    """``(words, cartan)``: zero-weight words of length ``d`` and, for each pure
    Cartan monomial ``e7^a e8^b``, the float array of its normal-form coefficient."""
    hit = _WORD_TABLES.get(d)
    if hit is not None:
        return hit
    words = _zero_weight_words(d)
    cartan: dict = {}
    for i, w in enumerate(words):
        for exps, c in normal_order(w).terms.items():
            if any(exps[:6]):
                continue
            key = (exps[6], exps[7])
            arr = cartan.get(key)
            if arr is None:
                arr = cartan[key] = np.zeros(len(words))
            arr[i] = float(c)
    hit = (np.array(words, dtype=np.int64).reshape(len(words), d), cartan)
    _WORD_TABLES[d] = hit
    return hit


def _cartan_tensor(d: int, h: tuple[float, float]) -> np.ndarray:
    """``T[w, k]``: coefficient of ``s^k`` in the expectation of word ``w``."""
    words, cartan = word_table(d)
    t = np.zeros((len(words), d + 1))
    for (a, b), arr in cartan.items():
        t[:, a + b] += arr * (h[0] ** a) * (h[1] ** b)
    return t


def symbol_coefficients(u: UeaElement, bank: OrbitBank) -> np.ndarray:
    """Array ``c[k, n]`` with ``b^s[u](X_n) = sum_k c[k, n] s^k`` (Berezin)."""
    h = bank.orbit.cartan_values()
    deg = u.degree()
    out = np.zeros((deg + 1, bank.count), dtype=complex)
    by_degree: dict = {}
    for exps, c in u.terms.items():
        by_degree.setdefault(sum(exps), []).append((exps, complex(c)))
    for d, monos in by_degree.items():
        if d == 0:
            out[0] += sum(c for _, c in monos)
            continue
        words, _ = word_table(d)
        tens = _cartan_tensor(d, h)
        for exps, c in monos:
            jw = exps_to_word(exps)
            prod_ = np.ones((bank.count, len(words)), dtype=complex)
            for i, j in enumerate(jw):
                prod_ *= bank.adinv[:, words[:, i], j]
            out[: d + 1] += c * (prod_ @ tens).T
    return out


def _berezin_from_coeffs(coeffs: np.ndarray, s: float) -> np.ndarray:
    powers = float(s) ** np.arange(coeffs.shape[0])
    return powers @ coeffs


def symbol_values(u: UeaElement, bank: OrbitBank, s: int, kind: str = BEREZIN,
                  coeffs: np.ndarray | None = None) -> np.ndarray:
    """Symbol of ``u`` at every bank point for level ``s`` and the given ray kind."""
    if coeffs is None:
        coeffs = symbol_coefficients(u, bank)
    b = _berezin_from_coeffs(coeffs, s)
    if kind == BEREZIN:
        return b
    if kind == SCALED_BEREZIN:
        mean = b.mean()
        return mean + (1.0 + bank.r / s) * (b - mean)
    raise ValueError(f"unknown ray kind {kind!r}")


def limit_values(u: UeaElement, bank: OrbitBank, d: int | None = None) -> np.ndarray:
    """``(-i)^d beta_d[u]`` at the bank points, via ``l_j`` values at ``-i X``."""
    if d is None:
        d = u.degree()
    top = project_degree(u, d)
    out = np.zeros(bank.count, dtype=complex)
    for exps, c in top.terms.items():
        term = np.full(bank.count, complex(c))
        for j, m in enumerate(exps):
            if m:
                term = term * bank.ell[:, j] ** m
        out += term
    return out


# -- single-point interfaces ---------------------------------------------------------

def berezin_symbol_operator(irrep, A: np.ndarray, g) -> complex:
    """``tr(A rho(g) P rho(g)^dagger)`` with ``P`` the highest-weight projector."""
    A = np.asarray(A)
    if A.shape != (irrep.dim, irrep.dim):
        raise ValueError(f"operator shape {A.shape} does not match dim {irrep.dim}")
    rep = g.rep if hasattr(g, "rep") else g
    if rep is None:
        rep = group_rep(irrep, g.defining)
    v = rep[:, irrep.hw_index]
    return complex(np.vdot(v, A @ v))


def universal_berezin_operator(u: UeaElement, ray: RaySpec, s: int, g) -> complex:
    """Operator route in the irrep ``(s*p1, s*q1)``; ``g`` is a 3x3 matrix or a sample."""
    gm = g.defining if hasattr(g, "defining") else np.asarray(g)
    irr = build_irrep(s * ray.orbit.p1, s * ray.orbit.q1)
    rep = group_rep(irr, gm)
    return berezin_symbol_operator(irr, rho_word(irr, u), rep)


def universal_berezin_algebraic(u: UeaElement, ray: RaySpec, s: int, g) -> complex:
    """Algebraic route via normal ordering of ``Ad_{g^-1} u``."""
    gm = g.defining if hasattr(g, "defining") else np.asarray(g)
    bank = OrbitBank.build(ray.orbit, g=gm[None])
    return complex(_berezin_from_coeffs(symbol_coefficients(u, bank), s)[0])


def universal_berezin(u: UeaElement, ray: RaySpec, s: int, g, route: str = "both"):
    """Berezin symbol of ``u`` at ``Ad_g xi`` on level ``s``.

    ``route="both"`` returns ``(operator, algebraic)`` so callers can compare.
    """
    if s not in ray.s_range:
        raise ValueError(f"s={s} not in the ray's range")
    if route == "operator":
        return universal_berezin_operator(u, ray, s, g)
    if route == "algebraic":
        return universal_berezin_algebraic(u, ray, s, g)
    return universal_berezin_operator(u, ray, s, g), universal_berezin_algebraic(u, ray, s, g)


def twisted_product_eval(u: UeaElement, v: UeaElement, ray: RaySpec, s: int,
                         bank: OrbitBank) -> np.ndarray:
    """Symbol of ``uv`` at the bank points (the twisted product of the two symbols)."""
    return symbol_values(multiply(u, v), bank, s, ray.kind)


# -- rates -------------------------------------------------------------------------

def fit_slope(s_values, defects) -> float:
    """Least-squares slope of ``log(defect)`` against ``log(s)``."""
    s = np.asarray(s_values, dtype=float)
    y = np.asarray(defects, dtype=float)
    if np.any(y <= 0):
        return float("nan")
    return float(np.polyfit(np.log(s), np.log(y), 1)[0])


def fit_slope_band(s_values, defects) -> tuple[float, float]:
    """Slope and its standard error; the error is ``nan`` with fewer than four points."""
    s = np.asarray(s_values, dtype=float)
    y = np.asarray(defects, dtype=float)
    if np.any(y <= 0):
        return float("nan"), float("nan")
    if len(s) < 4:
        return float(np.polyfit(np.log(s), np.log(y), 1)[0]), float("nan")
    coef, cov = np.polyfit(np.log(s), np.log(y), 1, cov=True)
    return float(coef[0]), float(np.sqrt(cov[0, 0]))


def rate_verdict(s_values, defects, lo: float = -1.3, hi: float = -0.7,
                 exact_floor: float = 1e-10) -> tuple[str, float]:
    """``("exact", nan)`` for a defect at rounding level everywhere, else
    ``("PASS" | "FAIL", slope)`` according to the slope window ``[lo, hi]``."""
    y = np.asarray(defects, dtype=float)
    if np.max(y) <= exact_floor:
        return "exact", float("nan")
    slope = fit_slope(s_values, y)
    return ("PASS" if lo <= slope <= hi else "FAIL"), slope


def error_map_curve(u: UeaElement, ray: RaySpec, bank: OrbitBank) -> np.ndarray:
    """Sampled sup of ``(s r)^-d b^s[u] - (-i)^d beta_d[u]`` for each ``s`` of the ray."""
    if ray.kind != BEREZIN:
        raise ValueError("the error map is defined for the Berezin kind")
    d = u.degree()
    coeffs = symbol_coefficients(u, bank)
    f = limit_values(u, bank, d)
    r = bank.r
    out = []
    for s in ray.s_range:
        b = _berezin_from_coeffs(coeffs, s)
        out.append(float(np.max(np.abs(b / (s * r) ** d - f))))
    return np.array(out)


def error_map_eval(u: UeaElement, ray: RaySpec, s: int, bank: OrbitBank) -> float:
    single = RaySpec(ray.orbit, ray.kind, (s,))
    return float(error_map_curve(u, single, bank)[0])


@dataclass
class PoissonTable:
    orbit: RationalOrbit
    kind: str
    s_values: tuple
    s_times_r: np.ndarray
    prod_defect: np.ndarray
    bracket_defect: np.ndarray
    degrees: tuple

    @property
    def prod_slope(self) -> float:
        return fit_slope(self.s_values, self.prod_defect)

    @property
    def bracket_slope(self) -> float:
        return fit_slope(self.s_values, self.bracket_defect)

    def rows(self):
        for i, s in enumerate(self.s_values):
            yield (self.orbit.p1, self.orbit.q1, s, float(self.s_times_r[i]),
                   float(self.prod_defect[i]), float(self.bracket_defect[i]))


class PairSymbols:
    """Per-bank cache of everything a product/bracket diagnostic needs."""

    def __init__(self, u: UeaElement, v: UeaElement, bank: OrbitBank):
        self.bank = bank
        self.d1, self.d2 = u.degree(), v.degree()
        uv = multiply(u, v)
        comm = commutator(u, v)
        self.prod_coeffs = symbol_coefficients(uv, bank)
        self.comm_coeffs = symbol_coefficients(comm, bank)
        self.f1f2 = limit_values(u, bank, self.d1) * limit_values(v, bank, self.d2)
        db = self.d1 + self.d2 - 1
        self.bracket_limit = limit_values(comm, bank, db) if db >= 0 else np.zeros(bank.count)

    def product_symbol(self, s: int, kind: str) -> np.ndarray:
        return symbol_values(None, self.bank, s, kind, coeffs=self.prod_coeffs)

    def commutator_symbol(self, s: int, kind: str) -> np.ndarray:
        return symbol_values(None, self.bank, s, kind, coeffs=self.comm_coeffs)

    def prod_error(self, s: int, kind: str) -> np.ndarray:
        sr = s * self.bank.r
        return self.product_symbol(s, kind) / sr ** (self.d1 + self.d2) - self.f1f2

    def bracket_error(self, s: int, kind: str) -> np.ndarray:
        sr = s * self.bank.r
        db = self.d1 + self.d2 - 1
        return self.commutator_symbol(s, kind) / sr ** db - self.bracket_limit


def poisson_diagnostics(u: UeaElement, v: UeaElement, ray: RaySpec, bank: OrbitBank) -> PoissonTable:
    if max(u.degree(), v.degree()) > 3:
        raise ValueError("inputs are limited to degree 3")
    pair = PairSymbols(u, v, bank)
    prod_d, br_d = [], []
    for s in ray.s_range:
        prod_d.append(float(np.max(np.abs(pair.prod_error(s, ray.kind)))))
        br_d.append(float(np.max(np.abs(pair.bracket_error(s, ray.kind)))))
    s_vals = tuple(ray.s_range)
    return PoissonTable(ray.orbit, ray.kind, s_vals, np.array(s_vals) * bank.r,
                        np.array(prod_d), np.array(br_d), (pair.d1, pair.d2))


# -- pure-quark characteristic numbers ----------------------------------------------------

def characteristic_number(p: int, n: int) -> float:
    if n < 0 or n > p:
        raise ValueError(f"need 0 <= n <= p, got n={n}, p={p}")
    return math.sqrt(Fraction(comb(p, n), comb(p + n + 2, n)))


def appendixB_constants(p: int, n: int) -> tuple[float, float]:
    """The closed forms ``(x_n[p], y_n[p])`` of the ladder-expansion coefficients."""
    if not 1 <= n < p:
        raise ValueError(f"need 1 <= n < p, got n={n}, p={p}")
    sign = -1.0 if p % 2 else 1.0
    quart = math.sqrt(p * (p + 1) * (p + 2) * (p + 3))
    x = sign * 2 * n * (n + 2) / ((2 * n + 1) * (2 * n + 3)) * (2 * p + 3) / quart
    y = (sign * 3 * math.sqrt((n + 1) * (n + 2)) / (2 * n + 3)
         * math.sqrt((p + n + 3) * (p - n)) / quart)
    return x, y


def char_number_limit_check(p_max: int, n_max: int, tol: float = 0.05,
                            p_grid=None) -> dict:
    """Convergence of ``b_n^p`` to 1 and of ``p (b_n^p - 1)`` to ``-n(n+2)/2``.

    The verdict of row ``n`` uses ``p = p_max``.
    """
    if p_grid is None:
        p_grid = sorted({p for p in (1, 2, 5, 10, 20, 50, 100, 200, 500, 1000, 2000) if p <= p_max} | {p_max})
    rows = []
    for n in range(n_max + 1):
        target = -n * (n + 2) / 2
        cols = []
        for p in p_grid:
            if p < n:
                continue
            b = characteristic_number(p, n)
            cols.append({"p": p, "b": b, "scaled": p * (b - 1), "gap": p * (b - 1) - target})
        last = cols[-1]
        ok = (all(0 < c["b"] <= 1 for c in cols) and abs(last["gap"]) <= tol)
        rows.append({"n": n, "limit": target, "columns": cols,
                     "gap_at_pmax": last["gap"], "verdict": "PASS" if ok else "FAIL"})
    return {"p_max": p_max, "n_max": n_max, "tolerance": tol, "rows": rows}
