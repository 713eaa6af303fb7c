"""Sparse polynomials on su(3) in the Gell-Mann coordinates ``x_1..x_8``.

A point ``X`` of su(3) has coordinates ``x_k = -tr(E_k X)`` so that
``X = sum_k x_k E_k``.  Coefficients may be any exact scalar from
:mod:`quarksym.scalarfield` (or plain ``int``/``Fraction``); floats are
accepted where a value is only known numerically.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .scalarfield import GaussQuad, R3, to_exact
from .sl3core import (
    DIM,
    E_NUM,
    RationalOrbit,
    gellmann_basis,
    mat_mul,
    mat_trace,
    structure_constants,
)

__all__ = [
    "PolyElement",
    "ZERO_EXP",
    "coordinate",
    "pointwise_mul",
    "kaks_bracket",
    "tau",
    "tau_on_arc",
    "chi",
    "check_tau",
    "evaluate",
    "x_coords",
    "OrbitSample",
    "sup_norm_estimate",
]

ZERO_EXP = (0,) * DIM


def _add_exp(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3],
            a[4] + b[4], a[5] + b[5], a[6] + b[6], a[7] + b[7])


def _unit_exp(k: int):
    e = [0] * DIM
    e[k] = 1
    return tuple(e)


def _fmt_coef(c) -> str:
    c = to_exact(c)
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return str(c)


class PolyElement:
    """Polynomial as a map from exponent 8-tuples to nonzero coefficients."""

    __slots__ = ("terms", "_numeric")

    def __init__(self, terms=None):
        self.terms = {e: c for e, c in (terms or {}).items() if c != 0}
        self._numeric = None

    @classmethod
    def _trusted(cls, terms: dict) -> PolyElement:
        obj = cls.__new__(cls)
        obj.terms = terms
        obj._numeric = None
        return obj

    @classmethod
    def constant(cls, c) -> PolyElement:
        return cls({ZERO_EXP: c})

    # algebra
    def __add__(self, other) -> PolyElement:
        if not isinstance(other, PolyElement):
            other = PolyElement.constant(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            v = c if v is None else v + c
            if v == 0:
                out.pop(e, None)
            else:
                out[e] = v
        return PolyElement._trusted(out)

    __radd__ = __add__

    def __neg__(self) -> PolyElement:
        return PolyElement._trusted({e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> PolyElement:
        if not isinstance(other, PolyElement):
            other = PolyElement.constant(other)
        return self + (-other)

    def __rsub__(self, other) -> PolyElement:
        return (-self) + other

    def scale(self, c) -> PolyElement:
        if c == 0:
            return PolyElement()
        return PolyElement({e: v * c for e, v in self.terms.items()})

    def __mul__(self, other) -> PolyElement:
        if not isinstance(other, PolyElement):
            return self.scale(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _add_exp(e1, e2)
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return PolyElement(out)

    def __rmul__(self, other) -> PolyElement:
        return self.scale(other)

    def __truediv__(self, c) -> PolyElement:
        if isinstance(c, (float, complex)):
            return self.scale(1 / c)
        if isinstance(c, (int, Fraction)):
            return self.scale(Fraction(1) / c)
        return self.scale(c.invert())

    def __pow__(self, k: int) -> PolyElement:
        out = PolyElement.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyElement):
            other = PolyElement.constant(other)
        if self.terms.keys() != other.terms.keys():
            return False
        return all(self.terms[e] == other.terms[e] for e in self.terms)

    def __hash__(self):
        raise TypeError("PolyElement is not hashable")

    def is_zero(self) -> bool:
        return not self.terms

    # structure
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def homogeneous_part(self, d: int) -> PolyElement:
        return PolyElement._trusted({e: c for e, c in self.terms.items() if sum(e) == d})

    def derivative(self, k: int) -> PolyElement:
        out = {}
        for e, c in self.terms.items():
            m = e[k]
            if m:
                ne = list(e)
                ne[k] = m - 1
                out[tuple(ne)] = c * m
        return PolyElement._trusted(out)

    def map_coefficients(self, fn) -> PolyElement:
        return PolyElement({e: fn(c) for e, c in self.terms.items()})

    def conjugate(self) -> PolyElement:
        return self.map_coefficients(lambda c: c.conjugate() if hasattr(c, "conjugate") else c)

    # evaluation
    def _arrays(self):
        if self._numeric is None:
            exps = np.array(list(self.terms.keys()), dtype=np.int64).reshape(-1, DIM)
            coefs = np.array([complex(c) for c in self.terms.values()], dtype=complex)
            self._numeric = (exps, coefs)
        return self._numeric

    def eval_coords(self, xs):
        """Evaluate at coordinate vectors ``xs`` of shape ``(..., 8)``."""
        xs = np.asarray(xs)
        if not self.terms:
            return np.zeros(xs.shape[:-1], dtype=complex)
        exps, coefs = self._arrays()
        maxdeg = int(exps.max()) if exps.size else 0
        powers = np.ones((maxdeg + 1,) + xs.shape, dtype=complex)
        for k in range(1, maxdeg + 1):
            powers[k] = powers[k - 1] * xs
        out = np.zeros(xs.shape[:-1], dtype=complex)
        for e, c in zip(exps, coefs):
            term = np.full(xs.shape[:-1], c, dtype=complex)
            for k in np.nonzero(e)[0]:
                term = term * powers[e[k], ..., k]
            out += term
        return out

    def eval_exact(self, coords):
        """Exact evaluation at a sequence of 8 exact coordinates."""
        total = 0
        for e, c in self.terms.items():
            term = c
            for k, m in enumerate(e):
                if m:
                    term = term * coords[k] ** m
            total = total + term
        return total

    # text
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-m for m in t[0])))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            factors = [f"x{k + 1}" if m == 1 else f"x{k + 1}^{m}" for k, m in enumerate(e) if m]
            parts.append("*".join([f"({_fmt_coef(c)})"] + factors))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"PolyElement({str(self)!r})"


def coordinate(k: int) -> PolyElement:
    """The coordinate function ``x_{k+1}``."""
    return PolyElement._trusted({_unit_exp(k): 1})


def pointwise_mul(f: PolyElement, h: PolyElement) -> PolyElement:
    return f * h


@lru_cache(maxsize=None)
def _poisson_matrix():
    """``P[j][k] = {x_j, x_k} = sum_l c^l_{kj} x_l`` from the Gell-Mann constants."""
    sc = structure_constants("GellMann")
    return tuple(
        tuple(PolyElement({_unit_exp(l): c for l, c in sc[(k, j)].items()}) for k in range(DIM))
        for j in range(DIM)
    )


def kaks_bracket(f: PolyElement, h: PolyElement) -> PolyElement:
    """Lie-Poisson bracket extended from the coordinate brackets as a biderivation."""
    P = _poisson_matrix()
    df = [f.derivative(j) for j in range(DIM)]
    dh = [h.derivative(k) for k in range(DIM)]
    total = PolyElement()
    for k in range(DIM):
        if dh[k].is_zero():
            continue
        acc = PolyElement()
        for j in range(DIM):
            if df[j].is_zero() or P[j][k].is_zero():
                continue
            acc = acc + df[j] * P[j][k]
        if not acc.is_zero():
            total = total + acc * dh[k]
    return total


@lru_cache(maxsize=None)
def _tau_cached() -> PolyElement:
    x = [coordinate(k) for k in range(DIM)]
    r3 = R3
    t = (
        (x[0] ** 2 + x[1] ** 2 + x[2] ** 2) * x[7] * 6
        - x[7] ** 3 * 2
        + (x[0] * (x[3] * x[5] + x[4] * x[6]) - x[1] * (x[3] * x[6] - x[4] * x[5])) * (6 * r3)
        - (x[3] ** 2 + x[4] ** 2 + x[5] ** 2 + x[6] ** 2) * x[7] * 3
        + x[2] * (x[3] ** 2 + x[4] ** 2 - x[5] ** 2 - x[6] ** 2) * (3 * r3)
    )
    return t


def tau() -> PolyElement:
    """The cubic invariant separating orbits on the unit sphere."""
    return _tau_cached()


def tau_on_arc(x: float, y: float) -> float:
    return 2 * x ** 3 + 3 * x ** 2 * y - 3 * x * y ** 2 - 2 * y ** 3


def x_coords(X):
    """Coordinates ``x_k = -tr(E_k X)``; exact for exact 3x3 input, else numeric.

    Numeric input may be a single ``(3, 3)`` array or a stack ``(n, 3, 3)``.
    """
    if isinstance(X, np.ndarray):
        vals = -np.einsum("kab,...ba->...k", E_NUM, X)
        return vals
    E = gellmann_basis()
    return [-mat_trace(mat_mul(E[k], X)) for k in range(DIM)]


def evaluate(f: PolyElement, X):
    """Value of ``f`` at a matrix point (exact or numeric)."""
    if isinstance(X, np.ndarray):
        return f.eval_coords(x_coords(X))
    return to_exact(f.eval_exact(x_coords(X)))


def chi(orbit: RationalOrbit):
    """``tau(xi)``: exact when ``xi`` has field coordinates, otherwise a float."""
    xe = orbit.xi_exact()
    if xe is not None:
        v = evaluate(tau(), xe)
        if isinstance(v, GaussQuad):
            if not v.im.is_zero():
                raise ArithmeticError("tau took a non-real value on su(3)")
            v = v.re
        return v
    p, q = orbit.p1, orbit.q1
    n = orbit.norm_int
    return (2 * p ** 3 + 3 * p * p * q - 3 * p * q * q - 2 * q ** 3) / (n * math.sqrt(n))


def check_tau(orbit: RationalOrbit) -> PolyElement:
    """``tau - chi``: vanishes on the orbit through ``xi`` and only there."""
    return tau() - chi(orbit)


@dataclass
class OrbitSample:
    """Sampled points ``Ad_g xi`` of one orbit for a seed-determined Haar bank."""

    orbit: RationalOrbit
    seed: int
    count: int
    points: np.ndarray  # (count, 3, 3)

    @classmethod
    def draw(cls, orbit: RationalOrbit, seed: int = 0, count: int = 512) -> OrbitSample:
        from .irreps import haar_bank

        g = haar_bank(seed, count)
        xi = orbit.xi.matrix()
        pts = g @ xi @ np.conj(np.swapaxes(g, -1, -2))
        return cls(orbit, seed, count, pts)

    def coords(self) -> np.ndarray:
        return np.real(x_coords(self.points))

    def to_json(self) -> str:
        return json.dumps({"seed": self.seed, "count": self.count,
                           "p1": self.orbit.p1, "q1": self.orbit.q1}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> OrbitSample:
        d = json.loads(text)
        return cls.draw(RationalOrbit(d["p1"], d["q1"]), d["seed"], d["count"])


def sup_norm_estimate(f: PolyElement, sample: OrbitSample) -> float:
    if sample.count == 0 or len(sample.points) == 0:
        raise ValueError("sup-norm estimate needs a nonempty sample")
    return float(np.max(np.abs(f.eval_coords(sample.coords()))))
