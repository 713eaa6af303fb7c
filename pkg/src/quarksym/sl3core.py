"""Concrete su(3) data in the defining representation.

Two bases of sl(3) are used throughout.

* ``E[0..7]``: ``E_j = i*lambda_j/sqrt2`` with the Gell-Mann matrices, an
  orthonormal basis of su(3) for ``<X|Y> = tr(X^dagger Y)``.
* ``e[0..7]``: the ladder basis ``(T-, -U-, V-, -T+, U+, V+, -sqrt2*U3,
  sqrt(2/3)*(2*T3 + U3))``.  Indices 0..2 are lowering, 3..5 raising and
  6..7 Cartan.  It is real and orthonormal for the same inner product.

Indices in code are 0-based; text forms (``e1``, ``x3``) are 1-based.
Exact matrices are 3x3 tuples of :class:`GaussQuad`; numeric counterparts are
complex ``numpy`` arrays of shape ``(8, 3, 3)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .scalarfield import GaussQuad, QuadScalar, R2, R3, R6, quad_sqrt

__all__ = [
    "DIM",
    "LOWERING",
    "RAISING",
    "CARTAN",
    "gellmann_basis",
    "gt_basis",
    "GtBasis",
    "StructureConstants",
    "structure_constants",
    "DominantWeight",
    "WeylPoint",
    "RationalOrbit",
    "weyl_point",
    "weyl_x",
    "fiber_radius",
    "morse_value",
    "rational_orbit",
    "is_primitive",
    "E_NUM",
    "e_NUM",
    "mat_mul",
    "mat_add",
    "mat_scale",
    "mat_dagger",
    "mat_trace",
    "commutator3",
    "mat_to_numpy",
]

DIM = 8
LOWERING = (0, 1, 2)
RAISING = (3, 4, 5)
CARTAN = (6, 7)

_Z = GaussQuad(0)
_ONE = GaussQuad(1)
_I = GaussQuad(0, 1)


# -- exact 3x3 helpers -------------------------------------------------------

def _zeros():
    return [[_Z] * 3 for _ in range(3)]


def _freeze(m):
    return tuple(tuple(GaussQuad.coerce(v) for v in row) for row in m)


def unit(i: int, j: int, coef=1):
    m = _zeros()
    m[i][j] = GaussQuad.coerce(coef)
    return _freeze(m)


def diag(*entries):
    m = _zeros()
    for k, v in enumerate(entries):
        m[k][k] = GaussQuad.coerce(v) if not isinstance(v, GaussQuad) else v
    return _freeze(m)


def mat_mul(a, b):
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(3)), _Z) for j in range(3))
        for i in range(3)
    )


def mat_add(a, b):
    return tuple(tuple(a[i][j] + b[i][j] for j in range(3)) for i in range(3))


def mat_scale(c, a):
    return tuple(tuple(a[i][j] * c for j in range(3)) for i in range(3))


def mat_dagger(a):
    return tuple(tuple(a[j][i].conjugate() for j in range(3)) for i in range(3))


def mat_trace(a):
    return a[0][0] + a[1][1] + a[2][2]


def commutator3(a, b):
    return mat_add(mat_mul(a, b), mat_scale(-1, mat_mul(b, a)))


def mat_to_numpy(a) -> np.ndarray:
    return np.array([[complex(v) for v in row] for row in a], dtype=complex)


# -- the two bases ------------------------------------------------------------

@lru_cache(maxsize=None)
def gellmann_basis() -> tuple:
    """``E_j = i*lambda_j/sqrt2`` for the eight Gell-Mann matrices."""
    s = GaussQuad(0, R2 / 2)  # i/sqrt2
    lam = [
        mat_add(unit(0, 1), unit(1, 0)),
        mat_add(unit(0, 1, -_I), unit(1, 0, _I)),
        diag(1, -1, 0),
        mat_add(unit(0, 2), unit(2, 0)),
        mat_add(unit(0, 2, -_I), unit(2, 0, _I)),
        mat_add(unit(1, 2), unit(2, 1)),
        mat_add(unit(1, 2, -_I), unit(2, 1, _I)),
        diag(R3 / 3, R3 / 3, -2 * R3 / 3),
    ]
    return tuple(mat_scale(s, m) for m in lam)


def ladder_operators() -> dict:
    """T, U, V ladder and Cartan operators as exact matrices."""
    half = Fraction(1, 2)
    return {
        "T+": unit(0, 1), "T-": unit(1, 0), "T3": diag(half, -half, 0),
        "U+": unit(1, 2), "U-": unit(2, 1), "U3": diag(0, half, -half),
        "V+": unit(0, 2), "V-": unit(2, 0), "V3": diag(half, 0, -half),
    }


@dataclass(frozen=True)
class GtBasis:
    e: tuple
    gram_to_E: tuple  # gram_to_E[j][k] = tr(e_j E_k)
    gram_inverse: tuple

    def __len__(self) -> int:
        return DIM


@lru_cache(maxsize=None)
def gt_basis() -> GtBasis:
    op = ladder_operators()
    sq23 = R6 / 3  # sqrt(2/3)
    e = (
        op["T-"],
        mat_scale(-1, op["U-"]),
        op["V-"],
        mat_scale(-1, op["T+"]),
        op["U+"],
        op["V+"],
        mat_scale(-R2, op["U3"]),
        mat_scale(sq23, mat_add(op["T3"], op["V3"])),
    )
    E = gellmann_basis()
    gram = tuple(tuple(mat_trace(mat_mul(e[j], E[k])) for k in range(DIM)) for j in range(DIM))
    return GtBasis(e=e, gram_to_E=gram, gram_inverse=exact_inverse(gram))


def exact_inverse(m) -> tuple:
    """Gauss-Jordan inverse over the Gaussian field."""
    n = len(m)
    a = [[GaussQuad.coerce(v) for v in row] + [_ONE if i == j else _Z for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not a[r][col].is_zero()), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col].invert()
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and not a[r][col].is_zero():
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)


def expand(m, basis) -> list:
    """Coordinates of ``m`` in an orthonormal basis: ``tr(B_l^dagger m)``."""
    return [mat_trace(mat_mul(mat_dagger(b), m)) for b in basis]


def inner(a, b):
    return mat_trace(mat_mul(mat_dagger(a), b))


# -- structure constants ------------------------------------------------------

class StructureConstants:
    """``[b_j, b_k] = sum_l c[(j, k)][l] * b_l`` with exact real entries."""

    def __init__(self, table: dict, tag: str):
        self.table = table
        self.tag = tag

    def __getitem__(self, jk) -> dict:
        return self.table[jk]

    def coefficient(self, l: int, j: int, k: int):
        return self.table[(j, k)].get(l, 0)

    def _jacobi_sum(self, i: int, j: int, k: int) -> dict:
        total: dict = {}
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            # [a, [b, c]]
            for m, cm in self.table[(b, c)].items():
                for l, cl in self.table[(a, m)].items():
                    total[l] = total.get(l, 0) + cm * cl
        return total

    @staticmethod
    def _all_triples():
        return [(i, j, k) for i in range(DIM) for j in range(DIM) for k in range(DIM)]

    def jacobi_residual(self, triples=None) -> list:
        """Triples ``(i, j, k)`` whose Jacobi sum fails to vanish exactly."""
        if triples is None:
            triples = self._all_triples()
        return [t for t in triples if any(v != 0 for v in self._jacobi_sum(*t).values())]

    def jacobi_max_residual(self, triples=None) -> float:
        """Largest absolute coefficient of any Jacobi sum, as a float."""
        if triples is None:
            triples = self._all_triples()
        return max((abs(float(v)) for t in triples for v in self._jacobi_sum(*t).values()),
                   default=0.0)

    def antisymmetry_ok(self) -> bool:
        for j in range(DIM):
            for k in range(DIM):
                a, b = self.table[(j, k)], self.table[(k, j)]
                if set(a) != set(b) or any(a[l] != -b[l] for l in a):
                    return False
        return True

    def corrupted(self, j: int, k: int, l: int, delta=Fraction(1, 7)) -> StructureConstants:
        """Copy with one entry shifted, used to exercise failure paths."""
        table = {key: dict(v) for key, v in self.table.items()}
        table[(j, k)][l] = table[(j, k)].get(l, 0) + delta
        table[(k, j)][l] = table[(k, j)].get(l, 0) - delta
        return StructureConstants(table, self.tag + "-corrupted")

    def as_numpy(self) -> np.ndarray:
        """Array ``c[l, j, k]`` of floats."""
        out = np.zeros((DIM, DIM, DIM))
        for (j, k), row in self.table.items():
            for l, v in row.items():
                out[l, j, k] = float(v)
        return out


def _real(v: GaussQuad) -> QuadScalar:
    if not v.im.is_zero():
        raise ArithmeticError("structure constant left the real field")
    return v.re


@lru_cache(maxsize=None)
def structure_constants(basis_tag: str = "GT") -> StructureConstants:
    """Exact structure constants for the ladder (``"GT"``) or Gell-Mann basis."""
    if basis_tag == "GT":
        basis = gt_basis().e
    elif basis_tag == "GellMann":
        basis = gellmann_basis()
    else:
        raise ValueError(f"unknown basis tag {basis_tag!r}")
    table = {}
    for j in range(DIM):
        for k in range(DIM):
            coords = expand(commutator3(basis[j], basis[k]), basis)
            table[(j, k)] = {l: _real(c) for l, c in enumerate(coords) if not c.is_zero()}
    sc = StructureConstants(table, basis_tag)
    if sc.jacobi_residual():
        raise ArithmeticError("Jacobi identity fails for " + basis_tag)
    return sc


E_NUM = np.array([mat_to_numpy(m) for m in gellmann_basis()])
e_NUM = np.array([mat_to_numpy(m) for m in gt_basis().e])


# -- weights and the Weyl arc --------------------------------------------------

@dataclass(frozen=True)
class DominantWeight:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise ValueError("dominant weights have non-negative labels")

    def exact_matrix(self):
        """``omega = p*w1 + q*w2`` with ``-i*w1 = diag(2,-1,-1)/3``."""
        p, q = self.p, self.q
        return diag(GaussQuad(0, Fraction(2 * p + q, 3)),
                    GaussQuad(0, Fraction(q - p, 3)),
                    GaussQuad(0, Fraction(-p - 2 * q, 3)))

    def matrix(self) -> np.ndarray:
        p, q = self.p, self.q
        return 1j * np.diag([(2 * p + q) / 3, (q - p) / 3, (-p - 2 * q) / 3])

    def norm_sq(self) -> Fraction:
        return Fraction(2 * (self.p ** 2 + self.p * self.q + self.q ** 2), 3)


def fundamental_weights() -> tuple:
    E = gellmann_basis()
    w1 = mat_add(mat_scale(R2 / 2, E[2]), mat_scale(R6 / 6, E[7]))
    w2 = mat_scale(R6 / 3, E[7])
    return w1, w2


def weyl_x(y: float) -> float:
    return (-y + math.sqrt(4.0 - 3.0 * y * y)) / 2.0


@dataclass(frozen=True)
class WeylPoint:
    """Point ``xi = (i/sqrt6) diag(2x+y, y-x, -x-2y)`` of the Weyl arc."""

    x: float
    y: float
    exact: tuple | None = field(default=None, compare=False, repr=False)

    def matrix(self) -> np.ndarray:
        x, y = self.x, self.y
        return (1j / math.sqrt(6.0)) * np.diag([2 * x + y, y - x, -x - 2 * y])

    def norm(self) -> float:
        return float(np.sqrt(np.real(np.trace(self.matrix().conj().T @ self.matrix()))))


def weyl_point(y: float) -> WeylPoint:
    if not 0.0 <= y <= 1.0:
        raise ValueError(f"Weyl arc parameter y={y} outside [0, 1]")
    return WeylPoint(weyl_x(y), float(y))


def _check_fiber_domain(y: float):
    if not -1e-15 <= y <= 1.0 / math.sqrt(3.0) + 1e-15:
        raise ValueError(f"y={y} outside [0, 1/sqrt3]")


def fiber_radius(y: float) -> float:
    """Radius of the fiber circle over the arc point with parameter y."""
    _check_fiber_domain(y)
    return math.sqrt(3.0) / 2.0 * y


def morse_value(y: float) -> float:
    _check_fiber_domain(y)
    return math.sqrt(3.0) / 4.0 * y * y


# -- rational orbits ------------------------------------------------------------

def is_primitive(p1: int, q1: int) -> bool:
    return p1 >= 0 and q1 >= 0 and (p1, q1) != (0, 0) and math.gcd(p1, q1) == 1


@dataclass(frozen=True)
class RationalOrbit:
    p1: int
    q1: int

    @property
    def norm_int(self) -> int:
        """``p1^2 + p1*q1 + q1^2``."""
        return self.p1 ** 2 + self.p1 * self.q1 + self.q1 ** 2

    @property
    def r_sq(self) -> Fraction:
        return Fraction(2 * self.norm_int, 3)

    @property
    def r(self) -> float:
        return math.sqrt(2.0 * self.norm_int / 3.0)

    @property
    def xi(self) -> WeylPoint:
        n = math.sqrt(self.norm_int)
        return WeylPoint(self.p1 / n, self.q1 / n, exact=self.xi_exact())

    def omega(self, s: int = 1) -> DominantWeight:
        return DominantWeight(s * self.p1, s * self.q1)

    def xi_exact(self):
        """Exact matrix of xi when ``1/r`` lies in the field, else ``None``."""
        inv_r = quad_sqrt(1 / self.r_sq)
        if inv_r is None:
            return None
        return mat_scale(inv_r, self.omega().exact_matrix())

    def cartan_values(self) -> tuple[float, float]:
        """``tr(e_7 (-i omega))`` and ``tr(e_8 (-i omega))`` for the first weight."""
        p, q = self.p1, self.q1
        return (-(math.sqrt(2.0) / 2.0) * q, math.sqrt(2.0 / 3.0) * (p + q / 2.0))

    @property
    def label(self) -> str:
        return f"({self.p1},{self.q1})"


def rational_orbit(p1: int, q1: int) -> RationalOrbit:
    if (p1, q1) == (0, 0):
        raise ValueError("(0,0) is the zero orbit")
    if not is_primitive(p1, q1):
        g = math.gcd(p1, q1)
        raise ValueError(f"({p1},{q1}) is not primitive; use ({p1 // g},{q1 // g})")
    return RationalOrbit(p1, q1)
