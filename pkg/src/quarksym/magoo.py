"""Rational orbits on the unit sphere and gluing of per-orbit symbols.

Integral orbits on a sphere of squared radius ``rho^2`` are the solutions of
``X^2 + XY + Y^2 = rho^2``; primitive solutions ``(p1, q1)`` label rational
orbits.  Finitely many orbits are glued with delta polynomials built from the
cubic invariant: ``d^xi = prod_{xi' != xi} (tau - chi_xi') / M^xi``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .irreps import haar_bank
from .polyalg import PolyElement, chi, tau, x_coords
from .sl3core import RationalOrbit, is_primitive
from .symbols import (
    BEREZIN,
    KINDS,
    OrbitBank,
    PairSymbols,
    fit_slope,
    symbol_values,
)
from .uea import UeaElement

__all__ = [
    "IntegralOrbitSet",
    "enumerate_integral_orbits",
    "RadialChain",
    "radial_chain",
    "chain_from_orbits",
    "primitive_orbits",
    "band_orbits",
    "DeltaPolynomial",
    "Pencil",
    "build_pencil",
    "MagooContext",
    "pencil_symbol",
    "r_weighted_bracket",
    "MagooRun",
    "uniformity_sweep",
    "ILL_CONDITIONED",
]

ILL_CONDITIONED = 1e-6


@dataclass(frozen=True)
class IntegralOrbitSet:
    rho_sq: int
    solutions: tuple

    def rays(self) -> list[RationalOrbit]:
        """Distinct rational orbits through the solutions, in solution order."""
        out = []
        for x, y in self.solutions:
            g = math.gcd(x, y)
            o = RationalOrbit(x // g, y // g)
            if o not in out:
                out.append(o)
        return out

    def rows(self):
        for x, y in self.solutions:
            yield x, y, math.sqrt(2.0 * self.rho_sq / 3.0)


def enumerate_integral_orbits(rho_sq: int) -> IntegralOrbitSet:
    """All non-negative ``(X, Y)`` with ``X^2 + XY + Y^2 = rho_sq``, by brute force."""
    if rho_sq < 1:
        raise ValueError("rho_sq must be a positive integer")
    sols = []
    for x in range(math.isqrt(rho_sq) + 1):
        # Y = (-X + sqrt(4 rho^2 - 3 X^2)) / 2 must be a non-negative integer
        disc = 4 * rho_sq - 3 * x * x
        if disc < 0:
            continue
        root = math.isqrt(disc)
        if root * root != disc or (root - x) % 2:
            continue
        y = (root - x) // 2
        if y >= 0:
            sols.append((x, y))
    return IntegralOrbitSet(rho_sq, tuple(sorted(sols)))


@dataclass
class RadialChain:
    levels: list  # levels[n] is the orbit list of R_{n+1}

    def level(self, n: int) -> list[RationalOrbit]:
        """``R_n`` for ``n >= 1``."""
        return self.levels[n - 1]

    def insertion_level(self, orbit: RationalOrbit) -> int:
        for n, lev in enumerate(self.levels, start=1):
            if orbit in lev:
                return n
        raise KeyError(orbit)

    @property
    def orbits(self) -> list[RationalOrbit]:
        return list(self.levels[-1]) if self.levels else []

    def __len__(self) -> int:
        return len(self.levels)


def chain_from_orbits(orbits) -> RadialChain:
    """Nested levels from an orbit list; orbits of equal radius enter together."""
    ordered = sorted(orbits, key=lambda o: (o.norm_int, o.p1, o.q1))
    levels, current = [], []
    i = 0
    while i < len(ordered):
        n = ordered[i].norm_int
        while i < len(ordered) and ordered[i].norm_int == n:
            current.append(ordered[i])
            i += 1
        levels.append(list(current))
    return RadialChain(levels)


def radial_chain(n_max: int) -> RadialChain:
    """First ``n_max`` levels of the chain over all primitive rays."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    found = []
    levels = 0
    rho_sq = 0
    while levels < n_max:
        rho_sq += 1
        new = [RationalOrbit(x, y) for x, y in enumerate_integral_orbits(rho_sq).solutions
               if is_primitive(x, y)]
        if new:
            found.extend(new)
            levels += 1
    return chain_from_orbits(found)


def primitive_orbits(max_norm: int) -> list[RationalOrbit]:
    """Primitive rays with ``p1^2 + p1 q1 + q1^2 <= max_norm``, sorted by radius."""
    out = []
    for n in range(1, max_norm + 1):
        out.extend(RationalOrbit(x, y) for x, y in enumerate_integral_orbits(n).solutions
                   if is_primitive(x, y))
    return out


def band_orbits(y_lo: float, y_hi: float, max_norm: int) -> list[RationalOrbit]:
    """Primitive rays whose arc parameter ``y = q1/sqrt(norm)`` lies in the band."""
    return [o for o in primitive_orbits(max_norm) if y_lo <= o.xi.y <= y_hi]


# -- delta polynomials ----------------------------------------------------------------

@dataclass
class DeltaPolynomial:
    """``prod_{xi'} (tau - chi_xi') / M`` kept in factored form."""

    orbit: RationalOrbit
    others: tuple  # chi values of the other orbits
    normalizer: object
    chi_self: object

    def evaluate_tau(self, tau_values) -> np.ndarray:
        """Value at points with the given ``tau`` values.

        Each factor is divided by its own ``chi_self - chi'`` so intermediate
        products stay near the scale of the final result.
        """
        t = np.asarray(tau_values, dtype=float)
        out = np.ones_like(t)
        for c in self.others:
            out = out * ((t - float(c)) / (float(self.chi_self) - float(c)))
        return out

    def expand(self) -> PolyElement:
        """Expanded polynomial; exact when every ``chi`` is exact."""
        t = tau()
        out = PolyElement.constant(1)
        for c in self.others:
            out = out * (t - c)
        return out / self.normalizer

    @property
    def ill_conditioned(self) -> bool:
        return abs(float(self.normalizer)) < ILL_CONDITIONED


@dataclass
class Pencil:
    orbits: list
    chis: dict
    deltas: dict
    normalizers: dict

    @property
    def ill_conditioned(self) -> list:
        return [o for o in self.orbits if self.deltas[o].ill_conditioned]


def build_pencil(orbits) -> Pencil:
    orbits = list(orbits)
    if len(orbits) < 2:
        raise ValueError("a pencil needs at least two orbits")
    if len(set(orbits)) != len(orbits):
        raise ValueError("duplicate orbits in pencil")
    chis = {o: chi(o) for o in orbits}
    vals = [float(c) for c in chis.values()]
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            if vals[i] == vals[j]:
                raise ValueError("two orbits share the same tau value")
    deltas, norms = {}, {}
    for o in orbits:
        others = tuple(chis[p] for p in orbits if p != o)
        m = 1
        for c in others:
            m = m * (chis[o] - c)
        norms[o] = m
        deltas[o] = DeltaPolynomial(o, others, m, chis[o])
    return Pencil(orbits, chis, deltas, norms)


# -- glued symbols ------------------------------------------------------------------

class MagooContext:
    """Orbit banks sharing one Haar bank, plus ``tau`` at every point."""

    def __init__(self, orbits, seed: int = 0, count: int = 512):
        self.orbits = list(orbits)
        self.seed = seed
        self.count = count
        g = haar_bank(seed, count)
        self.banks = {o: OrbitBank.build(o, seed, count, g=g) for o in self.orbits}
        t = tau()
        self.tau_values = {o: np.real(t.eval_coords(np.real(x_coords(b.points))))
                           for o, b in self.banks.items()}
        self._delta_cache: dict = {}

    def delta_values(self, pencil: Pencil, target: RationalOrbit, tag: RationalOrbit) -> np.ndarray:
        key = (tuple(pencil.orbits), target, tag)
        hit = self._delta_cache.get(key)
        if hit is None:
            hit = pencil.deltas[target].evaluate_tau(self.tau_values[tag])
            self._delta_cache[key] = hit
        return hit


def _glue(ctx: MagooContext, pencil: Pencil, tag: RationalOrbit, per_orbit: dict,
          weights: dict | None = None) -> np.ndarray:
    out = np.zeros(ctx.count, dtype=complex)
    for o in pencil.orbits:
        w = per_orbit[o] if weights is None else per_orbit[o] * weights[o]
        out += ctx.delta_values(pencil, o, tag) * w
    return out


def pencil_symbol(u: UeaElement, pencil: Pencil, s: int, ctx: MagooContext,
                  tag: RationalOrbit, kind: str = BEREZIN, index: int | None = None):
    """Glued symbol on the points of orbit ``tag``.

    The per-orbit symbol ``w_xi`` is read at ``Ad_g xi`` for the same bank
    element ``g`` as the tagged point; the delta factor removes every orbit
    other than the tag.
    """
    per = {o: symbol_values(u, ctx.banks[o], s, kind) for o in pencil.orbits}
    vals = _glue(ctx, pencil, tag, per)
    return complex(vals[index]) if index is not None else vals


def r_weighted_bracket(u: UeaElement, v: UeaElement, pencil: Pencil, s: int,
                       ctx: MagooContext, tag: RationalOrbit, kind: str = BEREZIN,
                       index: int | None = None):
    """``sum_xi d^xi r(xi) (w_xi[uv] - w_xi[vu])`` on the points of ``tag``."""
    from .uea import commutator

    comm = commutator(u, v)
    per = {o: symbol_values(comm, ctx.banks[o], s, kind) for o in pencil.orbits}
    vals = _glue(ctx, pencil, tag, per, weights={o: o.r for o in pencil.orbits})
    return complex(vals[index]) if index is not None else vals


@dataclass
class MagooRun:
    kind: str
    orbits: list
    chain: RadialChain
    s_values: tuple
    seed: int
    count: int
    per_orbit_prod: np.ndarray  # (s, orbit)
    per_orbit_bracket: np.ndarray
    prod: np.ndarray  # (level, s, orbit), nan where the orbit is not yet inserted
    bracket: np.ndarray
    ill_conditioned: list = field(default_factory=list)
    delta_error: float = 0.0
    degrees: tuple = (0, 0)

    # summaries
    def per_orbit_slopes(self, which: str = "prod") -> dict:
        data = self.per_orbit_prod if which == "prod" else self.per_orbit_bracket
        return {o.label: fit_slope(self.s_values, data[:, i]) for i, o in enumerate(self.orbits)}

    def cross_orbit_max(self, which: str = "prod") -> np.ndarray:
        data = self.per_orbit_prod if which == "prod" else self.per_orbit_bracket
        return data.max(axis=1)

    def cross_orbit_slope(self, which: str = "prod") -> float:
        return fit_slope(self.s_values, self.cross_orbit_max(which))

    def cutoff_profile(self, s: int, which: str = "prod") -> list[tuple[Fraction, float]]:
        """Max defect at level ``s`` over orbits inside each successive radius cutoff."""
        data = self.per_orbit_prod if which == "prod" else self.per_orbit_bracket
        si = self.s_values.index(s)
        out = []
        for lev in self.chain.levels:
            idx = [self.orbits.index(o) for o in lev]
            out.append((max(o.r_sq for o in lev), float(data[si, idx].max())))
        return out

    def longest_increasing_run(self, s: int, which: str = "prod") -> int:
        vals = [v for _, v in self.cutoff_profile(s, which)]
        best = run = 1
        for a, b in zip(vals, vals[1:]):
            run = run + 1 if b > a else 1
            best = max(best, run)
        return best

    def level_defect(self, n: int, which: str = "prod") -> np.ndarray:
        """Magoo defect at level ``n``: sup over all points of the pencil ``R_n``."""
        data = self.prod if which == "prod" else self.bracket
        return np.nanmax(data[n - 1], axis=1)

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["level", "orbit_p1", "orbit_q1", "s", "s_times_r", "prod_defect", "bracket_defect"])
        for n in range(len(self.chain)):
            for si, s in enumerate(self.s_values):
                for oi, o in enumerate(self.orbits):
                    if np.isnan(self.prod[n, si, oi]):
                        continue
                    w.writerow([n + 1, o.p1, o.q1, s, f"{s * o.r:.12g}",
                                f"{self.prod[n, si, oi]:.12e}", f"{self.bracket[n, si, oi]:.12e}"])
        return buf.getvalue()

    def to_json(self) -> dict:
        def tensor(a):
            return [[[None if np.isnan(v) else float(v) for v in row] for row in mat] for mat in a]

        return {
            "kind": self.kind,
            "seed": self.seed,
            "count": self.count,
            "degrees": list(self.degrees),
            "s_values": list(self.s_values),
            "orbits": [[o.p1, o.q1] for o in self.orbits],
            "levels": [[[o.p1, o.q1] for o in lev] for lev in self.chain.levels],
            "per_orbit_prod": self.per_orbit_prod.tolist(),
            "per_orbit_bracket": self.per_orbit_bracket.tolist(),
            "prod": tensor(self.prod),
            "bracket": tensor(self.bracket),
            "ill_conditioned": [o.label for o in self.ill_conditioned],
            "delta_error": self.delta_error,
            "per_orbit_prod_slopes": self.per_orbit_slopes("prod"),
            "cross_orbit_prod_slope": self.cross_orbit_slope("prod"),
        }


def uniformity_sweep(kind: str, orbits, s_values, u: UeaElement, v: UeaElement,
                     seed: int = 0, count: int = 512, glue: bool = True) -> MagooRun:
    """Per-orbit and glued product/bracket defects over a radial chain of ``orbits``."""
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    orbits = sorted(set(orbits), key=lambda o: (o.norm_int, o.p1, o.q1))
    if len(orbits) < 2:
        raise ValueError("a uniformity sweep needs at least two orbits")
    s_values = tuple(s_values)
    if not s_values:
        raise ValueError("empty s list")
    chain = chain_from_orbits(orbits)
    ctx = MagooContext(orbits, seed, count)
    pairs = {o: PairSymbols(u, v, ctx.banks[o]) for o in orbits}
    d1, d2 = pairs[orbits[0]].d1, pairs[orbits[0]].d2
    d = d1 + d2
    ns, no = len(s_values), len(orbits)
    per_prod = np.zeros((ns, no))
    per_br = np.zeros((ns, no))
    prod = np.full((len(chain), ns, no), np.nan)
    br = np.full((len(chain), ns, no), np.nan)
    ill: list = []
    delta_err = 0.0
    for si, s in enumerate(s_values):
        prod_sym = {o: pairs[o].product_symbol(s, kind) for o in orbits}
        comm_sym = {o: pairs[o].commutator_symbol(s, kind) for o in orbits}
        for oi, o in enumerate(orbits):
            sr = s * o.r
            per_prod[si, oi] = np.max(np.abs(prod_sym[o] / sr ** d - pairs[o].f1f2))
            per_br[si, oi] = np.max(np.abs(comm_sym[o] / sr ** (d - 1) - pairs[o].bracket_limit))
        if not glue:
            continue
        for n, lev in enumerate(chain.levels):
            if len(lev) < 2:
                # a single orbit is its own pencil: the delta is the constant 1
                oi = orbits.index(lev[0])
                prod[n, si, oi] = per_prod[si, oi]
                br[n, si, oi] = per_br[si, oi]
                continue
            pencil = build_pencil(lev)
            if si == 0:
                ill.extend(o for o in pencil.ill_conditioned if o not in ill)
            for o in lev:
                oi = orbits.index(o)
                sr = s * o.r
                glued = _glue(ctx, pencil, o, prod_sym)
                glued_br = _glue(ctx, pencil, o, comm_sym, weights={p: p.r for p in lev}) / o.r
                prod[n, si, oi] = np.max(np.abs(glued / sr ** d - pairs[o].f1f2))
                br[n, si, oi] = np.max(np.abs(glued_br / sr ** (d - 1) - pairs[o].bracket_limit))
                delta_err = max(delta_err, float(np.max(np.abs(glued - prod_sym[o]))
                                                 / max(1.0, np.max(np.abs(prod_sym[o])))))
    return MagooRun(kind, orbits, chain, s_values, seed, count, per_prod, per_br, prod, br,
                    ill, delta_err, (d1, d2))
