"""Numeric irreducible representations of sl(3) and SU(3).

Generator matrices come from Gelfand-Tsetlin patterns.  The standard
(non-normalized) gl(3) matrix elements are computed first and then made
orthonormal by replacing each raising/lowering pair ``(a, b)`` by
``sqrt(a*b)``.  Every irrep is certified after construction: commutators,
highest weight, and Casimir scalar-ness must all hold or the build fails.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .sl3core import DIM, E_NUM, e_NUM, structure_constants

__all__ = [
    "DIM_CAP",
    "CACHE_ENV",
    "Irrep",
    "IrrepCertificationError",
    "irrep_dim",
    "gt_patterns",
    "build_irrep",
    "rho_word",
    "GroupSample",
    "haar_su3",
    "haar_bank",
    "su3_log",
    "group_rep",
    "sample_group",
    "ladder_trace_identity",
    "ladder_trace_rhs",
    "mu_n",
    "vplus_power_norm_sq",
]

DIM_CAP = 1000
CACHE_ENV = "QUARKSYM_IRREP_CACHE"
FIDELITY_TOL = 1e-10
CASIMIR_TOL = 1e-10


class IrrepCertificationError(RuntimeError):
    pass


def irrep_dim(p: int, q: int) -> int:
    return (p + 1) * (q + 1) * (p + q + 2) // 2


def gt_patterns(p: int, q: int) -> list[tuple[int, int, int]]:
    """Patterns ``(m12, m22, m11)`` under the top row ``(p+q, q, 0)``."""
    top = (p + q, q, 0)
    out = []
    for m12 in range(top[1], top[0] + 1):
        for m22 in range(top[2], top[1] + 1):
            for m11 in range(m22, m12 + 1):
                out.append((m12, m22, m11))
    return out


@dataclass
class Irrep:
    p: int
    q: int
    dim: int
    rho: list  # eight sparse real matrices, images of e_1..e_8
    hw_index: int
    patterns: list = field(repr=False, default_factory=list)
    certificate: dict = field(default_factory=dict)

    @property
    def label(self) -> str:
        return f"({self.p},{self.q})"

    @property
    def dense(self) -> np.ndarray:
        """Stack of the eight generator images, shape ``(8, dim, dim)``."""
        if not hasattr(self, "_dense"):
            self._dense = np.array([m.toarray() for m in self.rho])
        return self._dense

    def hw_vector(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[self.hw_index] = 1.0
        return v

    def algebra_element(self, coeffs) -> np.ndarray:
        """``rho(sum_j c_j e_j)`` as a dense matrix."""
        return np.tensordot(np.asarray(coeffs), self.dense, axes=1)


def _gl3_generators(p: int, q: int):
    """Orthonormal-basis matrices of E11, E22, E33, E12, E23 (real, sparse)."""
    pats = gt_patterns(p, q)
    index = {pat: i for i, pat in enumerate(pats)}
    n = len(pats)
    top = (p + q, q, 0)
    l3 = [top[0], top[1] - 1, top[2] - 2]
    diag = np.zeros((3, n))
    rows12, cols12, vals12 = [], [], []
    rows23, cols23, vals23 = [], [], []
    for i, (m12, m22, m11) in enumerate(pats):
        s1 = m11
        s2 = m12 + m22
        diag[0, i] = s1
        diag[1, i] = s2 - s1
        diag[2, i] = sum(top) - s2
        l2 = [m12, m22 - 1]
        l1 = m11
        # E12 raises m11; the matching E21 coefficient is 1
        tgt = (m12, m22, m11 + 1)
        if tgt in index:
            a = -Fraction((l1 - l2[0]) * (l1 - l2[1]))
            b = Fraction(1)
            rows12.append(index[tgt])
            cols12.append(i)
            vals12.append(math.sqrt(a * b))
        # E23 raises m12 or m22
        for k in range(2):
            new = [m12, m22]
            new[k] += 1
            tgt = (new[0], new[1], m11)
            if tgt not in index:
                continue
            lk = l2[k]
            other = l2[1 - k]
            a = -Fraction((lk - l3[0]) * (lk - l3[1]) * (lk - l3[2]), lk - other)
            # E32 on the target lowers the same entry back
            lk_t = lk + 1
            other_t = other
            b = Fraction(lk_t - l1, lk_t - other_t)
            prod = a * b
            if prod <= 0:
                raise IrrepCertificationError(f"non-positive GT product at {(m12, m22, m11)}")
            rows23.append(index[tgt])
            cols23.append(i)
            vals23.append(math.sqrt(prod))
    e12 = sp.csr_matrix((vals12, (rows12, cols12)), shape=(n, n))
    e23 = sp.csr_matrix((vals23, (rows23, cols23)), shape=(n, n))
    return pats, diag, e12, e23


def _certify(irr: Irrep, gl_diag) -> dict:
    sc = structure_constants("GT").as_numpy()
    rho = irr.rho
    norms = [sp.linalg.norm(m) for m in rho]
    worst = 0.0
    for j in range(DIM):
        for k in range(j + 1, DIM):
            lhs = rho[j] @ rho[k] - rho[k] @ rho[j]
            rhs = sum((sc[l, j, k] * rho[l] for l in range(DIM) if sc[l, j, k] != 0),
                      sp.csr_matrix(lhs.shape))
            diff = lhs - rhs
            res = sp.linalg.norm(diff) if diff.nnz else 0.0
            worst = max(worst, res / (norms[j] * norms[k]))
    hw = irr.hw_index
    annihil = max(abs(rho[j][:, [hw]]).max() if rho[j][:, [hw]].nnz else 0.0 for j in (3, 4, 5))
    w2t3 = gl_diag[0, hw] - gl_diag[1, hw]
    w2u3 = gl_diag[1, hw] - gl_diag[2, hw]
    cas = sum((m @ m.T for m in rho), sp.csr_matrix(rho[0].shape)).toarray()
    mean = float(np.mean(np.diag(cas)))
    offdiag = float(np.max(np.abs(cas - mean * np.eye(irr.dim)))) / abs(mean)
    cert = {
        "bracket_fidelity": float(worst),
        "hw_annihilation": float(annihil),
        "hw_weight": (float(w2t3), float(w2u3)),
        "casimir": mean,
        "casimir_offdiag": offdiag,
    }
    ok = (
        worst <= FIDELITY_TOL
        and annihil <= 1e-12
        and abs(w2t3 - irr.p) < 1e-12
        and abs(w2u3 - irr.q) < 1e-12
        and offdiag <= CASIMIR_TOL
    )
    if not ok:
        raise IrrepCertificationError(f"irrep {irr.label} failed certification: {cert}")
    return cert


def _cache_path(p: int, q: int) -> Path | None:
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    return Path(root) / f"irrep_{p}_{q}.npz"


@lru_cache(maxsize=64)
def build_irrep(p: int, q: int, dim_cap: int = DIM_CAP) -> Irrep:
    """Certified irrep with highest weight ``(p, q)``."""
    if p < 0 or q < 0:
        raise ValueError("highest weight labels must be non-negative")
    if (p, q) == (0, 0):
        raise ValueError("the trivial representation is excluded")
    d = irrep_dim(p, q)
    if d > dim_cap:
        raise ValueError(f"dim {d} of ({p},{q}) exceeds the cap {dim_cap}")
    cache = _cache_path(p, q)
    pats, gl_diag, e12, e23 = _gl3_generators(p, q)
    if len(pats) != d:
        raise IrrepCertificationError(f"pattern count {len(pats)} != {d}")
    if cache is not None and cache.exists():
        with np.load(cache) as z:
            rho = [sp.csr_matrix(z[f"rho{j}"]) for j in range(DIM)]
    else:
        e21 = e12.T.tocsr()
        e32 = e23.T.tocsr()
        e13 = (e12 @ e23 - e23 @ e12).tocsr()
        e31 = (e32 @ e21 - e21 @ e32).tocsr()
        h1, h2, h3 = (sp.diags(gl_diag[k]) for k in range(3))
        rho = [
            e21,
            -e32,
            e31,
            -e12,
            e23,
            e13,
            (-math.sqrt(2.0) / 2.0) * (h2 - h3),
            math.sqrt(2.0 / 3.0) * (h1 - 0.5 * h2 - 0.5 * h3),
        ]
        rho = [sp.csr_matrix(m, dtype=float) for m in rho]
        for m in rho:
            m.eliminate_zeros()
        if cache is not None:
            cache.parent.mkdir(parents=True, exist_ok=True)
            np.savez_compressed(cache, **{f"rho{j}": rho[j].toarray() for j in range(DIM)})
    hw = pats.index((p + q, q, p + q))
    irr = Irrep(p, q, d, rho, hw, pats)
    irr.certificate = _certify(irr, gl_diag)
    return irr


def rho_word(irrep: Irrep, u) -> np.ndarray:
    """Image of a UEA element: monomials map to ordered matrix products."""
    out = np.zeros((irrep.dim, irrep.dim), dtype=complex)
    cache: dict = {}
    for exps, coef in u.terms.items():
        key = exps
        if key not in cache:
            m = sp.identity(irrep.dim, format="csr")
            for j, mult in enumerate(exps):
                for _ in range(mult):
                    m = m @ irrep.rho[j]
            cache[key] = m
        out += complex(coef) * cache[key].toarray()
    return out


# -- group elements ----------------------------------------------------------

def haar_su3(rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))) / math.sqrt(2.0)
    return _haar_from_gaussian(z[None])[0]


def _haar_from_gaussian(z: np.ndarray) -> np.ndarray:
    qm, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    qm = qm * (d / np.abs(d))[..., None, :]
    det = np.linalg.det(qm)
    return qm / (det ** (1.0 / 3.0))[..., None, None]


@lru_cache(maxsize=16)
def _haar_bank_cached(seed: int, count: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((count, 3, 3)) + 1j * rng.standard_normal((count, 3, 3))) / math.sqrt(2.0)
    g = _haar_from_gaussian(z)
    g.setflags(write=False)
    return g


def haar_bank(seed: int = 0, count: int = 512) -> np.ndarray:
    """Seed-deterministic stack of Haar-random SU(3) matrices, shape ``(count, 3, 3)``."""
    return _haar_bank_cached(int(seed), int(count))


def su3_log(g: np.ndarray) -> np.ndarray:
    """Traceless anti-Hermitian logarithm of a special unitary 3x3 matrix."""
    t, z = scipy.linalg.schur(g, output="complex")
    theta = np.angle(np.diag(t))
    # det g = 1 forces sum(theta) to be a multiple of 2*pi; shift branches to zero it
    k = int(round(theta.sum() / (2 * math.pi)))
    order = np.argsort(theta)
    if k > 0:
        for idx in order[::-1][:k]:
            theta[idx] -= 2 * math.pi
    elif k < 0:
        for idx in order[: -k]:
            theta[idx] += 2 * math.pi
    return z @ np.diag(1j * theta) @ z.conj().T


def _e_coeffs(x: np.ndarray) -> np.ndarray:
    """Coordinates of ``x`` in the orthonormal ladder basis: ``tr(e_j^dagger x)``."""
    return np.einsum("jba,ba->j", e_NUM.conj(), x)


def group_rep(irrep: Irrep, g: np.ndarray) -> np.ndarray:
    """``rho(g) = exp(rho(log g))``."""
    x = su3_log(g)
    return scipy.linalg.expm(irrep.algebra_element(_e_coeffs(x)))


def adjoint_matrix(g: np.ndarray) -> np.ndarray:
    """``Ad_g`` in the Gell-Mann basis: entries ``tr(E_k^dagger g E_j g^dagger)``."""
    conj = np.einsum("ab,jbc,dc->jad", g, E_NUM, g.conj())
    return np.real(np.einsum("kba,jba->kj", E_NUM.conj(), conj))


@dataclass
class GroupSample:
    seed: int
    ad: np.ndarray
    rep: np.ndarray | None
    defining: np.ndarray


def sample_group(irrep: Irrep | None, seed: int) -> GroupSample:
    g = haar_su3(np.random.default_rng(seed))
    rep = group_rep(irrep, g) if irrep is not None else None
    return GroupSample(seed=seed, ad=adjoint_matrix(g), rep=rep, defining=g)


def sample_from_matrix(irrep: Irrep | None, g: np.ndarray, seed: int = -1) -> GroupSample:
    rep = group_rep(irrep, g) if irrep is not None else None
    return GroupSample(seed=seed, ad=adjoint_matrix(g), rep=rep, defining=g)


# -- ladder identities on symmetric powers -----------------------------------

def ladder_trace_rhs(p: int, n: int) -> Fraction:
    f = math.factorial
    return (Fraction(n, 4) * Fraction(f(n) * f(n + 1), f(2 * n + 3))
            * Fraction(f(p + n + 2), f(p - n)) * (2 * p + 3))


def ladder_trace_identity(p: int, n: int) -> tuple[float, float]:
    """Matrix-trace side and closed-form side of the ladder trace sum on ``(p, 0)``."""
    if n < 0 or p < 1:
        raise ValueError("need p >= 1 and n >= 0")
    if n > p:
        raise ValueError(f"n={n} exceeds p={p}")
    irr = build_irrep(p, 0)
    rd = irr.dense
    t_minus = rd[0]
    t_plus = -rd[3]
    # 2*T3 + U3 = sqrt(3/2) * e8
    h = math.sqrt(1.5) * rd[7]
    mp = np.linalg.matrix_power
    lhs = 0.0
    for m in range(n + 1):
        w = mp(t_minus, n - m) @ mp(t_plus, n - m) @ mp(t_plus, m) @ mp(t_minus, m)
        lhs += float(np.trace(h @ w))
    return lhs, float(ladder_trace_rhs(p, n))


def mu_n(p: int, n: int) -> float:
    f = math.factorial
    return f(n) / math.sqrt(f(2 * n + 2)) * math.sqrt(Fraction(f(p + n + 2), f(p - n)))


def vplus_power_norm_sq(p: int, n: int) -> float:
    """``tr((V+^n)^dagger V+^n)`` in the irrep ``(p, 0)``."""
    irr = build_irrep(p, 0)
    v = np.linalg.matrix_power(irr.dense[5], n)
    return float(np.trace(v.T @ v))
