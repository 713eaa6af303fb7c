"""The universal enveloping algebra of sl(3) in PBW normal form.

Elements are sparse maps from exponent vectors ``(m_1..m_8)`` (meaning the
ordered monomial ``e_1^m_1 ... e_8^m_8``) to exact coefficients.  Products
are normal ordered by inserting generators from the right: ``e_j`` is bubbled
into an ordered monomial through ``e_j e_k = e_k e_j + [e_j, e_k]``, with
results memoized per ``(j, monomial)``.

The map ``beta`` sends an ordered monomial to the product of the linear
functions ``l_j(X) = tr(e_j X)`` written in the Gell-Mann coordinates.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from itertools import permutations

from .polyalg import ZERO_EXP, PolyElement, _add_exp, _fmt_coef, _unit_exp, tau
from .scalarfield import to_exact
from .sl3core import DIM, gt_basis, structure_constants

__all__ = [
    "UeaElement",
    "generator",
    "one",
    "word_to_exps",
    "exps_to_word",
    "normal_order",
    "normal_order_random",
    "multiply",
    "commutator",
    "project_degree",
    "beta",
    "beta_d",
    "beta_ell",
    "ell",
    "symmetrize",
    "cubic_casimir",
    "parse_uea",
    "random_element",
    "two_t3",
    "two_u3",
    "beta_at_weight",
]


def word_to_exps(word) -> tuple:
    e = [0] * DIM
    for j in word:
        e[j] += 1
    return tuple(e)


def exps_to_word(exps) -> tuple:
    return tuple(j for j, m in enumerate(exps) for _ in range(m))


class UeaElement:
    """Linear combination of ordered PBW monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {e: c for e, c in (terms or {}).items() if c != 0}

    @classmethod
    def _trusted(cls, terms: dict) -> UeaElement:
        obj = cls.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def scalar(cls, c) -> UeaElement:
        return cls({ZERO_EXP: c})

    def __add__(self, other) -> UeaElement:
        if not isinstance(other, UeaElement):
            other = UeaElement.scalar(other)
        out = dict(self.terms)
        _accumulate(out, other.terms, 1)
        return UeaElement._trusted(out)

    __radd__ = __add__

    def __neg__(self) -> UeaElement:
        return UeaElement._trusted({e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> UeaElement:
        if not isinstance(other, UeaElement):
            other = UeaElement.scalar(other)
        return self + (-other)

    def __rsub__(self, other) -> UeaElement:
        return (-self) + other

    def scale(self, c) -> UeaElement:
        if c == 0:
            return UeaElement()
        return UeaElement({e: v * c for e, v in self.terms.items()})

    def __mul__(self, other) -> UeaElement:
        if isinstance(other, UeaElement):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other) -> UeaElement:
        return self.scale(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, UeaElement):
            other = UeaElement.scalar(other)
        if self.terms.keys() != other.terms.keys():
            return False
        return all(self.terms[e] == other.terms[e] for e in self.terms)

    def __hash__(self):
        raise TypeError("UeaElement is not hashable")

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-m for m in t[0])))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            gens = [f"e{j + 1}" for j in exps_to_word(e)]
            parts.append("*".join([f"({_fmt_coef(c)})"] + gens))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"UeaElement({str(self)!r})"


def _accumulate(out: dict, terms: dict, factor) -> None:
    for e, c in terms.items():
        v = c * factor if factor != 1 else c
        old = out.get(e)
        if old is not None:
            v = old + v
        if v == 0:
            out.pop(e, None)
        else:
            out[e] = v


def generator(j: int) -> UeaElement:
    """The basis element ``e_{j+1}``."""
    return UeaElement._trusted({_unit_exp(j): 1})


def one() -> UeaElement:
    return UeaElement.scalar(1)


def _brackets(sc=None):
    return (sc or structure_constants("GT")).table


_LEFT_CACHE: dict = {}


def _left_mul(j: int, mono: tuple) -> dict:
    """Normal form of ``e_j * mono`` for an ordered monomial ``mono``."""
    key = (j, mono)
    hit = _LEFT_CACHE.get(key)
    if hit is not None:
        return hit
    k = next((i for i, m in enumerate(mono) if m), None)
    if k is None or j <= k:
        res = {_add_exp(mono, _unit_exp(j)): 1}
    else:
        rest = list(mono)
        rest[k] -= 1
        rest = tuple(rest)
        res: dict = {}
        # e_j e_k rest = e_k (e_j rest) + [e_j, e_k] rest
        for m1, c1 in _left_mul(j, rest).items():
            _accumulate(res, _left_mul(k, m1), c1)
        for l, cl in _brackets()[(j, k)].items():
            _accumulate(res, _left_mul(l, rest), cl)
    _LEFT_CACHE[key] = res
    return res


def _left_mul_terms(j: int, terms: dict) -> dict:
    out: dict = {}
    for mono, c in terms.items():
        _accumulate(out, _left_mul(j, mono), c)
    return out


def normal_order(word) -> UeaElement:
    """PBW normal form of the word ``e_{w_0} e_{w_1} ...`` (0-based indices)."""
    terms = {ZERO_EXP: 1}
    for j in reversed(tuple(word)):
        terms = _left_mul_terms(j, terms)
    return UeaElement._trusted(terms)


def normal_order_random(word, rng: random.Random, sc=None) -> UeaElement:
    """Normal form by rewriting a randomly chosen out-of-order adjacent pair each step.

    Shares nothing with :func:`normal_order` except the structure constants, so
    agreement of the two is a confluence check.
    """
    table = _brackets(sc)
    pending = {tuple(word): 1}
    done: dict = {}
    while pending:
        w, c = pending.popitem()
        descents = [i for i in range(len(w) - 1) if w[i] > w[i + 1]]
        if not descents:
            _accumulate(done, {word_to_exps(w): c}, 1)
            continue
        i = rng.choice(descents)
        a, b = w[i], w[i + 1]
        targets = [(w[:i] + (b, a) + w[i + 2:], c)]
        for l, cl in table[(a, b)].items():
            targets.append((w[:i] + (l,) + w[i + 2:], c * cl))
        for t, ct in targets:
            old = pending.get(t)
            v = ct if old is None else old + ct
            if v == 0:
                pending.pop(t, None)
            else:
                pending[t] = v
    return UeaElement._trusted(done)


_MONO_CACHE: dict = {}


def _mono_mul(a: tuple, b: tuple) -> dict:
    key = (a, b)
    hit = _MONO_CACHE.get(key)
    if hit is None:
        terms = {b: 1}
        for j in reversed(exps_to_word(a)):
            terms = _left_mul_terms(j, terms)
        hit = _MONO_CACHE[key] = terms
    return hit


def multiply(u: UeaElement, v: UeaElement) -> UeaElement:
    out: dict = {}
    for a, ca in u.terms.items():
        for b, cb in v.terms.items():
            _accumulate(out, _mono_mul(a, b), ca * cb)
    return UeaElement._trusted(out)


def commutator(u: UeaElement, v: UeaElement) -> UeaElement:
    return multiply(u, v) - multiply(v, u)


def project_degree(u: UeaElement, d: int) -> UeaElement:
    if d < 0:
        raise ValueError("degree must be non-negative")
    return UeaElement._trusted({e: c for e, c in u.terms.items() if sum(e) == d})


# -- beta and symmetrization ----------------------------------------------------

@lru_cache(maxsize=None)
def ell(j: int) -> PolyElement:
    """``l_j(X) = tr(e_j X)`` in Gell-Mann coordinates: ``sum_k tr(e_j E_k) x_k``."""
    gram = gt_basis().gram_to_E
    return PolyElement({_unit_exp(k): gram[j][k] for k in range(DIM)})


_ELL_MONO: dict = {ZERO_EXP: PolyElement.constant(1)}


def _ell_monomial(exps: tuple) -> PolyElement:
    hit = _ELL_MONO.get(exps)
    if hit is None:
        j = max(i for i, m in enumerate(exps) if m)
        rest = list(exps)
        rest[j] -= 1
        hit = _ell_monomial(tuple(rest)) * ell(j)
        _ELL_MONO[exps] = hit
    return hit


def beta(u: UeaElement) -> PolyElement:
    """Polynomial in ``x_1..x_8`` obtained by replacing ``e_j`` with ``l_j``."""
    out = PolyElement()
    for e, c in u.terms.items():
        out = out + _ell_monomial(e).scale(c)
    return out


def beta_ell(u: UeaElement) -> PolyElement:
    """``beta`` written in the ``l`` coordinates, where it keeps exponents unchanged.

    The returned polynomial's variable ``k`` stands for ``l_{k+1}``.
    """
    return PolyElement(dict(u.terms))


def beta_d(u: UeaElement, d: int | None = None) -> PolyElement:
    if d is None:
        d = u.degree()
    return beta(project_degree(u, d))


@lru_cache(maxsize=None)
def _x_in_ell():
    """``x_k = sum_j (G^{-1})_{kj} l_j`` as polynomials in the ``l`` variables."""
    inv = gt_basis().gram_inverse
    return tuple(PolyElement({_unit_exp(j): inv[k][j] for j in range(DIM)}) for k in range(DIM))


def to_ell_coordinates(f: PolyElement) -> PolyElement:
    xs = _x_in_ell()
    out = PolyElement()
    powers: dict = {}
    for e, c in f.terms.items():
        term = PolyElement.constant(c)
        for k, m in enumerate(e):
            if m:
                key = (k, m)
                if key not in powers:
                    powers[key] = xs[k] ** m
                term = term * powers[key]
        out = out + term
    return out


_SYM_CACHE: dict = {}


def _symmetrized_monomial(exps: tuple) -> dict:
    hit = _SYM_CACHE.get(exps)
    if hit is None:
        word = exps_to_word(exps)
        orders = set(permutations(word))
        acc: dict = {}
        for w in orders:
            _accumulate(acc, normal_order(w).terms, 1)
        scale = Fraction(1, len(orders))
        hit = {e: c * scale for e, c in acc.items()}
        _SYM_CACHE[exps] = hit
    return hit


def symmetrize(f: PolyElement) -> UeaElement:
    """Average over generator orderings of each ``l``-monomial of ``f``."""
    g = to_ell_coordinates(f)
    out: dict = {}
    for e, c in g.terms.items():
        _accumulate(out, _symmetrized_monomial(e), c)
    return UeaElement._trusted(out)


@lru_cache(maxsize=None)
def _cubic_casimir_terms():
    return dict(symmetrize(tau()).terms)


def cubic_casimir() -> UeaElement:
    """Symmetrization of the cubic invariant; central in the enveloping algebra."""
    return UeaElement(dict(_cubic_casimir_terms()))


def parse_uea(text: str) -> UeaElement:
    """Inverse of ``str(UeaElement)``."""
    from .scalarfield import parse_gauss

    text = text.strip()
    if text == "0":
        return UeaElement()
    out = UeaElement()
    depth = 0
    start = 0
    chunks = []
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "+" and depth == 0 and text[i - 1] == " ":
            chunks.append(text[start:i])
            start = i + 1
    chunks.append(text[start:])
    for chunk in chunks:
        chunk = chunk.strip()
        if not chunk.startswith("("):
            raise ValueError(f"bad term {chunk!r}")
        depth, close = 0, None
        for i, ch in enumerate(chunk):
            depth += ch == "("
            depth -= ch == ")"
            if depth == 0:
                close = i
                break
        coef_text = chunk[1:close]
        rest = chunk[close + 1:]
        gens = [g for g in rest.split("*") if g]
        word = [int(g[1:]) - 1 for g in gens]
        if "r2" in coef_text or "i*" in coef_text:
            coef = to_exact(parse_gauss(coef_text))
        else:
            coef = Fraction(coef_text)
            coef = coef.numerator if coef.denominator == 1 else coef
        out = out + normal_order(word).scale(coef)
    return out


def random_element(rng: random.Random, max_degree: int = 3, n_terms: int = 3,
                   coef_bound: int = 3) -> UeaElement:
    """Sum of random words of length <= ``max_degree`` with small integer weights.

    At least one word has length ``max_degree`` so the degree is as requested
    unless cancellation occurs.
    """
    out = UeaElement()
    for i in range(n_terms):
        length = max_degree if i == 0 else rng.randint(0, max_degree)
        word = [rng.randrange(DIM) for _ in range(length)]
        c = rng.choice([k for k in range(-coef_bound, coef_bound + 1) if k])
        out = out + normal_order(word).scale(c)
    return out


def two_t3() -> UeaElement:
    """``2 T_3 = (sqrt2/2) e_7 + (sqrt6/2) e_8``."""
    from .scalarfield import R2, R6

    return UeaElement({_unit_exp(6): R2 / 2, _unit_exp(7): R6 / 2})


def two_u3() -> UeaElement:
    """``2 U_3 = -sqrt2 e_7``."""
    from .scalarfield import R2

    return UeaElement({_unit_exp(6): -R2})


def beta_at_weight(u: UeaElement, p: int, q: int):
    """Exact value of ``beta[u]`` at ``-i omega_(p,q)``."""
    from .polyalg import x_coords
    from .scalarfield import I
    from .sl3core import DominantWeight, mat_scale

    point = mat_scale(-I, DominantWeight(p, q).exact_matrix())
    return to_exact(beta(u).eval_exact(x_coords(point)))
