"""Exact arithmetic in Q(sqrt2, sqrt3) and its Gaussian extension.

A :class:`QuadScalar` stores ``a + b*sqrt2 + c*sqrt3 + d*sqrt6`` with rational
``a, b, c, d``.  Internally the four coordinates share one positive
denominator so that products only touch Python integers.

:class:`GaussQuad` pairs two such numbers as ``re + i*im``.  It is the
coefficient type for polynomials whose coefficients involve ``i`` (for example
the coordinate changes between the two Lie algebra bases).

Both types mix with ``int`` and ``Fraction`` exactly and degrade to ``float`` /
``complex`` when combined with floating point values.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational

__all__ = [
    "QuadScalar",
    "GaussQuad",
    "R2",
    "R3",
    "R6",
    "I",
    "quad_sqrt",
    "parse_quad",
    "parse_gauss",
    "to_exact",
]

_SQRT2 = math.sqrt(2.0)
_SQRT3 = math.sqrt(3.0)
_SQRT6 = math.sqrt(6.0)


def _normalize(n0: int, n1: int, n2: int, n3: int, den: int):
    if den == 0:
        raise ZeroDivisionError("zero denominator")
    if den < 0:
        n0, n1, n2, n3, den = -n0, -n1, -n2, -n3, -den
    g = math.gcd(n0, n1, n2, n3, den)
    if g > 1:
        n0 //= g
        n1 //= g
        n2 //= g
        n3 //= g
        den //= g
    return n0, n1, n2, n3, den


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected a rational value, got {type(x).__name__}")


class QuadScalar:
    """Element of Q(sqrt2, sqrt3) kept in lowest terms."""

    __slots__ = ("_n", "_den", "_hash")

    def __init__(self, a=0, b=0, c=0, d=0):
        fa, fb, fc, fd = (_as_fraction(v) for v in (a, b, c, d))
        den = math.lcm(fa.denominator, fb.denominator, fc.denominator, fd.denominator)
        nums = [f.numerator * (den // f.denominator) for f in (fa, fb, fc, fd)]
        self._set(*_normalize(*nums, den))

    def _set(self, n0, n1, n2, n3, den):
        self._n = (n0, n1, n2, n3)
        self._den = den
        self._hash = None

    @classmethod
    def _raw(cls, n0, n1, n2, n3, den) -> QuadScalar:
        obj = cls.__new__(cls)
        obj._set(*_normalize(n0, n1, n2, n3, den))
        return obj

    @classmethod
    def coerce(cls, x) -> QuadScalar | None:
        if isinstance(x, QuadScalar):
            return x
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            f = _as_fraction(x)
            return cls._raw(f.numerator, 0, 0, 0, f.denominator)
        return None

    # coordinates
    @property
    def a(self) -> Fraction:
        return Fraction(self._n[0], self._den)

    @property
    def b(self) -> Fraction:
        return Fraction(self._n[1], self._den)

    @property
    def c(self) -> Fraction:
        return Fraction(self._n[2], self._den)

    @property
    def d(self) -> Fraction:
        return Fraction(self._n[3], self._den)

    @property
    def coords(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    def is_rational(self) -> bool:
        return self._n[1] == 0 and self._n[2] == 0 and self._n[3] == 0

    def is_zero(self) -> bool:
        return self._n[0] == 0 and self.is_rational()

    # arithmetic
    def __add__(self, other):
        o = QuadScalar.coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return self.to_float() + other
            return NotImplemented
        n, p = self._n, o._n
        d1, d2 = self._den, o._den
        if d1 == d2:
            return QuadScalar._raw(n[0] + p[0], n[1] + p[1], n[2] + p[2], n[3] + p[3], d1)
        return QuadScalar._raw(
            n[0] * d2 + p[0] * d1,
            n[1] * d2 + p[1] * d1,
            n[2] * d2 + p[2] * d1,
            n[3] * d2 + p[3] * d1,
            d1 * d2,
        )

    __radd__ = __add__

    def __neg__(self) -> QuadScalar:
        n = self._n
        obj = QuadScalar.__new__(QuadScalar)
        obj._set(-n[0], -n[1], -n[2], -n[3], self._den)
        return obj

    def __pos__(self) -> QuadScalar:
        return self

    def __sub__(self, other):
        o = QuadScalar.coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return self.to_float() - other
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            n = self._n
            return QuadScalar._raw(n[0] * other, n[1] * other, n[2] * other, n[3] * other, self._den)
        o = QuadScalar.coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return self.to_float() * other
            return NotImplemented
        a, b, c, d = self._n
        e, f, g, h = o._n
        return QuadScalar._raw(
            a * e + 2 * b * f + 3 * c * g + 6 * d * h,
            a * f + b * e + 3 * (c * h + d * g),
            a * g + c * e + 2 * (b * h + d * f),
            a * h + d * e + b * g + c * f,
            self._den * o._den,
        )

    __rmul__ = __mul__

    def conj2(self) -> QuadScalar:
        """Image under sqrt2 -> -sqrt2."""
        a, b, c, d = self._n
        return QuadScalar._raw(a, -b, c, -d, self._den)

    def conj3(self) -> QuadScalar:
        """Image under sqrt3 -> -sqrt3."""
        a, b, c, d = self._n
        return QuadScalar._raw(a, b, -c, -d, self._den)

    def invert(self) -> QuadScalar:
        """Multiplicative inverse via successive conjugation."""
        if self.is_zero():
            raise ZeroDivisionError("QuadScalar zero has no inverse")
        # x * conj3(x) lies in Q(sqrt2); its sqrt2-conjugate brings it to Q
        c3 = self.conj3()
        p = self * c3
        c2 = p.conj2()
        q = p * c2
        num, den = q._n[0], q._den
        return (c3 * c2) * Fraction(den, num)

    def __truediv__(self, other):
        o = QuadScalar.coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return self.to_float() / other
            return NotImplemented
        return self * o.invert()

    def __rtruediv__(self, other):
        o = QuadScalar.coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return other / self.to_float()
            return NotImplemented
        return o * self.invert()

    def __pow__(self, k: int) -> QuadScalar:
        if not isinstance(k, int):
            raise TypeError("only integer powers are exact")
        if k < 0:
            return self.invert() ** (-k)
        out = QuadScalar._raw(1, 0, 0, 0, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # comparisons
    def __eq__(self, other) -> bool:
        o = QuadScalar.coerce(other)
        if o is None:
            if isinstance(other, GaussQuad):
                return other == self
            if isinstance(other, (float, complex)):
                return self.to_float() == other
            return NotImplemented
        return self._n == o._n and self._den == o._den

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(Fraction(self._n[0], self._den))
            else:
                self._hash = hash((self._n, self._den))
        return self._hash

    def __bool__(self) -> bool:
        return not self.is_zero()

    def to_float(self) -> float:
        a, b, c, d = self._n
        if self.is_rational():
            return a / self._den
        # integer parts are combined with fsum to limit cancellation
        return math.fsum((a, b * _SQRT2, c * _SQRT3, d * _SQRT6)) / self._den

    __float__ = to_float

    def __complex__(self) -> complex:
        return complex(self.to_float())

    def conjugate(self) -> QuadScalar:
        return self

    @property
    def real(self) -> QuadScalar:
        return self

    @property
    def imag(self) -> QuadScalar:
        return _ZERO

    # text form
    def __str__(self) -> str:
        parts = [_fmt_rational(v) for v in self.coords]
        return f"{parts[0]} + {parts[1]}*r2 + {parts[2]}*r3 + {parts[3]}*r6"

    def __repr__(self) -> str:
        return f"QuadScalar({str(self)!r})"


def _fmt_rational(f: Fraction) -> str:
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


_ZERO = QuadScalar()
_ONE = QuadScalar(1)
R2 = QuadScalar(0, 1)
R3 = QuadScalar(0, 0, 1)
R6 = QuadScalar(0, 0, 0, 1)

_RAT = r"-?\d+(?:/\d+)?"
_QUAD_RE = re.compile(
    rf"^\s*({_RAT})\s*\+\s*({_RAT})\*r2\s*\+\s*({_RAT})\*r3\s*\+\s*({_RAT})\*r6\s*$"
)


def parse_quad(text: str) -> QuadScalar:
    """Inverse of ``str(QuadScalar)``."""
    m = _QUAD_RE.match(text)
    if m is None:
        raise ValueError(f"not a canonical QuadScalar: {text!r}")
    return QuadScalar(*(Fraction(g) for g in m.groups()))


def quad_sqrt(q) -> QuadScalar | None:
    """Exact square root of a non-negative rational when it lies in the field."""
    f = _as_fraction(q)
    if f < 0:
        raise ValueError("square root of a negative rational")
    if f == 0:
        return _ZERO
    # sqrt(n/d) = sqrt(n*d)/d, then split n*d into square times squarefree part
    m = f.numerator * f.denominator
    for free, unit in ((1, _ONE), (2, R2), (3, R3), (6, R6)):
        if m % free:
            continue
        k = math.isqrt(m // free)
        if k * k * free == m:
            return unit * Fraction(k, f.denominator)
    return None


class GaussQuad:
    """``re + i*im`` with ``re, im`` in Q(sqrt2, sqrt3)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        r = QuadScalar.coerce(re)
        m = QuadScalar.coerce(im)
        if r is None or m is None:
            raise TypeError("GaussQuad parts must be exact")
        self.re = r
        self.im = m

    @classmethod
    def coerce(cls, x) -> GaussQuad | None:
        if isinstance(x, GaussQuad):
            return x
        q = QuadScalar.coerce(x)
        if q is None:
            return None
        obj = cls.__new__(cls)
        obj.re = q
        obj.im = _ZERO
        return obj

    @classmethod
    def _make(cls, re: QuadScalar, im: QuadScalar) -> GaussQuad:
        obj = cls.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __add__(self, other):
        o = GaussQuad.coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) + other
            return NotImplemented
        return GaussQuad._make(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self) -> GaussQuad:
        return GaussQuad._make(-self.re, -self.im)

    def __sub__(self, other):
        o = GaussQuad.coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) - other
            return NotImplemented
        return GaussQuad._make(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QuadScalar)) and not isinstance(other, bool):
            return GaussQuad._make(self.re * other, self.im * other)
        o = GaussQuad.coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) * other
            return NotImplemented
        if o.im.is_zero():
            return GaussQuad._make(self.re * o.re, self.im * o.re)
        if self.im.is_zero():
            return GaussQuad._make(self.re * o.re, self.re * o.im)
        if self.re.is_zero() and o.re.is_zero():
            return GaussQuad._make(-(self.im * o.im), _ZERO)
        return GaussQuad._make(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def conjugate(self) -> GaussQuad:
        return GaussQuad._make(self.re, -self.im)

    def norm_sq(self) -> QuadScalar:
        return self.re * self.re + self.im * self.im

    def invert(self) -> GaussQuad:
        if self.is_zero():
            raise ZeroDivisionError("GaussQuad zero has no inverse")
        inv = self.norm_sq().invert()
        return GaussQuad._make(self.re * inv, -(self.im * inv))

    def __truediv__(self, other):
        o = GaussQuad.coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) / other
            return NotImplemented
        return self * o.invert()

    def __rtruediv__(self, other):
        o = GaussQuad.coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return other / complex(self)
            return NotImplemented
        return o * self.invert()

    def __pow__(self, k: int) -> GaussQuad:
        if not isinstance(k, int):
            raise TypeError("only integer powers are exact")
        if k < 0:
            return self.invert() ** (-k)
        out = GaussQuad(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        o = GaussQuad.coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) == other
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        if self.im.is_zero():
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self) -> complex:
        return complex(self.re.to_float(), self.im.to_float())

    def to_complex(self) -> complex:
        return complex(self)

    @property
    def real(self) -> QuadScalar:
        return self.re

    @property
    def imag(self) -> QuadScalar:
        return self.im

    def __str__(self) -> str:
        return f"({self.re}) + i*({self.im})"

    def __repr__(self) -> str:
        return f"GaussQuad({str(self)!r})"


I = GaussQuad(0, 1)

_GAUSS_RE = re.compile(r"^\s*\((.*)\)\s*\+\s*i\*\((.*)\)\s*$")


def parse_gauss(text: str) -> GaussQuad:
    """Inverse of ``str(GaussQuad)``; a bare QuadScalar text is accepted too."""
    m = _GAUSS_RE.match(text)
    if m is None:
        return GaussQuad(parse_quad(text))
    return GaussQuad(parse_quad(m.group(1)), parse_quad(m.group(2)))


def to_exact(x):
    """Simplify an exact scalar to the smallest type that holds it."""
    if isinstance(x, GaussQuad):
        if x.im.is_zero():
            x = x.re
        else:
            return x
    if isinstance(x, QuadScalar) and x.is_rational():
        f = x.a
        return f.numerator if f.denominator == 1 else f
    return x
