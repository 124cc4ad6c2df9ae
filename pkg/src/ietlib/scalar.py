"""Exact totally ordered field arithmetic: rationals and real quadratic numbers.

A :class:`Scalar` is either a rational or an element ``a + b*sqrt(d)`` of a
real quadratic field (``d`` square-free, ``d >= 2``).  All comparisons are
decided by integer sign analysis, never by floating point, so orbit
computations and interval overlap tests built on top of it are exact.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import total_ordering


class ScalarParseError(ValueError):
    """Raised when a scalar string does not match the accepted grammar."""


class MixedFieldError(ValueError):
    """Raised when two scalars from distinct quadratic fields are combined."""


def _squarefree_split(n: int) -> tuple[int, int]:
    # n = root**2 * core with core square-free
    root, core = 1, 1
    p = 2
    m = n
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            root *= p ** (e // 2)
            if e % 2:
                core *= p
        p += 1 if p == 2 else 2
    core *= m
    return root, core


_RAT = r"[+-]?\d+(?:/\d+)?"
_SCALAR_RE = re.compile(
    rf"^(?:(?P<a>{_RAT})(?=[+-]|$))?"
    rf"(?:(?P<sign>[+-])?(?:(?P<b>{_RAT})\*)?sqrt\((?P<d>\d+)\))?$"
)


@total_ordering
class Scalar:
    """Exact number ``a + b*sqrt(d)``; rational when ``b == 0`` (then ``d == 0``).

    Immutable.  Arithmetic between scalars of distinct quadratic fields raises
    :class:`MixedFieldError`; rationals coerce into any field.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d: int = 0):
        a = Fraction(a)
        b = Fraction(b)
        if b == 0:
            d = 0
        elif d < 0:
            raise ValueError("negative radicand")
        elif d == 0:  # b*sqrt(0) contributes nothing
            b = Fraction(0)
        else:
            root, core = _squarefree_split(d)
            if core == 1:  # perfect-square radicand folds into the rational part
                a += b * root
                b = Fraction(0)
                d = 0
            else:
                b *= root
                d = core
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    def __reduce__(self):
        return (Scalar, (self.a, self.b, self.d))

    # -- construction helpers -------------------------------------------------

    @classmethod
    def rational(cls, num, den=1) -> Scalar:
        return cls(Fraction(num, den))

    @classmethod
    def sqrt_of(cls, n: int) -> Scalar:
        return cls(0, 1, n)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if self.b != 0:
            raise ValueError(f"{self} is irrational")
        return self.a

    # -- ordering --------------------------------------------------------------

    def sign(self) -> int:
        """Exact sign in {-1, 0, 1} of the real value a + b*sqrt(d)."""
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return 1 if b > 0 else -1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: |a| vs |b|*sqrt(d) decided by squaring
        lhs = a * a
        rhs = b * b * self.d
        if lhs == rhs:
            return 0
        big_is_a = lhs > rhs
        return (1 if big_is_a else -1) if a > 0 else (-1 if big_is_a else 1)

    def _coerce(self, other) -> Scalar:
        if isinstance(other, Scalar):
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar(other)
        return NotImplemented

    def _join_field(self, other: Scalar) -> int:
        if self.d and other.d and self.d != other.d:
            raise MixedFieldError(f"cannot mix sqrt({self.d}) with sqrt({other.d})")
        return self.d or other.d

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.a == other.a and self.b == other.b and self.d == other.d

    def __lt__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).sign() < 0

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    # -- field operations -------------------------------------------------------

    def __add__(self, other) -> Scalar:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        d = self._join_field(other)
        return Scalar(self.a + other.a, self.b + other.b, d)

    __radd__ = __add__

    def __sub__(self, other) -> Scalar:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        d = self._join_field(other)
        return Scalar(self.a - other.a, self.b - other.b, d)

    def __rsub__(self, other) -> Scalar:
        return (-self) + other

    def __neg__(self) -> Scalar:
        return Scalar(-self.a, -self.b, self.d)

    def __abs__(self) -> Scalar:
        return -self if self.sign() < 0 else self

    def __mul__(self, other) -> Scalar:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        d = self._join_field(other)
        return Scalar(
            self.a * other.a + self.b * other.b * d,
            self.a * other.b + self.b * other.a,
            d,
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> Scalar:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        d = self._join_field(other)
        if other.sign() == 0:
            raise ZeroDivisionError("scalar division by zero")
        if other.b == 0:
            return Scalar(self.a / other.a, self.b / other.a, d)
        # multiply by the conjugate; the field norm a^2 - b^2 d is nonzero
        norm = other.a * other.a - other.b * other.b * d
        num = self * Scalar(other.a, -other.b, d)
        return Scalar(num.a / norm, num.b / norm, d)

    def __rtruediv__(self, other) -> Scalar:
        return Scalar(other) / self

    # -- reporting ---------------------------------------------------------------

    def __float__(self) -> float:
        if self.b == 0:
            return float(self.a)
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __str__(self) -> str:
        return render_scalar(self)

    def __repr__(self) -> str:
        return f"Scalar({str(self)!r})"


ZERO = Scalar(0)
ONE = Scalar(1)


def parse_scalar(text: str) -> Scalar:
    """Parse ``INT | INT/INT | [RAT +|-] [RAT*]sqrt(INT)`` (whitespace-insensitive)."""
    compact = re.sub(r"\s+", "", text)
    if not compact:
        raise ScalarParseError("empty scalar")
    m = _SCALAR_RE.match(compact)
    if not m or (m.group("a") is None and m.group("d") is None):
        raise ScalarParseError(f"cannot parse scalar {text!r}")
    try:
        a = Fraction(m.group("a")) if m.group("a") is not None else Fraction(0)
        if m.group("d") is None:
            return Scalar(a)
        b = Fraction(m.group("b")) if m.group("b") is not None else Fraction(1)
        if m.group("sign") == "-":
            b = -b
        return Scalar(a, b, int(m.group("d")))
    except ZeroDivisionError:
        raise ScalarParseError(f"zero denominator in {text!r}") from None


def render_scalar(x: Scalar) -> str:
    """Canonical text form; ``parse_scalar(render_scalar(x)) == x``."""
    if x.b == 0:
        return str(x.a)
    root = f"{abs(x.b)}*sqrt({x.d})"
    sign = "-" if x.b < 0 else "+"
    if x.a == 0:
        return root if sign == "+" else "-" + root
    return f"{x.a}{sign}{root}"


def to_float(x: Scalar) -> float:
    """Nearest double, for reporting only; never drives control flow."""
    return float(x)


def common_denominator(values) -> int:
    """lcm of the denominators of the rational coefficients of ``values``."""
    q = 1
    for x in values:
        q = math.lcm(q, x.a.denominator, x.b.denominator)
    return q


def scaled_pair(x: Scalar, q: int) -> tuple[int, int]:
    """Integer pair (u, v) with x = (u + v*sqrt(d)) / q; q must clear denominators."""
    ua = x.a * q
    vb = x.b * q
    if ua.denominator != 1 or vb.denominator != 1:
        raise ValueError(f"{q} is not a common denominator for {x}")
    return int(ua), int(vb)
