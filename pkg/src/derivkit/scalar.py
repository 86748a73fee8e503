"""Exact Gaussian rationals: elements a + b*i of Q(i).

Real and imaginary parts are ``gmpy2.mpq`` values, which are always kept in
lowest terms with a positive denominator.
"""
from __future__ import annotations

import random
import re

from gmpy2 import mpq

__all__ = ["Scalar", "ZERO", "ONE", "I", "DivisionByZero", "random_scalar", "as_scalar"]

_MPQ = type(mpq(0))
_Q0 = mpq(0)
_Q1 = mpq(1)


class DivisionByZero(ZeroDivisionError):
    pass


class Scalar:
    """An immutable element of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is _MPQ else mpq(re)
        self.im = im if type(im) is _MPQ else mpq(im)

    @classmethod
    def _make(cls, re, im):
        s = object.__new__(cls)
        s.re = re
        s.im = im
        return s

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if type(other) is not Scalar:
            other = _coerce(other)
            if other is None:
                return NotImplemented
        return Scalar._make(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if type(other) is not Scalar:
            other = _coerce(other)
            if other is None:
                return NotImplemented
        return Scalar._make(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return as_scalar(other) - self

    def __mul__(self, other):
        if type(other) is not Scalar:
            other = _coerce(other)
            if other is None:
                return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return Scalar._make(a * c, _Q0)
        return Scalar._make(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inv(self):
        a, b = self.re, self.im
        if not b:
            if not a:
                raise DivisionByZero("inverse of zero")
            return Scalar._make(_Q1 / a, _Q0)
        norm = a * a + b * b
        return Scalar._make(a / norm, -b / norm)

    def __truediv__(self, other):
        if type(other) is not Scalar:
            other = _coerce(other)
            if other is None:
                return NotImplemented
        if not other.im and not self.im:
            if not other.re:
                raise DivisionByZero("division by zero")
            return Scalar._make(self.re / other.re, _Q0)
        return self * other.inv()

    def __rtruediv__(self, other):
        return as_scalar(other) / self

    def __neg__(self):
        return Scalar._make(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self):
        return Scalar._make(self.re, -self.im)

    def norm(self):
        """|z|^2 as an mpq."""
        return self.re * self.re + self.im * self.im

    # -- comparison -------------------------------------------------------
    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if type(other) is not Scalar:
            try:
                other = as_scalar(other)
            except TypeError:
                return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    @property
    def is_real(self) -> bool:
        return not self.im

    # -- text -------------------------------------------------------------
    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"Scalar('{format_scalar(self)}')"

    @classmethod
    def parse(cls, text: str) -> "Scalar":
        return parse_scalar(text)


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)


def as_scalar(x) -> Scalar:
    if type(x) is Scalar:
        return x
    if isinstance(x, (int, _MPQ)):
        return Scalar._make(mpq(x), _Q0)
    if isinstance(x, str):
        return parse_scalar(x)
    if isinstance(x, complex):
        raise TypeError("floating complex values are not exact")
    try:
        from fractions import Fraction

        if isinstance(x, Fraction):
            return Scalar._make(mpq(x.numerator, x.denominator), _Q0)
    except ImportError:  # pragma: no cover
        pass
    raise TypeError(f"cannot convert {type(x).__name__} to Scalar")


def _coerce(x):
    try:
        return as_scalar(x)
    except TypeError:
        return None


def _fmt_q(q) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_scalar(z: Scalar) -> str:
    re_, im_ = z.re, z.im
    if not im_:
        return _fmt_q(re_)
    if abs(im_) == 1:
        imag = "i"
    else:
        imag = _fmt_q(abs(im_)) + "i"
    if not re_:
        return ("-" if im_ < 0 else "") + imag
    return _fmt_q(re_) + ("-" if im_ < 0 else "+") + imag


_RAT = r"\d+(?:/\d+)?"
_SCALAR_RE = re.compile(
    rf"^(?:(?P<re>[+-]?{_RAT})(?![\d/]*i))?"
    rf"(?:(?P<isign>[+-])?(?P<im>{_RAT})?(?P<i>i))?$"
)


def _parse_q(text: str):
    if "/" in text:
        num, den = text.split("/")
        if int(den) == 0:
            raise DivisionByZero(f"zero denominator in {text!r}")
        return mpq(int(num), int(den))
    return mpq(int(text))


def parse_scalar(text: str) -> Scalar:
    """Parse the textual form ``a/b+c/di`` (each part optional)."""
    s = text.strip().replace(" ", "")
    while s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    if not s:
        raise ValueError("empty scalar")
    m = _SCALAR_RE.match(s)
    if m is None or (m.group("re") is None and m.group("i") is None):
        raise ValueError(f"malformed scalar {text!r}")
    re_ = _parse_q(m.group("re")) if m.group("re") else _Q0
    im_ = _Q0
    if m.group("i"):
        if m.group("re") is not None and m.group("isign") is None:
            raise ValueError(f"malformed scalar {text!r}")
        im_ = _parse_q(m.group("im")) if m.group("im") else _Q1
        if m.group("isign") == "-":
            im_ = -im_
    return Scalar._make(re_, im_)


def random_scalar(rng: random.Random, bound: int = 10_000) -> Scalar:
    """Random nonzero rational with numerator and denominator in [-bound, bound] minus 0."""
    while True:
        num = rng.randint(-bound, bound)
        den = rng.randint(-bound, bound)
        if num and den:
            return Scalar._make(mpq(num, den), _Q0)
