"""Exact complex numbers with rational real and imaginary parts.

Used as matrix entries in the tensor-product model.  Plain ints and
Fractions mix freely with QC in arithmetic.  Serialization uses the string
forms "p/q" and "p/q+r/s i".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Real = Union[int, Fraction]


@dataclass(frozen=True)
class QC:
    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    def __add__(self, other):
        other = _coerce(other)
        return QC(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return QC(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        return QC(self.re * other.re - self.im * other.im,
                  self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        d = other.re * other.re + other.im * other.im
        if d == 0:
            raise ZeroDivisionError("division by zero QC")
        return QC((self.re * other.re + self.im * other.im) / d,
                  (self.im * other.re - self.re * other.im) / d)

    def __neg__(self):
        return QC(-self.re, -self.im)

    def __eq__(self, other):
        if isinstance(other, QC):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re or self.im)

    def __abs__(self) -> float:
        return abs(complex(self))

    def conjugate(self) -> "QC":
        return QC(self.re, -self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        sign = "+" if self.im >= 0 else "-"
        return f"{self.re}{sign}{abs(self.im)} i"

    def __repr__(self) -> str:
        return f"QC({self.re!r}, {self.im!r})"


def _coerce(x) -> QC:
    if isinstance(x, QC):
        return x
    if isinstance(x, (int, Fraction)):
        return QC(Fraction(x))
    raise TypeError(f"cannot mix QC with {type(x).__name__}")


def parse_qc(text: str) -> QC:
    """Parse "p/q" or "p/q+r/s i" (also "p/q-r/s i")."""
    s = text.strip()
    if s.endswith("i"):
        body = s[:-1].strip()
        # split at the sign separating real and imaginary parts, skipping a
        # leading sign of the real part
        for pos in range(len(body) - 1, 0, -1):
            if body[pos] in "+-" and body[pos - 1] not in "+-/":
                re_part = body[:pos]
                im_part = body[pos] + body[pos + 1:]
                return QC(Fraction(re_part.strip()), Fraction(im_part.strip()))
        return QC(Fraction(0), Fraction(body))
    return QC(Fraction(s))


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))
