"""Exact arithmetic in the field Q(i) of Gaussian rationals.

A scalar is a pair of ``fractions.Fraction`` values (real and imaginary
part).  All arithmetic is exact; there is no floating point anywhere in
this package.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

_FracLike = Union[int, Fraction]


class QI:
    """A Gaussian rational ``re + im*i`` with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: _FracLike = 0, im: _FracLike = 0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):  # immutable
        raise AttributeError("QI is immutable")

    # -- constructors -------------------------------------------------
    @staticmethod
    def of(x: "QI | _FracLike") -> "QI":
        if isinstance(x, QI):
            return x
        return QI(x)

    # -- predicates ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_one(self) -> bool:
        return self.re == 1 and not self.im

    def is_real(self) -> bool:
        return not self.im

    def is_rational_int(self) -> bool:
        return self.im == 0 and self.re.denominator == 1

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other) -> "QI":
        o = QI.of(other)
        return QI(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self) -> "QI":
        return QI(-self.re, -self.im)

    def __sub__(self, other) -> "QI":
        o = QI.of(other)
        return QI(self.re - o.re, self.im - o.im)

    def __rsub__(self, other) -> "QI":
        return QI.of(other) - self

    def __mul__(self, other) -> "QI":
        o = QI.of(other)
        return QI(self.re * o.re - self.im * o.im,
                  self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def inv(self) -> "QI":
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return QI(self.re / n, -self.im / n)

    def __truediv__(self, other) -> "QI":
        return self * QI.of(other).inv()

    def __rtruediv__(self, other) -> "QI":
        return QI.of(other) * self.inv()

    def conj(self) -> "QI":
        return QI(self.re, -self.im)

    def norm2(self) -> Fraction:
        """The square modulus |z|^2, an exact rational."""
        return self.re * self.re + self.im * self.im

    def __pow__(self, k: int) -> "QI":
        if k < 0:
            return self.inv() ** (-k)
        out = QI(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- comparison / hashing -------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QI(other)
        if not isinstance(other, QI):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    # -- formatting -------------------------------------------------------
    def __repr__(self):
        return f"QI({self.re!r}, {self.im!r})"

    def __str__(self):
        return qi_to_str(self)


ZERO = QI(0)
ONE = QI(1)
MINUS_ONE = QI(-1)
I = QI(0, 1)
MINUS_I = QI(0, -1)

#: the four allowed central twists, i.e. fourth roots of unity
FOURTH_ROOTS = (ONE, I, MINUS_ONE, MINUS_I)


def _frac_to_str(f: Fraction) -> str:
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def qi_to_str(z: QI) -> str:
    """Canonical wire format ``a/b+c/d*i`` (parts omitted when zero)."""
    if z.is_zero():
        return "0"
    parts = []
    if z.re:
        parts.append(_frac_to_str(z.re))
    if z.im:
        s = _frac_to_str(z.im)
        if parts and not s.startswith("-"):
            parts.append("+")
        parts.append(f"{s}*i" if s not in ("1", "-1") else ("i" if s == "1" else "-i"))
    return "".join(parts)


def qi_from_str(s: str) -> QI:
    """Parse the wire format produced by :func:`qi_to_str`."""
    s = s.strip().replace(" ", "")
    if not s:
        raise ValueError("empty Gaussian rational literal")
    # split into real and imaginary summands on +/- not inside a fraction
    terms = []
    cur = ""
    for idx, ch in enumerate(s):
        if ch in "+-" and idx > 0 and s[idx - 1] not in "+-/":
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    terms.append(cur)
    re = Fraction(0)
    im = Fraction(0)
    for t in terms:
        if not t or t in "+-":
            raise ValueError(f"bad Gaussian rational literal: {s!r}")
        if t.endswith("i"):
            body = t[:-1].rstrip("*")
            if body in ("", "+"):
                im += 1
            elif body == "-":
                im -= 1
            else:
                im += Fraction(body)
        else:
            re += Fraction(t)
    return QI(re, im)


def fourth_root_label(z: QI) -> str:
    """Name a fourth root of unity (used for the central twist z)."""
    table = {ONE: "1", MINUS_ONE: "-1", I: "i", MINUS_I: "-i"}
    if z not in table:
        raise ValueError(f"{z} is not a fourth root of unity")
    return table[z]


def fourth_root_from_label(s: str) -> QI:
    table = {"1": ONE, "+1": ONE, "-1": MINUS_ONE, "i": I, "+i": I, "-i": MINUS_I}
    if s not in table:
        raise ValueError(f"central twist must be a fourth root of unity, got {s!r}")
    return table[s]
