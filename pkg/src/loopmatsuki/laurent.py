"""Exact Laurent-polynomial matrices and truncated power-series matrices.

Entries are finite maps ``exponent -> QI``.  ``LaurentMatrix`` is exact;
``SeriesMatrix`` carries an explicit precision ``N`` meaning the entry
coefficients are known for all exponents ``< N`` (and are zero below the
recorded support).  Precision bookkeeping is pessimistic: an operation
never claims more precision than it can certify, and raises
``PrecisionError`` rather than guessing.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence

from .errors import InvalidInputError, PrecisionError
from .gaussian import QI, ZERO, ONE

Entry = Dict[int, QI]

# ---------------------------------------------------------------------------
# entry-level helpers


def _clean(e: Entry) -> Entry:
    return {k: v for k, v in e.items() if not v.is_zero()}


def _eadd(a: Entry, b: Entry) -> Entry:
    out = dict(a)
    for k, v in b.items():
        w = out.get(k)
        out[k] = v if w is None else w + v
    return _clean(out)


def _eneg(a: Entry) -> Entry:
    return {k: -v for k, v in a.items()}


def _emul(a: Entry, b: Entry) -> Entry:
    out: Entry = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = ka + kb
            w = out.get(k)
            p = va * vb
            out[k] = p if w is None else w + p
    return _clean(out)


def _escale(a: Entry, c: QI) -> Entry:
    if c.is_zero():
        return {}
    return {k: v * c for k, v in a.items()}


def _eval_shift(a: Entry, shift: int) -> Entry:
    return {k + shift: v for k, v in a.items()}


def _etrunc(a: Entry, n: int) -> Entry:
    return {k: v for k, v in a.items() if k < n}


def _eval_min(a: Entry) -> int | None:
    return min(a) if a else None


def _subst(a: Entry, unit: QI, invert: bool, conj: bool) -> Entry:
    """t -> unit * t^{+-1}, optionally conjugating the coefficients."""
    out: Entry = {}
    for k, v in a.items():
        c = v.conj() if conj else v
        out[-k if invert else k] = c * unit ** k
    return _clean(out)


# ---------------------------------------------------------------------------


class LaurentMatrix:
    """An exact n-by-n matrix over Q(i)[t, t^-1]."""

    __slots__ = ("n", "rows")

    def __init__(self, rows: Sequence[Sequence[Entry]]):
        self.n = len(rows)
        self.rows: List[List[Entry]] = [[_clean(dict(e)) for e in r] for r in rows]
        if any(len(r) != self.n for r in self.rows):
            raise InvalidInputError("matrix must be square")

    # -- constructors ------------------------------------------------------
    @staticmethod
    def zeros(n: int) -> "LaurentMatrix":
        return LaurentMatrix([[{} for _ in range(n)] for _ in range(n)])

    @staticmethod
    def identity(n: int) -> "LaurentMatrix":
        m = LaurentMatrix.zeros(n)
        for i in range(n):
            m.rows[i][i] = {0: ONE}
        return m

    @staticmethod
    def from_scalars(rows: Sequence[Sequence[QI | int | Fraction]]) -> "LaurentMatrix":
        return LaurentMatrix(
            [[({0: QI.of(x)} if not QI.of(x).is_zero() else {}) for x in r] for r in rows]
        )

    @staticmethod
    def diag_scalars(vals: Sequence[QI | int | Fraction]) -> "LaurentMatrix":
        n = len(vals)
        m = LaurentMatrix.zeros(n)
        for i, v in enumerate(vals):
            q = QI.of(v)
            if not q.is_zero():
                m.rows[i][i] = {0: q}
        return m

    @staticmethod
    def t_power(lam: Sequence[int]) -> "LaurentMatrix":
        """diag(t^lam_1, ..., t^lam_n)."""
        n = len(lam)
        m = LaurentMatrix.zeros(n)
        for i, k in enumerate(lam):
            m.rows[i][i] = {int(k): ONE}
        return m

    def copy(self) -> "LaurentMatrix":
        return LaurentMatrix(self.rows)

    # -- basic queries -------------------------------------------------------
    def entry(self, i: int, j: int) -> Entry:
        return self.rows[i][j]

    def coeff(self, i: int, j: int, k: int) -> QI:
        return self.rows[i][j].get(k, ZERO)

    def is_zero(self) -> bool:
        return all(not e for r in self.rows for e in r)

    def is_constant(self) -> bool:
        return all(set(e) <= {0} for r in self.rows for e in r)

    def constant_matrix(self) -> List[List[QI]]:
        """Coefficient of t^0 in each entry."""
        return [[e.get(0, ZERO) for e in r] for r in self.rows]

    def val(self) -> int | None:
        vals = [min(e) for r in self.rows for e in r if e]
        return min(vals) if vals else None

    def maxdeg(self) -> int | None:
        degs = [max(e) for r in self.rows for e in r if e]
        return max(degs) if degs else None

    # -- arithmetic ------------------------------------------------------------
    def __add__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        return LaurentMatrix(
            [[_eadd(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)]
        )

    def __sub__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        return self + (-other)

    def __neg__(self) -> "LaurentMatrix":
        return LaurentMatrix([[_eneg(e) for e in r] for r in self.rows])

    def __mul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        n = self.n
        out = LaurentMatrix.zeros(n)
        for i in range(n):
            for k in range(n):
                a = self.rows[i][k]
                if not a:
                    continue
                for j in range(n):
                    b = other.rows[k][j]
                    if b:
                        out.rows[i][j] = _eadd(out.rows[i][j], _emul(a, b))
        return out

    def scale(self, c: QI | int | Fraction) -> "LaurentMatrix":
        q = QI.of(c)
        return LaurentMatrix([[_escale(e, q) for e in r] for r in self.rows])

    def shift(self, k: int) -> "LaurentMatrix":
        """Multiply by the scalar t^k."""
        return LaurentMatrix([[_eval_shift(e, k) for e in r] for r in self.rows])

    def transpose(self) -> "LaurentMatrix":
        return LaurentMatrix([[self.rows[j][i] for j in range(self.n)] for i in range(self.n)])

    def substitute(self, unit: QI, invert: bool = False, conj: bool = False) -> "LaurentMatrix":
        """Entrywise substitution t -> unit*t (or unit*t^-1), optional coefficient conjugation."""
        return LaurentMatrix([[_subst(e, unit, invert, conj) for e in r] for r in self.rows])

    def det(self) -> Entry:
        return _det(self.rows, list(range(self.n)), list(range(self.n)))

    def inverse(self) -> "LaurentMatrix":
        """Exact inverse; requires det to be a nonzero monomial c*t^k."""
        d = self.det()
        if len(d) != 1:
            raise InvalidInputError(
                "matrix is not invertible over the Laurent polynomial ring "
                f"(det has {len(d)} terms)"
            )
        (k, c), = d.items()
        cinv = c.inv()
        n = self.n
        out = LaurentMatrix.zeros(n)
        idx = list(range(n))
        for i in range(n):
            for j in range(n):
                minor = _det(self.rows, [r for r in idx if r != j], [cc for cc in idx if cc != i])
                sgn = ONE if (i + j) % 2 == 0 else QI(-1)
                out.rows[i][j] = _eval_shift(_escale(minor, sgn * cinv), -k)
        return out

    def __pow__(self, k: int) -> "LaurentMatrix":
        if k < 0:
            return self.inverse() ** (-k)
        out = LaurentMatrix.identity(self.n)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentMatrix):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def __hash__(self):
        raise TypeError("LaurentMatrix is not hashable")

    def __repr__(self):
        def fmt(e: Entry) -> str:
            if not e:
                return "0"
            return "+".join(
                f"({v})t^{k}" if k else f"({v})" for k, v in sorted(e.items())
            )

        body = "; ".join(", ".join(fmt(e) for e in r) for r in self.rows)
        return f"Laurent[{body}]"

    # -- conversions ------------------------------------------------------------
    def truncate(self, precision: int) -> "SeriesMatrix":
        v = self.val()
        if v is not None and v >= precision:
            raise PrecisionError("truncation precision below the matrix valuation")
        return SeriesMatrix([[_etrunc(e, precision) for e in r] for r in self.rows], precision)


def _det(rows: Sequence[Sequence[Entry]], ridx: List[int], cidx: List[int]) -> Entry:
    """Cofactor-expansion determinant of the submatrix rows[ridx][cidx]."""
    if not ridx:
        return {0: ONE}
    if len(ridx) == 1:
        return dict(rows[ridx[0]][cidx[0]])
    out: Entry = {}
    r0 = ridx[0]
    rest = ridx[1:]
    for pos, c in enumerate(cidx):
        e = rows[r0][c]
        if not e:
            continue
        sub = _det(rows, rest, [x for x in cidx if x != c])
        term = _emul(e, sub)
        if pos % 2:
            term = _eneg(term)
        out = _eadd(out, term)
    return out


# ---------------------------------------------------------------------------


class SeriesMatrix:
    """An n-by-n matrix over Q(i)((t)) known modulo t^precision.

    Supports are finite and bounded below; ``precision`` bounds the
    exponents stored (exclusive).
    """

    __slots__ = ("n", "rows", "precision")

    MIN_RESIDUAL = 2  # precision floor: below this, computations refuse to answer

    def __init__(self, rows: Sequence[Sequence[Entry]], precision: int):
        self.n = len(rows)
        self.precision = int(precision)
        self.rows: List[List[Entry]] = [
            [_etrunc(_clean(dict(e)), self.precision) for e in r] for r in rows
        ]
        if any(len(r) != self.n for r in self.rows):
            raise InvalidInputError("matrix must be square")

    # -- constructors -----------------------------------------------------------
    @staticmethod
    def identity(n: int, precision: int) -> "SeriesMatrix":
        return LaurentMatrix.identity(n).truncate(precision)

    @staticmethod
    def from_laurent(m: LaurentMatrix, precision: int) -> "SeriesMatrix":
        return m.truncate(precision)

    def to_laurent(self) -> LaurentMatrix:
        """Forget the truncation marker (the caller asserts exactness)."""
        return LaurentMatrix(self.rows)

    def copy(self) -> "SeriesMatrix":
        return SeriesMatrix(self.rows, self.precision)

    # -- queries ------------------------------------------------------------------
    def entry(self, i: int, j: int) -> Entry:
        return self.rows[i][j]

    def coeff(self, i: int, j: int, k: int) -> QI:
        if k >= self.precision:
            raise PrecisionError(f"coefficient of t^{k} beyond precision {self.precision}")
        return self.rows[i][j].get(k, ZERO)

    def val(self) -> int:
        """A certified lower bound for the valuation (min stored exponent)."""
        vals = [min(e) for r in self.rows for e in r if e]
        return min(vals) if vals else self.precision

    def constant_matrix(self) -> List[List[QI]]:
        if self.precision < 1:
            raise PrecisionError("constant term beyond recorded precision")
        return [[e.get(0, ZERO) for e in r] for r in self.rows]

    def is_identity_to_precision(self) -> bool:
        ident = LaurentMatrix.identity(self.n).truncate(self.precision)
        return self.rows == ident.rows

    # -- arithmetic ------------------------------------------------------------------
    def retruncate(self, precision: int) -> "SeriesMatrix":
        if precision > self.precision:
            raise PrecisionError(
                f"cannot raise precision from {self.precision} to {precision}"
            )
        return SeriesMatrix(self.rows, precision)

    def __add__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        p = min(self.precision, other.precision)
        return SeriesMatrix(
            [[_eadd(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)], p
        )

    def __sub__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        return self + other.scale(QI(-1))

    def scale(self, c: QI | int | Fraction) -> "SeriesMatrix":
        q = QI.of(c)
        return SeriesMatrix([[_escale(e, q) for e in r] for r in self.rows], self.precision)

    def shift(self, k: int) -> "SeriesMatrix":
        return SeriesMatrix(
            [[_eval_shift(e, k) for e in r] for r in self.rows], self.precision + k
        )

    def __mul__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        # product precision: pessimistic rule min(Na + v(B), Nb + v(A))
        p = min(self.precision + other.val(), other.precision + self.val())
        n = self.n
        rows = [[{} for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for k in range(n):
                a = self.rows[i][k]
                if not a:
                    continue
                for j in range(n):
                    b = other.rows[k][j]
                    if b:
                        rows[i][j] = _eadd(rows[i][j], _emul(a, b))
        return SeriesMatrix(rows, p)

    def transpose(self) -> "SeriesMatrix":
        return SeriesMatrix(
            [[self.rows[j][i] for j in range(self.n)] for i in range(self.n)], self.precision
        )

    def substitute(self, unit: QI, invert: bool = False, conj: bool = False) -> "SeriesMatrix":
        if invert:
            raise PrecisionError("t -> t^-1 substitution leaves the series model")
        return SeriesMatrix(
            [[_subst(e, unit, False, conj) for e in r] for r in self.rows], self.precision
        )

    def det(self) -> Entry:
        """Determinant, with its own certified precision (second return via pair)."""
        d, _ = self.det_with_precision()
        return d

    def det_with_precision(self) -> tuple[Entry, int]:
        v = self.val()
        d = _det(self.rows, list(range(self.n)), list(range(self.n)))
        prec = self.precision + (self.n - 1) * min(v, 0) if self.n > 1 else self.precision
        return _etrunc(d, prec), prec

    def inverse(self) -> "SeriesMatrix":
        """Inverse of a matrix whose determinant is t^k * unit."""
        d, dprec = self.det_with_precision()
        if not d:
            raise InvalidInputError("matrix not invertible (determinant vanishes to precision)")
        k = min(d)
        unit = _eval_shift(d, -k)  # unit power series, constant term nonzero
        uinv = _series_reciprocal(unit, dprec - k)
        n = self.n
        v = self.val()
        adj_prec = self.precision + max(0, n - 2) * min(v, 0) if n > 1 else self.precision
        # adjugate entries have valuation >= (n-1)*v; the reciprocal's error
        # O(t^{dprec-k}) is scaled by them and shifted by -k twice in total
        adj_val = (n - 1) * v
        out_prec = min(adj_prec - k, adj_val + dprec - 2 * k)
        if out_prec <= -10**6:
            raise PrecisionError("inverse precision collapsed")
        rows = [[{} for _ in range(n)] for _ in range(n)]
        idx = list(range(n))
        for i in range(n):
            for j in range(n):
                minor = _det(self.rows, [r for r in idx if r != j], [c for c in idx if c != i])
                sgn = ONE if (i + j) % 2 == 0 else QI(-1)
                e = _emul(_escale(minor, sgn), uinv)
                rows[i][j] = _etrunc(_eval_shift(e, -k), out_prec)
        return SeriesMatrix(rows, out_prec)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SeriesMatrix):
            return NotImplemented
        p = min(self.precision, other.precision)
        a = [[_etrunc(e, p) for e in r] for r in self.rows]
        b = [[_etrunc(e, p) for e in r] for r in other.rows]
        return a == b

    def __repr__(self):
        return f"Series(prec={self.precision}, {LaurentMatrix(self.rows)!r})"


def _series_reciprocal(u: Entry, precision: int) -> Entry:
    """Reciprocal of a unit power series, modulo t^precision."""
    c0 = u.get(0)
    if c0 is None or c0.is_zero():
        raise InvalidInputError("series reciprocal requires a unit constant term")
    inv0 = c0.inv()
    out: Entry = {0: inv0}
    for k in range(1, max(precision, 0)):
        acc = ZERO
        for j in range(1, k + 1):
            cj = u.get(j)
            if cj is not None:
                w = out.get(k - j)
                if w is not None:
                    acc = acc + cj * w
        if not acc.is_zero():
            out[k] = -inv0 * acc
    return _clean(out)


def series_exp(a: SeriesMatrix) -> SeriesMatrix:
    """exp of a series matrix with strictly positive valuation."""
    v = a.val()
    if v < 1:
        raise PrecisionError("series exp requires valuation >= 1")
    n = a.n
    out = SeriesMatrix.identity(n, a.precision)
    term = SeriesMatrix.identity(n, a.precision)
    m = 0
    while True:
        m += 1
        if m * v >= a.precision:
            break
        term = (term * a).scale(Fraction(1, m))
        out = out + term
    return out.retruncate(a.precision)


def laurent_exp_nilpotent(a: LaurentMatrix) -> LaurentMatrix:
    """Exact exp of a nilpotent Laurent matrix."""
    n = a.n
    out = LaurentMatrix.identity(n)
    term = LaurentMatrix.identity(n)
    for m in range(1, n + 1):
        term = (term * a).scale(Fraction(1, m))
        if term.is_zero():
            break
        out = out + term
    else:
        if not (term * a).is_zero():
            raise InvalidInputError("matrix is not nilpotent")
    return out


def laurent_log_unipotent(u: LaurentMatrix) -> LaurentMatrix:
    """Exact log of a unipotent Laurent matrix (u - 1 nilpotent)."""
    n = u.n
    x = u - LaurentMatrix.identity(n)
    # check nilpotency
    p = x.copy()
    order = 1
    while not p.is_zero():
        p = p * x
        order += 1
        if order > n + 1:
            raise InvalidInputError("matrix is not unipotent (u-1 not nilpotent)")
    out = LaurentMatrix.zeros(n)
    term = LaurentMatrix.identity(n)
    for m in range(1, order):
        term = term * x
        out = out + term.scale(Fraction((-1) ** (m + 1), m))
    return out
