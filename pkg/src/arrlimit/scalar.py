"""Exact arithmetic in K = k(z) with its z-adic valuation.

Elements of K are stored as reduced quotients of polynomials over the base
field k, which is either the rationals or a prime field.  Power series are
only ever produced as views (``ScalarK.series``); they are never the
representation, so no precision bookkeeping leaks into correctness.

Dense linear algebra over K (determinant, rank, solve, kernel) runs a
fraction-free Bareiss elimination on the polynomial matrix obtained by
clearing row denominators.  Linear algebra over k itself goes through
FLINT's exact matrices.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import flint

from .errors import ParseError, SingularMatrix

INF = math.inf
"""Valuation of zero."""


# ---------------------------------------------------------------------------
# base field k


@dataclass(frozen=True)
class BaseField:
    """The rationals (``p is None``) or the prime field F_p."""

    p: int | None = None

    def __post_init__(self) -> None:
        if self.p is not None and not (self.p >= 2 and flint.fmpz(self.p).is_prime()):
            raise ValueError(f"{self.p} is not prime")

    @property
    def kind(self) -> str:
        return "Q" if self.p is None else "Fp"

    @property
    def label(self) -> str:
        return "Q" if self.p is None else f"Fp:{self.p}"

    def to_json(self) -> dict:
        return {"kind": "Q"} if self.p is None else {"kind": "Fp", "p": self.p}

    @classmethod
    def from_label(cls, text: str) -> "BaseField":
        text = text.strip()
        if text == "Q":
            return cls()
        m = re.fullmatch(r"Fp:(\d+)", text)
        if not m:
            raise ParseError(f"unknown field {text!r}; expected Q or Fp:<p>")
        try:
            return cls(int(m.group(1)))
        except ValueError as exc:
            raise ParseError(str(exc)) from None

    @classmethod
    def from_json(cls, obj: dict) -> "BaseField":
        if not isinstance(obj, dict) or obj.get("kind") not in ("Q", "Fp"):
            raise ParseError(f"bad base_field {obj!r}")
        if obj["kind"] == "Q":
            return cls()
        try:
            return cls(int(obj["p"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad prime field {obj!r}: {exc}") from None

    # -- elements of k ------------------------------------------------------

    def elem(self, x: object):
        """Coerce ``x`` (int, Fraction, text ``a/b``, FLINT scalar) into k."""
        if isinstance(x, str):
            x = _parse_rational(x)
        if self.p is None:
            if isinstance(x, flint.fmpq):
                return x
            if isinstance(x, Fraction):
                return flint.fmpq(x.numerator, x.denominator)
            if isinstance(x, (int, flint.fmpz)):
                return flint.fmpq(int(x))
            raise TypeError(f"cannot coerce {x!r} into Q")
        if isinstance(x, flint.nmod):
            return x
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ParseError(f"{x} has no image in F_{self.p}")
            return flint.nmod(x.numerator, self.p) / flint.nmod(x.denominator, self.p)
        if isinstance(x, (int, flint.fmpz)):
            return flint.nmod(int(x), self.p)
        if isinstance(x, flint.fmpq):
            return self.elem(Fraction(int(x.p), int(x.q)))
        raise TypeError(f"cannot coerce {x!r} into F_{self.p}")

    @property
    def zero(self):
        return self.elem(0)

    @property
    def one(self):
        return self.elem(1)

    def poly(self, coeffs: Sequence) -> object:
        if self.p is None:
            return flint.fmpq_poly([self.elem(c) for c in coeffs])
        return flint.nmod_poly([int(self.elem(c)) for c in coeffs], self.p)

    def matrix(self, rows: Sequence[Sequence]) -> object:
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        flat = [self.elem(x) for row in rows for x in row]
        if self.p is None:
            return flint.fmpq_mat(nr, nc, flat)
        return flint.nmod_mat(nr, nc, [int(x) for x in flat], self.p)

    # -- elements of K ------------------------------------------------------

    def K(self, x: object) -> "ScalarK":
        """Constant, text, or existing element of K."""
        if isinstance(x, ScalarK):
            return x
        if isinstance(x, str):
            return parse_scalar(x, self)
        return ScalarK(self.poly([x]), self.poly([1]), self)

    def z(self, k: int = 1) -> "ScalarK":
        """The monomial z^k (any integer k)."""
        return ScalarK.from_laurent({k: 1}, self)


QQ = BaseField()


def _parse_rational(text: str) -> Fraction:
    if not re.fullmatch(r"\s*[+-]?\d+(\s*/\s*\d+)?\s*", text):
        raise ParseError(f"not a rational number: {text!r}")
    try:
        return Fraction(text.replace(" ", ""))
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {text!r}") from None


def kstr(x) -> str:
    """Canonical text of an element of k."""
    return str(x)


# ---------------------------------------------------------------------------
# K = k(z)


def _ord(poly) -> int:
    for i, c in enumerate(poly.coeffs()):
        if c != 0:
            return i
    raise ValueError("order of the zero polynomial")


def _is_zero(poly) -> bool:
    return poly.degree() < 0


class ScalarK:
    """Reduced quotient num/den of polynomials in z; den is monic."""

    __slots__ = ("field", "num", "den", "_val")

    def __init__(self, num, den, field: BaseField = QQ, _reduced: bool = False) -> None:
        if _is_zero(den):
            raise ZeroDivisionError("zero denominator")
        if _is_zero(num):
            num, den = field.poly([]), field.poly([1])
        elif not _reduced:
            g = num.gcd(den)
            if g.degree() > 0:
                num, den = num // g, den // g
            lc = den.leading_coefficient()
            if lc != 1:
                num, den = num / lc, den / lc
        self.field = field
        self.num = num
        self.den = den
        self._val: float | int | None = None

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_laurent(cls, terms: dict, field: BaseField = QQ) -> "ScalarK":
        """Build sum of c * z^e from a mapping e -> c."""
        terms = {e: c for e, c in terms.items() if field.elem(c) != 0}
        if not terms:
            return cls(field.poly([]), field.poly([1]), field, True)
        low = min(terms)
        shift = -low if low < 0 else 0
        coeffs = [0] * (max(terms) + shift + 1)
        for e, c in terms.items():
            coeffs[e + shift] = c
        den = [0] * shift + [1]
        return cls(field.poly(coeffs), field.poly(den), field, True)

    def _like(self, num, den) -> "ScalarK":
        return ScalarK(num, den, self.field)

    def _coerce(self, other: object) -> "ScalarK":
        if isinstance(other, ScalarK):
            if other.field != self.field:
                raise TypeError("mixing elements of different base fields")
            return other
        return self.field.K(other)

    # -- field operations -----------------------------------------------------

    def __add__(self, other: object) -> "ScalarK":
        o = self._coerce(other)
        if self.den == o.den:
            return self._like(self.num + o.num, self.den)
        return self._like(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "ScalarK":
        return ScalarK(-self.num, self.den, self.field, True)

    def __sub__(self, other: object) -> "ScalarK":
        return self + (-self._coerce(other))

    def __rsub__(self, other: object) -> "ScalarK":
        return self._coerce(other) + (-self)

    def __mul__(self, other: object) -> "ScalarK":
        o = self._coerce(other)
        return self._like(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "ScalarK":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in K")
        return self._like(self.den, self.num)

    def __truediv__(self, other: object) -> "ScalarK":
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other: object) -> "ScalarK":
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "ScalarK":
        if k < 0:
            return self.inverse() ** (-k)
        return self._like(self.num ** k, self.den ** k)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ScalarK):
            return self.field == other.field and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self == self.field.K(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((tuple(int(c) if self.field.p else c for c in self.num.coeffs()),
                     tuple(int(c) if self.field.p else c for c in self.den.coeffs())))

    def is_zero(self) -> bool:
        return _is_zero(self.num)

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- valuation and expansions ---------------------------------------------

    def val(self) -> float | int:
        """z-adic valuation; ``INF`` for zero."""
        if self._val is None:
            self._val = INF if self.is_zero() else _ord(self.num) - _ord(self.den)
        return self._val

    def lead(self):
        """Coefficient of z^val in the Laurent expansion (an element of k)."""
        if self.is_zero():
            return self.field.zero
        n = self.num.coeffs()[_ord(self.num)]
        d = self.den.coeffs()[_ord(self.den)]
        return n / d

    def at_zero(self):
        """Value at z = 0; requires val >= 0."""
        v = self.val()
        if v < 0:
            raise ValueError("pole at z = 0")
        return self.lead() if v == 0 else self.field.zero

    def series(self, prec: int) -> dict:
        """Laurent coefficients c_a for val <= a < val + prec (nonzero ones)."""
        if self.is_zero() or prec <= 0:
            return {}
        nc = self.num.coeffs()
        dc = self.den.coeffs()
        s, t = _ord(self.num), _ord(self.den)
        n1, d1 = nc[s:], dc[t:]
        inv0 = 1 / d1[0]
        zero = self.field.zero
        out: list = []
        for i in range(prec):
            acc = n1[i] if i < len(n1) else zero
            for j in range(1, min(i, len(d1) - 1) + 1):
                acc = acc - d1[j] * out[i - j]
            out.append(acc * inv0)
        v = s - t
        return {v + i: c for i, c in enumerate(out) if c != 0}

    def truncate_below(self, d: int) -> "ScalarK":
        """Laurent polynomial of all expansion terms with exponent < d."""
        v = self.val()
        if v >= d:
            return ScalarK(self.field.poly([]), self.field.poly([1]), self.field, True)
        if self.is_laurent() and self.num.degree() - _ord(self.den) < d:
            return self
        return ScalarK.from_laurent(self.series(int(d - v)), self.field)

    def is_laurent(self) -> bool:
        """True when the denominator is a power of z."""
        return self.den.degree() == _ord(self.den)

    def substitute_power(self, m: int) -> "ScalarK":
        """Image under z -> z^m."""
        if m < 1:
            raise ValueError("m must be positive")

        def spread(poly):
            cs = poly.coeffs()
            out = [0] * (m * (len(cs) - 1) + 1) if cs else []
            for i, c in enumerate(cs):
                out[m * i] = c
            return self.field.poly(out)

        return ScalarK(spread(self.num), spread(self.den), self.field, True)

    # -- text -------------------------------------------------------------------

    def __str__(self) -> str:
        if self.is_laurent():
            t = _ord(self.den)
            terms = {i - t: c for i, c in enumerate(self.num.coeffs()) if c != 0}
            return _format_terms(terms)
        return f"({_format_terms(dict(enumerate(self.num.coeffs())))})/({_format_terms(dict(enumerate(self.den.coeffs())))})"

    def __repr__(self) -> str:
        return f"ScalarK({str(self)!r})"


VectorK = tuple
"""A vector over K is a plain tuple of ScalarK."""


def _format_terms(terms: dict) -> str:
    parts: list[str] = []
    for e in sorted(terms):
        c = terms[e]
        if c == 0:
            continue
        txt = str(c)
        neg = txt.startswith("-")
        if neg:
            txt = txt[1:]
        if e == 0:
            body = txt
        else:
            mono = "z" if e == 1 else f"z^{e}"
            body = mono if txt == "1" else f"{txt}*{mono}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# text grammar

_TERM = re.compile(r"([+-]?)(?:(\d+(?:/\d+)?)(?:\*z(?:\^(-?\d+))?)?|z(?:\^(-?\d+))?)")


def _parse_sum(text: str, field: BaseField) -> ScalarK:
    s = text.replace(" ", "")
    if not s:
        raise ParseError("empty scalar")
    pos = 0
    terms: dict[int, object] = {}
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (not first and not m.group(1)):
            raise ParseError(f"cannot parse scalar {text!r} at offset {pos}")
        sign, coeff, e1, e2 = m.groups()
        if coeff is None and s[m.start():m.end()].lstrip("+-") == "":
            raise ParseError(f"dangling sign in {text!r}")
        if coeff is not None:
            c = field.elem(_parse_rational(coeff))
            exp = int(e1) if e1 is not None else (1 if "*z" in m.group(0) else 0)
        else:
            c = field.one
            exp = int(e2) if e2 is not None else 1
        if sign == "-":
            c = -c
        terms[exp] = terms.get(exp, field.zero) + c
        pos = m.end()
        first = False
    return ScalarK.from_laurent(terms, field)


def parse_scalar(text: str, field: BaseField = QQ) -> ScalarK:
    """Parse ``"z^-1 + 1"``, ``"2*z^3 - 1/2"`` or ``"(1-z)/(1+z)"``."""
    if not isinstance(text, str):
        raise ParseError(f"scalar must be a string, got {text!r}")
    s = text.strip()
    m = re.fullmatch(r"\(([^()]*)\)\s*/\s*\(([^()]*)\)", s)
    if m:
        num, den = _parse_sum(m.group(1), field), _parse_sum(m.group(2), field)
        if den.is_zero():
            raise ParseError(f"zero denominator in {text!r}")
        return num / den
    if "(" in s or ")" in s:
        raise ParseError(f"unbalanced or nested quotient in {text!r}")
    return _parse_sum(s, field)


# ---------------------------------------------------------------------------
# matrices over K


class MatrixK:
    """Immutable dense matrix over K, stored by rows."""

    __slots__ = ("rows", "nrows", "ncols", "field")

    def __init__(self, rows: Iterable[Iterable[ScalarK]], field: BaseField | None = None,
                 ncols: int | None = None) -> None:
        self.rows = tuple(tuple(r) for r in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else (ncols or 0)
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("ragged matrix")
        if field is None:
            field = self.rows[0][0].field if self.rows and self.ncols else QQ
        self.field = field

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[ScalarK]], field: BaseField | None = None) -> "MatrixK":
        if not cols:
            raise ValueError("no columns")
        return cls(zip(*cols), field)

    @classmethod
    def identity(cls, r: int, field: BaseField = QQ) -> "MatrixK":
        one, zero = field.K(1), field.K(0)
        return cls([[one if i == j else zero for j in range(r)] for i in range(r)], field)

    def __getitem__(self, ij: tuple[int, int]) -> ScalarK:
        return self.rows[ij[0]][ij[1]]

    def col(self, j: int) -> VectorK:
        return tuple(r[j] for r in self.rows)

    def cols(self) -> list[VectorK]:
        return [self.col(j) for j in range(self.ncols)]

    def transpose(self) -> "MatrixK":
        return MatrixK(zip(*self.rows), self.field, self.nrows) if self.ncols else MatrixK([], self.field)

    def __matmul__(self, other):
        if isinstance(other, MatrixK):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            oc = other.cols()
            return MatrixK([[_dot(r, c, self.field) for c in oc] for r in self.rows], self.field)
        v = tuple(other)
        if len(v) != self.ncols:
            raise ValueError("shape mismatch")
        return tuple(_dot(r, v, self.field) for r in self.rows)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MatrixK) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def map(self, fn) -> "MatrixK":
        return MatrixK([[fn(x) for x in r] for r in self.rows], self.field, self.ncols)

    def det(self) -> ScalarK:
        return det(self)

    def rank(self) -> int:
        return rank(self)

    def inverse(self) -> "MatrixK":
        return inverse(self)

    def __str__(self) -> str:
        return "[" + "; ".join(", ".join(str(x) for x in r) for r in self.rows) + "]"

    __repr__ = __str__


def _dot(a: Sequence[ScalarK], b: Sequence[ScalarK], field: BaseField) -> ScalarK:
    acc = field.K(0)
    for x, y in zip(a, b):
        if not x.is_zero() and not y.is_zero():
            acc = acc + x * y
    return acc


def _lcm(a, b):
    return (a * b) // a.gcd(b)


def _poly_rows(rows: Sequence[Sequence[ScalarK]], field: BaseField):
    """Clear denominators row by row; returns polynomial rows and multipliers."""
    out, mults = [], []
    for r in rows:
        m = field.poly([1])
        for x in r:
            if x.den.degree() > 0:
                m = _lcm(m, x.den)
        out.append([(x.num * (m // x.den)) for x in r])
        mults.append(m)
    return out, mults


def _bareiss(P: list, field: BaseField, ncols: int | None = None):
    """In-place fraction-free elimination over k[z].

    Eliminates on the first ``ncols`` columns; the remaining columns are
    carried along (augmented system).  Returns (rank, pivot columns, sign).
    """
    m = len(P)
    n = len(P[0]) if m else 0
    if ncols is None:
        ncols = n
    prev = field.poly([1])
    r, sign, piv = 0, 1, []
    for c in range(ncols):
        if r == m:
            break
        best = None
        for i in range(r, m):
            if not _is_zero(P[i][c]) and (best is None or P[i][c].degree() < P[best][c].degree()):
                best = i
        if best is None:
            continue
        if best != r:
            P[r], P[best] = P[best], P[r]
            sign = -sign
        prc = P[r][c]
        for i in range(r + 1, m):
            pic = P[i][c]
            row = P[i]
            top = P[r]
            for j in range(c + 1, n):
                row[j] = (prc * row[j] - pic * top[j]) // prev
            row[c] = field.poly([])
        # rows above the pivot are not touched: this is forward elimination only
        prev = prc
        piv.append(c)
        r += 1
    return r, piv, sign


def rank(A: MatrixK) -> int:
    """Exact rank over K."""
    if A.nrows == 0 or A.ncols == 0:
        return 0
    P, _ = _poly_rows(A.rows, A.field)
    return _bareiss(P, A.field)[0]


def det(A: MatrixK) -> ScalarK:
    """Exact determinant over K."""
    if A.nrows != A.ncols:
        raise ValueError("determinant of a non-square matrix")
    n = A.nrows
    if n == 0:
        return A.field.K(1)
    P, mults = _poly_rows(A.rows, A.field)
    r, _, sign = _bareiss(P, A.field)
    if r < n:
        return A.field.K(0)
    den = A.field.poly([1])
    for m in mults:
        den = den * m
    num = P[n - 1][n - 1] * sign
    return ScalarK(num, den, A.field)


def _back_substitute(P: list, piv: list[int], rhs_cols: range, field: BaseField, n: int):
    """Solve the echelon system for each right-hand column in ``rhs_cols``."""
    sols = []
    for b in rhs_cols:
        x = [field.K(0)] * n
        for i in range(len(piv) - 1, -1, -1):
            c = piv[i]
            acc = ScalarK(P[i][b], field.poly([1]), field)
            for j in range(c + 1, n):
                if not _is_zero(P[i][j]) and not x[j].is_zero():
                    acc = acc - ScalarK(P[i][j], field.poly([1]), field) * x[j]
            x[c] = acc / ScalarK(P[i][c], field.poly([1]), field)
        sols.append(tuple(x))
    return sols


def solve_linear(A: MatrixK, b: Sequence[ScalarK]) -> VectorK:
    """Unique x with A x = b; ``SingularMatrix`` when det A = 0."""
    return solve_many(A, [b])[0]


def solve_many(A: MatrixK, bs: Sequence[Sequence[ScalarK]]) -> list[VectorK]:
    """Solve A x = b for several right-hand sides sharing one elimination."""
    n = A.nrows
    if n != A.ncols:
        raise ValueError("solve_linear needs a square matrix")
    rows = [list(A.rows[i]) + [b[i] for b in bs] for i in range(n)]
    P, _ = _poly_rows(rows, A.field)
    r, piv, _ = _bareiss(P, A.field, n)
    if r < n:
        raise SingularMatrix("matrix is singular over K")
    return _back_substitute(P, piv, range(n, n + len(bs)), A.field, n)


def inverse(A: MatrixK) -> MatrixK:
    n = A.nrows
    I = MatrixK.identity(n, A.field)
    return MatrixK.from_columns(solve_many(A, I.cols()), A.field)


def nullspace(A: MatrixK) -> list[VectorK]:
    """Basis of {x : A x = 0} over K, one vector per free column."""
    n = A.ncols
    if A.nrows == 0:
        return [MatrixK.identity(n, A.field).col(j) for j in range(n)]
    P, _ = _poly_rows(A.rows, A.field)
    r, piv, _ = _bareiss(P, A.field)
    field = A.field
    basis = []
    for f in (c for c in range(n) if c not in piv):
        x = [field.K(0)] * n
        x[f] = field.K(1)
        for i in range(r - 1, -1, -1):
            c = piv[i]
            acc = field.K(0)
            for j in range(c + 1, n):
                if not _is_zero(P[i][j]) and not x[j].is_zero():
                    acc = acc - ScalarK(P[i][j], field.poly([1]), field) * x[j]
            x[c] = acc / ScalarK(P[i][c], field.poly([1]), field)
        basis.append(tuple(x))
    return basis


def vec(entries: Iterable[object], field: BaseField = QQ) -> VectorK:
    """Vector over K from scalars, numbers or text."""
    return tuple(field.K(e) for e in entries)


# ---------------------------------------------------------------------------
# linear algebra over k


def krref(rows: Sequence[Sequence], field: BaseField) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over k: (nonzero rows, pivot columns)."""
    if not rows or not rows[0]:
        return [], []
    M, rk = field.matrix(rows).rref()
    out = [[M[i, j] for j in range(M.ncols())] for i in range(rk)]
    piv = [next(j for j, x in enumerate(r) if x != 0) for r in out]
    return out, piv


def krank(rows: Sequence[Sequence], field: BaseField) -> int:
    if not rows or not rows[0]:
        return 0
    return field.matrix(rows).rank()


def kdet(rows: Sequence[Sequence], field: BaseField):
    return field.matrix(rows).det() if rows else field.one


def knullspace(rows: Sequence[Sequence], field: BaseField, ncols: int | None = None) -> list[list]:
    """Basis of the right kernel over k."""
    n = len(rows[0]) if rows else (ncols or 0)
    R, piv = krref(rows, field) if rows else ([], [])
    basis = []
    for f in (c for c in range(n) if c not in piv):
        x = [field.zero] * n
        x[f] = field.one
        for r, c in zip(R, piv):
            x[c] = -r[f]
        basis.append(x)
    return basis


def projective_normalize(v: Sequence, field: BaseField) -> tuple:
    """Scale so the first nonzero coordinate is 1."""
    lead = next((x for x in v if x != 0), None)
    if lead is None:
        return tuple(v)
    inv = field.one / lead
    return tuple(x * inv for x in v)
