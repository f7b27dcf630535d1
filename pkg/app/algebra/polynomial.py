"""
Exact Polynomials and Matrices over QQ[x, y, z]

This module handles:
- PolyQ: sparse polynomials with rational coefficients (backed by sympy's Poly over QQ)
- Parsing from and printing to the plain-text format `3/2*x^2*z - y^4`
- MatP: small dense matrices of PolyQ with exact products

Printing order is graded lexicographic with x > y > z, descending.

The text format is a sum of terms separated by `+` / `-`. A term is an
optional rational coefficient `a` or `a/b` followed by `*`-joined factors
`x`, `x^k` (or `x**k`) in the variables x, y, z. Nothing else is accepted,
and exponents are bounded by MAX_EXPONENT.
"""

import re
from dataclasses import dataclass
from fractions import Fraction

import sympy
from sympy import QQ, Poly, Rational

from app.errors import MatrixShapeError, PolynomialParseError

X_SYM, Y_SYM, Z_SYM = sympy.symbols("x y z")
GENS = (X_SYM, Y_SYM, Z_SYM)
VARIABLES = ("x", "y", "z")
MAX_EXPONENT = 1000

_TOKEN = re.compile(r"\s*(?:(?P<num>[0-9]+)|(?P<var>[xyz])|(?P<op>\*\*|[-+*/^]))")

Exponent = tuple[int, int, int]


def _grlex(e: Exponent) -> tuple[int, Exponent]:
    return (sum(e), e)


# ============================================================================
# POLYNOMIALS
# ============================================================================

class PolyQ:
    """Immutable polynomial in x, y, z with exact rational coefficients."""

    __slots__ = ("_poly",)

    def __init__(self, poly: Poly):
        self._poly = poly

    @classmethod
    def from_terms(cls, terms: dict[Exponent, Fraction | int]) -> "PolyQ":
        rep = {
            tuple(e): Rational(Fraction(c).numerator, Fraction(c).denominator)
            for e, c in terms.items() if c != 0
        }
        if not rep:
            return cls(Poly(0, *GENS, domain=QQ))
        return cls(Poly.from_dict(rep, *GENS, domain=QQ))

    @classmethod
    def constant(cls, c: Fraction | int) -> "PolyQ":
        return cls.from_terms({(0, 0, 0): c})

    @classmethod
    def monomial(cls, ex: int, ey: int, ez: int, coeff: Fraction | int = 1) -> "PolyQ":
        return cls.from_terms({(ex, ey, ez): coeff})

    @classmethod
    def parse(cls, text: str) -> "PolyQ":
        """
        Parse `x*z - y^4`, `3/2*x^2 + z`, `0`, ...

        The text is checked token by token against the format in the module
        docstring; it is never evaluated.

        Raises:
            PolynomialParseError: malformed text, unknown symbols or exponents above MAX_EXPONENT
        """
        if not text or not text.strip():
            raise PolynomialParseError("empty polynomial")
        try:
            terms = _TermReader(text).read()
        except ValueError as exc:
            raise PolynomialParseError(f"cannot parse polynomial {text!r}: {exc}") from exc
        return cls.from_terms(terms)

    # ------------------------------------------------------------------
    # Ring operations
    # ------------------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "PolyQ | None":
        if isinstance(other, PolyQ):
            return other
        if isinstance(other, (int, Fraction)):
            return PolyQ.constant(other)
        return None

    def __add__(self, other) -> "PolyQ":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return PolyQ(self._poly + other._poly)

    __radd__ = __add__

    def __sub__(self, other) -> "PolyQ":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return PolyQ(self._poly - other._poly)

    def __rsub__(self, other) -> "PolyQ":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return PolyQ(other._poly - self._poly)

    def __mul__(self, other) -> "PolyQ":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return PolyQ(self._poly * other._poly)

    __rmul__ = __mul__

    def __neg__(self) -> "PolyQ":
        return PolyQ(-self._poly)

    def __pow__(self, k: int) -> "PolyQ":
        return PolyQ(self._poly**k)

    def scale(self, c: Fraction | int) -> "PolyQ":
        return self * PolyQ.constant(c)

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    # ------------------------------------------------------------------
    # Inspection
    # ------------------------------------------------------------------

    @property
    def terms(self) -> dict[Exponent, Fraction]:
        return {
            tuple(int(e) for e in exps): Fraction(int(c.p), int(c.q))
            for exps, c in self._poly.terms() if c != 0
        }

    def is_zero(self) -> bool:
        return self._poly.is_zero

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def leading(self) -> tuple[Exponent, Fraction]:
        """Leading term under grlex; the zero polynomial has none."""
        terms = self.terms
        if not terms:
            raise ValueError("the zero polynomial has no leading term")
        e = max(terms, key=_grlex)
        return e, terms[e]

    def divisible_by(self, f: "PolyQ") -> bool:
        if f.is_zero():
            return self.is_zero()
        return self._poly.rem(f._poly).is_zero

    # ------------------------------------------------------------------
    # Printing
    # ------------------------------------------------------------------

    def to_text(self) -> str:
        terms = self.terms
        if not terms:
            return "0"
        out = ""
        for e in sorted(terms, key=_grlex, reverse=True):
            c = terms[e]
            sign = "-" if c < 0 else "+"
            body = _term_text(e, abs(c))
            out = f"-{body}" if not out and sign == "-" else (body if not out else f"{out} {sign} {body}")
        return out

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"PolyQ({self.to_text()!r})"


def _term_text(e: Exponent, c: Fraction) -> str:
    factors = [
        name if k == 1 else f"{name}^{k}"
        for name, k in zip(("x", "y", "z"), e) if k
    ]
    if not factors:
        return str(c)
    if c == 1:
        return "*".join(factors)
    return "*".join([str(c), *factors])


ZERO = PolyQ.constant(0)
ONE = PolyQ.constant(1)
X = PolyQ.monomial(1, 0, 0)
Y = PolyQ.monomial(0, 1, 0)
Z = PolyQ.monomial(0, 0, 1)


# ============================================================================
# PARSING
# ============================================================================

def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos, end = 0, len(text.rstrip())
    while pos < end:
        match = _TOKEN.match(text, pos)
        if match is None:
            bad = text[pos:].lstrip()[:1]
            raise PolynomialParseError(f"unexpected character {bad!r} in {text!r}")
        tokens.append((match.lastgroup, match.group(match.lastgroup)))
        pos = match.end()
    return tokens


class _TermReader:
    """Recursive-descent reader over the tokens of one polynomial."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def _peek(self) -> tuple[str, str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else ("end", "")

    def _error(self, expected: str) -> PolynomialParseError:
        kind, value = self._peek()
        found = "end of input" if kind == "end" else repr(value)
        return PolynomialParseError(f"expected {expected}, found {found} in {self.text!r}")

    def _take(self, kind: str) -> str:
        found, value = self._peek()
        if found != kind:
            raise self._error("a number" if kind == "num" else "x, y or z")
        self.pos += 1
        return value

    def _sign(self) -> int | None:
        token = self._peek()
        if token in (("op", "+"), ("op", "-")):
            self.pos += 1
            return -1 if token[1] == "-" else 1
        return None

    def read(self) -> dict[Exponent, Fraction]:
        terms: dict[Exponent, Fraction] = {}
        sign = self._sign() or 1
        while True:
            e, c = self._term()
            terms[e] = terms.get(e, Fraction(0)) + sign * c
            if self._peek()[0] == "end":
                return terms
            sign = self._sign()
            if sign is None:
                raise self._error("'+' or '-'")

    def _term(self) -> tuple[Exponent, Fraction]:
        exps = [0, 0, 0]
        coeff = Fraction(1)
        if self._peek()[0] == "num":
            coeff = Fraction(int(self._take("num")))
            if self._peek() == ("op", "/"):
                self.pos += 1
                denominator = int(self._take("num"))
                if denominator == 0:
                    raise PolynomialParseError(f"zero denominator in {self.text!r}")
                coeff /= denominator
            if self._peek() != ("op", "*"):
                return (0, 0, 0), coeff
            self.pos += 1
        self._factor(exps)
        while self._peek() == ("op", "*"):
            self.pos += 1
            self._factor(exps)
        return (exps[0], exps[1], exps[2]), coeff

    def _factor(self, exps: list[int]) -> None:
        var = self._take("var")
        k = 1
        if self._peek() in (("op", "^"), ("op", "**")):
            self.pos += 1
            digits = self._take("num")
            if len(digits) > len(str(MAX_EXPONENT)):
                raise PolynomialParseError(f"exponent of {var} exceeds {MAX_EXPONENT} in {self.text!r}")
            k = int(digits)
        slot = VARIABLES.index(var)
        exps[slot] += k
        if exps[slot] > MAX_EXPONENT:
            raise PolynomialParseError(f"exponent of {var} exceeds {MAX_EXPONENT} in {self.text!r}")


# ============================================================================
# MATRICES
# ============================================================================

@dataclass(frozen=True)
class MatP:
    """Dense rows x cols matrix of PolyQ."""

    entries: tuple[tuple[PolyQ, ...], ...]

    def __post_init__(self):
        rows = tuple(
            tuple(p if isinstance(p, PolyQ) else PolyQ.constant(p) for p in row)
            for row in self.entries
        )
        if not rows or not rows[0] or any(len(row) != len(rows[0]) for row in rows):
            raise MatrixShapeError("matrix rows must be nonempty and of equal length")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_rows(cls, rows) -> "MatP":
        return cls(tuple(tuple(row) for row in rows))

    @classmethod
    def scalar(cls, size: int, p: PolyQ) -> "MatP":
        return cls.from_rows([[p if i == j else ZERO for j in range(size)] for i in range(size)])

    @classmethod
    def identity(cls, size: int) -> "MatP":
        return cls.scalar(size, ONE)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def entry(self, i: int, j: int) -> PolyQ:
        """1-based access."""
        return self.entries[i - 1][j - 1]

    def with_entry(self, i: int, j: int, p: PolyQ) -> "MatP":
        rows = [list(row) for row in self.entries]
        rows[i - 1][j - 1] = p
        return MatP.from_rows(rows)

    def __matmul__(self, other: "MatP") -> "MatP":
        if self.cols != other.rows:
            raise MatrixShapeError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        for row in self.entries:
            out_row = []
            for j in range(other.cols):
                acc = ZERO
                for k, p in enumerate(row):
                    q = other.entries[k][j]
                    if not p.is_zero() and not q.is_zero():
                        acc = acc + p * q
                out_row.append(acc)
            out.append(out_row)
        return MatP.from_rows(out)

    def all_divisible_by(self, f: PolyQ) -> bool:
        return all(p.divisible_by(f) for row in self.entries for p in row)

    def to_text(self) -> list[list[str]]:
        return [[p.to_text() for p in row] for row in self.entries]
