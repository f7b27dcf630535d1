"""
Rank-2 Lattice Geometry

This module handles the exact integer combinatorics every other module sits on:
- Lattice vectors with checked 64-bit coordinates
- Pointed rational cones, their duals and containment tests
- Hilbert bases via the Hirzebruch-Jung boundary walk
- GL(2,Z) normal forms, quotient-type classification and cone isomorphisms

Conventions:
- Cones are always stored counterclockwise: det(r1, r2) > 0.
- A cone handed to `gl2z_classify` is the cone of a semigroup (M side); the
  returned type is that of the surface Spec C[c ∩ Z^2], read off the dual cone
  in the normal form with rays (0,1) and (n,-q).
"""

from dataclasses import dataclass
from functools import cmp_to_key, lru_cache
from math import gcd
from operator import index

from sympy import mod_inverse
from sympy.core.intfunc import igcdex

from app.errors import (
    DegenerateConeError,
    InputError,
    InvalidQuotientTypeError,
    LatticeOverflowError,
    NotPointedError,
    ZeroVectorError,
)

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


def checked(value: int) -> int:
    """Return `value` unchanged, or raise if it leaves the signed 64-bit range."""
    if not INT64_MIN <= value <= INT64_MAX:
        raise LatticeOverflowError(f"{value} does not fit in 64 bits")
    return value


# ============================================================================
# VECTORS
# ============================================================================

@dataclass(frozen=True, order=True)
class LatticeVec:
    a: int
    b: int

    def __post_init__(self):
        object.__setattr__(self, "a", checked(index(self.a)))
        object.__setattr__(self, "b", checked(index(self.b)))

    def __add__(self, other: "LatticeVec") -> "LatticeVec":
        return LatticeVec(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "LatticeVec") -> "LatticeVec":
        return LatticeVec(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "LatticeVec":
        return LatticeVec(-self.a, -self.b)

    def scale(self, k: int) -> "LatticeVec":
        return LatticeVec(k * self.a, k * self.b)

    def dot(self, other: "LatticeVec") -> int:
        return checked(self.a * other.a + self.b * other.b)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def as_pair(self) -> tuple[int, int]:
        return (self.a, self.b)

    def __str__(self) -> str:
        return f"({self.a},{self.b})"


ZERO = LatticeVec(0, 0)


def vec(v: "LatticeVec | tuple[int, int] | list[int]") -> LatticeVec:
    """Coerce a pair into a LatticeVec."""
    if isinstance(v, LatticeVec):
        return v
    a, b = v
    return LatticeVec(a, b)


def det(v: LatticeVec, w: LatticeVec) -> int:
    return checked(v.a * w.b - v.b * w.a)


def primitive(v: LatticeVec) -> LatticeVec:
    if v.is_zero():
        raise ZeroVectorError("the zero vector has no primitive direction")
    g = gcd(v.a, v.b)
    return LatticeVec(v.a // g, v.b // g)


def _ccw_compare(v: LatticeVec, w: LatticeVec) -> int:
    # Valid for vectors inside one open half-plane; parallel vectors by length.
    d = det(v, w)
    if d:
        return -1 if d > 0 else 1
    return (v.dot(v) > w.dot(w)) - (v.dot(v) < w.dot(w))


def sort_ccw(vectors) -> list[LatticeVec]:
    """Sort vectors of a pointed cone counterclockwise."""
    return sorted(vectors, key=cmp_to_key(_ccw_compare))


# ============================================================================
# CONES
# ============================================================================

@dataclass(frozen=True)
class Cone2:
    """Pointed two-dimensional cone, rays primitive and counterclockwise."""

    r1: LatticeVec
    r2: LatticeVec

    def __post_init__(self):
        r1, r2 = primitive(vec(self.r1)), primitive(vec(self.r2))
        d = det(r1, r2)
        if d == 0:
            if r1.dot(r2) < 0:
                raise NotPointedError(f"rays {r1} and {r2} span a line")
            raise DegenerateConeError(f"rays {r1} and {r2} are collinear")
        if d < 0:
            r1, r2 = r2, r1
        object.__setattr__(self, "r1", r1)
        object.__setattr__(self, "r2", r2)

    @property
    def index(self) -> int:
        return det(self.r1, self.r2)

    def contains(self, v: LatticeVec) -> bool:
        return det(self.r1, v) >= 0 and det(v, self.r2) >= 0

    def contains_strictly(self, v: LatticeVec) -> bool:
        return det(self.r1, v) > 0 and det(v, self.r2) > 0

    def positive_functional(self) -> LatticeVec:
        """Integral functional that is >= 1 on every nonzero lattice point of the cone."""
        # u.v = det(r1, v) + det(v, r2)
        return LatticeVec(self.r2.b - self.r1.b, self.r1.a - self.r2.a)

    def __str__(self) -> str:
        return f"<{self.r1},{self.r2}>"


@dataclass(frozen=True)
class DegenerateCone:
    """One-dimensional cone: the ray spanned by a primitive vector."""

    ray: LatticeVec

    def contains(self, v: LatticeVec) -> bool:
        return det(self.ray, v) == 0 and self.ray.dot(v) >= 0

    def positive_functional(self) -> LatticeVec:
        return self.ray

    def __str__(self) -> str:
        return f"<{self.ray}>"


def cone_hull(vs) -> Cone2 | DegenerateCone:
    """
    Extreme rays of the convex cone generated by `vs`.

    Returns a DegenerateCone when every vector points the same way; callers
    that need a two-dimensional cone must check for it.

    Raises:
        ZeroVectorError: a generator is zero
        NotPointedError: the generated cone contains a line
    """
    if not vs:
        raise InputError("cone_hull needs at least one vector")
    rays = list(dict.fromkeys(primitive(vec(v)) for v in vs))

    def _ahead(v: LatticeVec, w: LatticeVec) -> bool:
        # w is reached from v by turning counterclockwise less than half a turn
        d = det(v, w)
        return d > 0 or (d == 0 and v.dot(w) > 0)

    first = [r for r in rays if all(_ahead(r, w) for w in rays)]
    last = [r for r in rays if all(_ahead(w, r) for w in rays)]
    if not first or not last:
        raise NotPointedError("the generated cone contains a line")
    if first[0] == last[0]:
        return DegenerateCone(first[0])
    return Cone2(first[0], last[0])


def cone_contains(c: Cone2, v: LatticeVec) -> bool:
    return c.contains(v)


def dual_cone(c: Cone2) -> Cone2:
    """Inner-normal dual; an involution between the M and N sides."""
    return Cone2(LatticeVec(c.r2.b, -c.r2.a), LatticeVec(-c.r1.b, c.r1.a))


# ============================================================================
# UNIMODULAR TRANSFORMS
# ============================================================================

@dataclass(frozen=True)
class Unimodular:
    """Integer matrix [[a, b], [c, d]] with determinant ±1, acting on columns."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c not in (1, -1):
            raise InputError(f"{self.as_rows()} is not unimodular")

    @classmethod
    def from_columns(cls, u: LatticeVec, w: LatticeVec) -> "Unimodular":
        return cls(u.a, w.a, u.b, w.b)

    @property
    def determinant(self) -> int:
        return self.a * self.d - self.b * self.c

    def apply(self, v: LatticeVec) -> LatticeVec:
        return LatticeVec(self.a * v.a + self.b * v.b, self.c * v.a + self.d * v.b)

    def apply_cone(self, cone: Cone2) -> Cone2:
        return Cone2(self.apply(cone.r1), self.apply(cone.r2))

    def inverse(self) -> "Unimodular":
        e = self.determinant
        return Unimodular(e * self.d, -e * self.b, -e * self.c, e * self.a)

    def __matmul__(self, other: "Unimodular") -> "Unimodular":
        return Unimodular(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def as_rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]


IDENTITY = Unimodular(1, 0, 0, 1)
SWAP = Unimodular(0, 1, 1, 0)


# ============================================================================
# QUOTIENT TYPES AND NORMAL FORMS
# ============================================================================

@dataclass(frozen=True)
class QuotientType:
    """Cyclic quotient singularity 1/n(1,q); n = 1 is the smooth cone."""

    n: int
    q: int

    def __post_init__(self):
        if self.n < 1 or not 0 <= self.q < self.n or gcd(self.n, self.q) != 1:
            raise InvalidQuotientTypeError(f"({self.n},{self.q}) is not a valid quotient type")

    @property
    def is_smooth(self) -> bool:
        return self.n == 1

    def __str__(self) -> str:
        return f"{self.n},{self.q}"


def hj_fractions(n: int, q: int) -> list[int]:
    """
    Hirzebruch-Jung continued fraction n/q = b1 - 1/(b2 - 1/(...)), all b_i >= 2.

    Raises:
        InvalidQuotientTypeError: unless 0 < q < n and gcd(n, q) = 1
    """
    if not 0 < q < n or gcd(n, q) != 1:
        raise InvalidQuotientTypeError(f"({n},{q}) has no Hirzebruch-Jung expansion")
    out = []
    while q:
        b = -(-n // q)
        out.append(b)
        n, q = q, b * q - n
    return out


def _normal_frame(c: Cone2) -> tuple[int, int, Unimodular]:
    """
    Orientation-preserving frame of `c`.

    Returns (n, q, Q) with Q((n, -q)) = c.r1, Q((0, 1)) = c.r2, 0 <= q < n.
    """
    r1, r2 = c.r1, c.r2
    n = det(r1, r2)
    x, y, _ = igcdex(r2.b, r2.a)
    u = LatticeVec(int(x), -int(y))  # det(u, r2) = 1
    beta = det(u, r1)  # r1 = n*u + beta*r2
    q = (-beta) % n
    u = u + r2.scale((beta + q) // n)
    return n, q, Unimodular.from_columns(u, r2)


def gl2z_classify(c: Cone2) -> QuotientType:
    """Quotient type of the affine toric surface of the semigroup c ∩ Z^2."""
    n, q, _ = _normal_frame(dual_cone(c))
    if n == 1:
        return QuotientType(1, 0)
    return QuotientType(n, min(q, int(mod_inverse(q, n))))


def lattice_isomorphism(source: Cone2, target: Cone2) -> Unimodular | None:
    """A unimodular transform carrying `source` onto `target`, or None if none exists."""
    n1, q1, frame1 = _normal_frame(source)
    n2, q2, frame2 = _normal_frame(target)
    if n1 != n2:
        return None
    if q1 == q2:
        return frame2 @ frame1.inverse()
    # try the orientation-reversing class
    _, q3, frame3 = _normal_frame(SWAP.apply_cone(source))
    if q3 == q2:
        return frame2 @ frame3.inverse() @ SWAP
    return None


@lru_cache(maxsize=4096)
def hilbert_basis(c: Cone2) -> tuple[LatticeVec, ...]:
    """
    Minimal generating set of c ∩ Z^2, sorted counterclockwise from c.r1.

    Walks the boundary of the convex hull of the nonzero lattice points in
    normal-form coordinates: u0 = (0,1), u1 = (1,0), u_{i+1} = b_i*u_i - u_{i-1}.
    """
    n, q, frame = _normal_frame(c)
    if n == 1:
        return (c.r1, c.r2)
    chain = [LatticeVec(0, 1), LatticeVec(1, 0)]
    for b in hj_fractions(n, q):
        chain.append(chain[-1].scale(b) - chain[-2])
    return tuple(frame.apply(v) for v in reversed(chain))
