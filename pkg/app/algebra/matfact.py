"""
Matrix Factorizations and the Derivation Ideal

This module handles:
- Splittings f = x*fx + y*fy + z*fz of a hypersurface equation
- The resolution matrices A, B, C, D of the residue field and their checks
- 2x2 minors of two columns of D, and their monomialization through a
  toric parametrization x -> u^a, y -> u^b, z -> u^c
- The derivation ideal of the A_n singularity, computed end to end
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from app.algebra.polynomial import ZERO, MatP, PolyQ, X, Y, Z
from app.errors import (
    AllZeroMinorsError,
    FactorizationError,
    InputError,
    InvalidColumnsError,
    InvalidSplittingError,
    MatrixShapeError,
    NotInSemigroupError,
    NotMonomialError,
)
from app.toric.blowup import MonomialIdeal, minimalize
from app.toric.lattice import LatticeVec, vec
from app.toric.semigroup import AffineSemigroup, gamma, member

logger = logging.getLogger(__name__)

DEFAULT_COLUMNS = (3, 4)


# ============================================================================
# SPLITTINGS AND RESOLUTION MATRICES
# ============================================================================

@dataclass(frozen=True)
class Splitting:
    """f together with fx, fy, fz such that f = x*fx + y*fy + z*fz."""

    f: PolyQ
    fx: PolyQ
    fy: PolyQ
    fz: PolyQ

    def __post_init__(self):
        if X * self.fx + Y * self.fy + Z * self.fz != self.f:
            raise InvalidSplittingError(
                f"x*({self.fx}) + y*({self.fy}) + z*({self.fz}) != {self.f}"
            )

    @classmethod
    def an(cls, n: int) -> "Splitting":
        """The splitting (0, -y^n, x) of xz - y^(n+1)."""
        if n < 1:
            raise InputError(f"A_n needs n >= 1, got {n}")
        return cls(X * Z - Y ** (n + 1), ZERO, -(Y**n), X)


def build_A() -> MatP:
    return MatP.from_rows([[X], [Y], [Z]])


def build_BCD(s: Splitting) -> tuple[MatP, MatP, MatP]:
    fx, fy, fz = s.fx, s.fy, s.fz
    B = MatP.from_rows([
        [ZERO, -Z, Y],
        [Z, ZERO, -X],
        [-Y, X, ZERO],
        [fx, fy, fz],
    ])
    C = MatP.from_rows([
        [ZERO, fz, -fy, X],
        [-fz, ZERO, fx, Y],
        [fy, -fx, ZERO, Z],
        [-X, -Y, -Z, ZERO],
    ])
    D = MatP.from_rows([
        [ZERO, -Z, Y, -fx],
        [Z, ZERO, -X, -fy],
        [-Y, X, ZERO, -fz],
        [fx, fy, fz, ZERO],
    ])
    return B, C, D


def check_matrix_factorization(C: MatP, D: MatP, f: PolyQ) -> bool:
    """True iff C*D = D*C = f*Id_4."""
    if C.shape != (4, 4) or D.shape != (4, 4):
        raise MatrixShapeError(f"expected two 4x4 matrices, got {C.shape} and {D.shape}")
    expected = MatP.scalar(4, f)
    return C @ D == expected and D @ C == expected


def check_complex(A: MatP, B: MatP, C: MatP, D: MatP, f: PolyQ) -> bool:
    """Consecutive products B*A, C*B, D*C, C*D vanish modulo f."""
    return all(
        product.all_divisible_by(f)
        for product in (B @ A, C @ B, D @ C, C @ D)
    )


# ============================================================================
# MINORS
# ============================================================================

def _positive_leading(p: PolyQ) -> PolyQ:
    _, c = p.leading()
    return -p if c < 0 else p


def minors_ideal(D: MatP, cols: tuple[int, int] = DEFAULT_COLUMNS) -> list[PolyQ]:
    """
    Nonzero 2x2 minors of the two chosen columns (1-based), leading coefficient positive.

    Raises:
        InvalidColumnsError: columns repeated or out of range
        AllZeroMinorsError: the columns are not of maximal rank
    """
    if len(cols) != 2:
        raise InvalidColumnsError(f"expected two columns, got {cols}")
    c1, c2 = cols
    if c1 == c2 or not (1 <= c1 <= D.cols and 1 <= c2 <= D.cols):
        raise InvalidColumnsError(f"columns {cols} must be distinct and within 1..{D.cols}")
    out: list[PolyQ] = []
    for i, j in combinations(range(1, D.rows + 1), 2):
        minor = D.entry(i, c1) * D.entry(j, c2) - D.entry(j, c1) * D.entry(i, c2)
        if minor.is_zero():
            continue
        minor = _positive_leading(minor)
        if minor not in out:
            out.append(minor)
    if not out:
        raise AllZeroMinorsError(f"every minor of columns {cols} vanishes")
    return out


def minimal_monomials(polys) -> list[PolyQ]:
    """
    Divisibility-minimal monic monomials generating the same ideal.

    Sorted lexicographically descending (x > y > z).

    Raises:
        NotMonomialError: some input has more than one term
    """
    exps = set()
    for p in polys:
        if not p.is_monomial():
            raise NotMonomialError(f"{p} is not a monomial")
        exps.add(next(iter(p.terms)))
    minimal = [
        e for e in exps
        if not any(o != e and all(a <= b for a, b in zip(o, e)) for o in exps)
    ]
    return [PolyQ.monomial(*e) for e in sorted(minimal, reverse=True)]


# ============================================================================
# MONOMIALIZATION
# ============================================================================

@dataclass(frozen=True)
class ToricParam:
    """Exponent vectors of the images of x, y, z in a two-dimensional torus."""

    img_x: LatticeVec
    img_y: LatticeVec
    img_z: LatticeVec

    def __post_init__(self):
        for name in ("img_x", "img_y", "img_z"):
            object.__setattr__(self, name, vec(getattr(self, name)))

    @classmethod
    def an(cls, n: int) -> "ToricParam":
        """x -> u, y -> uv, z -> u^n v^(n+1)."""
        return cls(LatticeVec(1, 0), LatticeVec(1, 1), LatticeVec(n, n + 1))

    def validate(self, S: AffineSemigroup) -> None:
        for image in (self.img_x, self.img_y, self.img_z):
            if not member(S, image):
                raise NotInSemigroupError(f"parametrization image {image} is not in {S}")

    def image(self, e: tuple[int, int, int]) -> LatticeVec:
        ex, ey, ez = e
        return self.img_x.scale(ex) + self.img_y.scale(ey) + self.img_z.scale(ez)


def monomialize(gens, p: ToricParam, S: AffineSemigroup) -> MonomialIdeal:
    """
    Push polynomials through `p` and collect the resulting monomial ideal over S.

    Raises:
        NotInSemigroupError: an image of x, y or z is outside S
        NotMonomialError: some generator does not map to a single monomial
    """
    p.validate(S)
    exps = []
    for g in gens:
        image: dict[LatticeVec, Fraction] = {}
        for e, c in g.terms.items():
            m = p.image(e)
            image[m] = image.get(m, Fraction(0)) + c
        survivors = [m for m, c in image.items() if c != 0]
        if len(survivors) != 1:
            raise NotMonomialError(f"{g} maps to {len(survivors)} monomials")
        exps.append(survivors[0])
    ideal = minimalize(MonomialIdeal(S, tuple(exps)))
    return MonomialIdeal(S, tuple(sorted(ideal.exps)))


@lru_cache(maxsize=None)
def derivation_ideal_An(n: int) -> MonomialIdeal:
    """
    Blow-up center of the derivation module of A_n, as a monomial ideal over Γ_n.

    Runs the full pipeline: splitting, resolution matrices, factorization
    check, minors of columns (3, 4), monomialization.

    Raises:
        FactorizationError: C*D != f*Id_4 for the built-in splitting
    """
    s = Splitting.an(n)
    _, C, D = build_BCD(s)
    if not check_matrix_factorization(C, D, s.f):
        raise FactorizationError(f"C*D != f*Id_4 for A_{n}")
    ideal = monomialize(minors_ideal(D, DEFAULT_COLUMNS), ToricParam.an(n), gamma(n))
    logger.debug("derivation ideal of A_%d: %s", n, [str(m) for m in ideal.exps])
    return ideal
