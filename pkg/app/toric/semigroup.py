"""
Affine Semigroups in Z^2

This module handles:
- Construction of finitely generated pointed subsemigroups of Z^2
- Exact membership through a bounded level-by-level search
- Minimal generators, saturation and classification of the toric surface

Semigroups are immutable; their cone is computed once at construction and the
Hilbert-basis/saturation caches are module-level `lru_cache`s, which are safe
for concurrent readers.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

from app.errors import DegenerateConeError, InputError, ZeroVectorError
from app.toric.lattice import (
    ZERO,
    Cone2,
    DegenerateCone,
    LatticeVec,
    QuotientType,
    Unimodular,
    cone_hull,
    gl2z_classify,
    hilbert_basis,
    sort_ccw,
    vec,
)

logger = logging.getLogger(__name__)


# ============================================================================
# SEMIGROUP
# ============================================================================

@dataclass(frozen=True)
class AffineSemigroup:
    """
    Subsemigroup of Z^2 generated by `gens`.

    Generators are deduplicated and stored counterclockwise from the first
    ray of their cone, so equal generator sets compare and hash equal.

    Raises:
        InputError: no generators
        ZeroVectorError: a generator is zero
        NotPointedError: the generated cone contains a line
    """

    gens: tuple[LatticeVec, ...]
    cone: Cone2 | DegenerateCone = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        unique = list(dict.fromkeys(vec(g) for g in self.gens))
        if not unique:
            raise InputError("a semigroup needs at least one generator")
        if any(g.is_zero() for g in unique):
            raise ZeroVectorError("semigroup generators must be nonzero")
        cone = cone_hull(unique)
        object.__setattr__(self, "gens", tuple(sort_ccw(unique)))
        object.__setattr__(self, "cone", cone)

    @classmethod
    def of(cls, *pairs) -> "AffineSemigroup":
        return cls(tuple(vec(p) for p in pairs))

    @property
    def is_full(self) -> bool:
        return isinstance(self.cone, Cone2)

    def full_cone(self) -> Cone2:
        if not isinstance(self.cone, Cone2):
            raise DegenerateConeError(f"semigroup {self} has a one-dimensional cone")
        return self.cone

    def apply(self, transform: Unimodular) -> "AffineSemigroup":
        return AffineSemigroup(tuple(transform.apply(g) for g in self.gens))

    def as_pairs(self) -> list[tuple[int, int]]:
        return [g.as_pair() for g in self.gens]

    def __str__(self) -> str:
        return "<" + ",".join(str(g) for g in self.gens) + ">"


def gamma(n: int) -> AffineSemigroup:
    """Γ_n = <(1,0),(1,1),(n,n+1)>, the semigroup of the A_n singularity."""
    if n < 1:
        raise InputError(f"Γ_n needs n >= 1, got {n}")
    return AffineSemigroup.of((1, 0), (1, 1), (n, n + 1))


# ============================================================================
# MEMBERSHIP
# ============================================================================

def _member_dp(gens, cone: Cone2 | DegenerateCone, v: LatticeVec) -> bool:
    """
    Is `v` a nonnegative integer combination of `gens`?

    Every generator lies in `cone`, so the positive functional w of the cone
    is >= 1 on each of them and bounds the search by w(v). Partial sums p are
    kept only while v - p stays in the cone.
    """
    if v.is_zero():
        return True
    if not cone.contains(v):
        return False
    w = cone.positive_functional()
    target = w.dot(v)
    steps = [(g, w.dot(g)) for g in gens]
    levels: dict[int, set[LatticeVec]] = defaultdict(set)
    levels[0].add(ZERO)
    for level in range(target):
        for p in levels.pop(level, ()):
            for g, weight in steps:
                reached = level + weight
                if reached > target:
                    continue
                q = p + g
                if q == v:
                    return True
                if reached < target and cone.contains(v - q):
                    levels[reached].add(q)
    return False


@lru_cache(maxsize=4096)
def is_saturated(S: AffineSemigroup) -> bool:
    """True iff S = cone(S) ∩ Z^2 (the surface is normal)."""
    if isinstance(S.cone, DegenerateCone):
        return _member_dp(S.gens, S.cone, S.cone.ray)
    return all(_member_dp(S.gens, S.cone, h) for h in hilbert_basis(S.cone))


def member(S: AffineSemigroup, v: LatticeVec) -> bool:
    v = vec(v)
    if not S.cone.contains(v):
        return False
    if v.is_zero() or is_saturated(S):
        return True
    return _member_dp(S.gens, S.cone, v)


def same_as(S: AffineSemigroup, T: AffineSemigroup) -> bool:
    """Semigroup equality by mutual membership of generators."""
    return all(member(T, g) for g in S.gens) and all(member(S, g) for g in T.gens)


@lru_cache(maxsize=4096)
def minimal_generators(S: AffineSemigroup) -> AffineSemigroup:
    """Drop every generator that is a combination of the remaining ones."""
    gens = list(S.gens)
    for g in S.gens:
        rest = [h for h in gens if h != g]
        # the semigroup never changes, so one pass is stable
        if rest and _member_dp(rest, S.cone, g):
            logger.debug("dropping redundant generator %s of %s", g, S)
            gens = rest
    return AffineSemigroup(tuple(gens))


def saturation(S: AffineSemigroup) -> AffineSemigroup:
    """
    The semigroup of all lattice points in the cone of S.

    Raises:
        DegenerateConeError: S has a one-dimensional cone
    """
    return AffineSemigroup(hilbert_basis(S.full_cone()))


# ============================================================================
# CLASSIFICATION
# ============================================================================

class ChartKind(str, Enum):
    SMOOTH = "smooth"
    CYCLIC = "cyclic"
    NONNORMAL = "nonnormal"


@dataclass(frozen=True)
class ChartClass:
    """
    Isomorphism class of a chart.

    NONNORMAL carries the quotient type of the saturation; non-saturated
    semigroups themselves are not told apart.
    """

    kind: ChartKind
    qtype: QuotientType

    @property
    def is_smooth(self) -> bool:
        return self.kind is ChartKind.SMOOTH

    @property
    def tag(self) -> str:
        if self.is_smooth:
            return ChartKind.SMOOTH.value
        return f"{self.kind.value}:{self.qtype}"

    def an_index(self) -> int | None:
        """k if the chart is the A_k singularity 1/(k+1)(1,k), else None."""
        if self.kind is ChartKind.CYCLIC and self.qtype.q == self.qtype.n - 1:
            return self.qtype.n - 1
        return None

    def __str__(self) -> str:
        return self.tag


def classify(S: AffineSemigroup) -> ChartClass:
    """
    Smooth, cyclic quotient, or non-normal with the class of its saturation.

    Raises:
        DegenerateConeError: S has a one-dimensional cone
    """
    qtype = gl2z_classify(S.full_cone())
    if not is_saturated(S):
        return ChartClass(ChartKind.NONNORMAL, qtype)
    if qtype.is_smooth:
        return ChartClass(ChartKind.SMOOTH, qtype)
    return ChartClass(ChartKind.CYCLIC, qtype)
