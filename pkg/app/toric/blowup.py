"""
Monomial Blow-ups of Affine Toric Surfaces

This module handles:
- Monomial ideals inside a semigroup and their minimalization
- Vertices of the Newton polyhedron conv(∪ m_j + cone)
- Chart semigroups Γ_i = Γ + <m_j - m_i> and gluing localizers
- The normalized blow-up as a refinement of the dual cone (normal fan)

Indices of ideal generators are 1-based throughout, matching how charts are
reported to users.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, pairwise

from app.errors import (
    BaseNotSaturatedError,
    ChartNotPointedError,
    InputError,
    InternalMismatchError,
    InvalidIndexError,
    NotInSemigroupError,
    NotPointedError,
)
from app.toric.lattice import (
    Cone2,
    LatticeVec,
    det,
    dual_cone,
    primitive,
    sort_ccw,
    vec,
)
from app.toric.semigroup import (
    AffineSemigroup,
    ChartClass,
    classify,
    is_saturated,
    member,
    minimal_generators,
)

logger = logging.getLogger(__name__)


# ============================================================================
# IDEALS
# ============================================================================

@dataclass(frozen=True)
class MonomialIdeal:
    """The ideal generated by the monomials `exps` of the semigroup `base`."""

    base: AffineSemigroup
    exps: tuple[LatticeVec, ...]

    def __post_init__(self):
        exps = tuple(dict.fromkeys(vec(m) for m in self.exps))
        if not exps:
            raise InputError("a monomial ideal needs at least one generator")
        for m in exps:
            if not member(self.base, m):
                raise NotInSemigroupError(f"I ⊄ Γ: {m} is not in {self.base}")
        object.__setattr__(self, "exps", exps)

    def __len__(self) -> int:
        return len(self.exps)

    def generator(self, i: int) -> LatticeVec:
        if not 1 <= i <= len(self.exps):
            raise InvalidIndexError(f"index {i} outside 1..{len(self.exps)}")
        return self.exps[i - 1]

    def rebase(self, base: AffineSemigroup) -> "MonomialIdeal":
        return MonomialIdeal(base, self.exps)


def minimalize(I: MonomialIdeal) -> MonomialIdeal:
    """Drop every m with m - m' in the base for some other generator m'."""
    kept = tuple(
        m for m in I.exps
        if not any(other != m and member(I.base, m - other) for other in I.exps)
    )
    return MonomialIdeal(I.base, kept)


# ============================================================================
# NEWTON POLYHEDRON
# ============================================================================

def _in_segment_plus_cone(point: LatticeVec, p: LatticeVec, q: LatticeVec, cone: Cone2) -> bool:
    """Is `point` in conv(p, q) + cone? Exact over the rationals."""
    # point - (lam*p + (1-lam)*q) = base - lam*step must lie in the cone
    base, step = point - q, p - q
    lo, hi = Fraction(0), Fraction(1)
    for a, b in ((det(cone.r1, base), det(cone.r1, step)), (det(base, cone.r2), det(step, cone.r2))):
        # a - lam*b >= 0
        if b == 0:
            if a < 0:
                return False
        elif b > 0:
            hi = min(hi, Fraction(a, b))
        else:
            lo = max(lo, Fraction(a, b))
    return lo <= hi


def newton_vertices(I: MonomialIdeal) -> tuple[int, ...]:
    """
    1-based indices i such that m_i is a vertex of the Newton polyhedron.

    By Carathéodory in the plane, m_i is not a vertex iff it lies in
    conv(m_j, m_l) + cone for some j, l != i (j = l allowed).
    """
    cone = I.base.full_cone()
    out = []
    for i, m in enumerate(I.exps, start=1):
        others = [x for x in I.exps if x != m]
        if not any(_in_segment_plus_cone(m, p, q, cone) for p, q in combinations_with_replacement(others, 2)):
            out.append(i)
    return tuple(out)


# ============================================================================
# CHARTS
# ============================================================================

def chart_semigroup(I: MonomialIdeal, i: int) -> AffineSemigroup:
    """
    Γ_i = base + <m_j - m_i : j != i>, reduced to minimal generators.

    Raises:
        InvalidIndexError: i outside 1..k
        ChartNotPointedError: the chart cone contains a line (m_i is no vertex)
    """
    mi = I.generator(i)
    gens = I.base.gens + tuple(m - mi for m in I.exps if m != mi)
    try:
        chart = AffineSemigroup(gens)
    except NotPointedError as exc:
        raise ChartNotPointedError(f"chart {i} of {list(map(str, I.exps))} is not pointed") from exc
    return minimal_generators(chart)


@dataclass(frozen=True)
class ChartRecord:
    index: int
    semigroup: AffineSemigroup
    chart_class: ChartClass


@dataclass(frozen=True)
class Gluing:
    """Charts `source` and `target` are glued along the localization at `localizer`."""

    source: int
    target: int
    localizer: LatticeVec


@dataclass(frozen=True)
class BlowupResult:
    ideal: MonomialIdeal
    vertex_indices: tuple[int, ...]
    charts: tuple[ChartRecord, ...]
    gluings: tuple[Gluing, ...]


def blowup(I: MonomialIdeal) -> BlowupResult:
    """Blow up the toric surface of `I.base` along `I`: one chart per Newton vertex."""
    vertices = newton_vertices(I)
    charts = []
    for i in vertices:
        S = chart_semigroup(I, i)
        charts.append(ChartRecord(i, S, classify(S)))
    gluings = tuple(
        Gluing(i, j, I.generator(j) - I.generator(i))
        for i in vertices for j in vertices if i != j
    )
    logger.debug(
        "blow-up of %s along %s: vertices %s, charts %s",
        I.base, [str(m) for m in I.exps], list(vertices), [str(c.chart_class) for c in charts],
    )
    return BlowupResult(I, vertices, tuple(charts), gluings)


# ============================================================================
# NORMALIZED BLOW-UP FAN
# ============================================================================

@dataclass(frozen=True)
class Fan2:
    """
    Subdivision of the cone `ambient` (N side) by the rays `rays`.

    Rays run counterclockwise from ambient.r1 to ambient.r2.
    """

    ambient: Cone2
    rays: tuple[LatticeVec, ...]

    def __post_init__(self):
        rays = tuple(vec(r) for r in self.rays)
        if len(rays) < 2 or rays[0] != self.ambient.r1 or rays[-1] != self.ambient.r2:
            raise InternalMismatchError(f"fan rays must run from {self.ambient.r1} to {self.ambient.r2}")
        if any(det(u, w) <= 0 for u, w in pairwise(rays)):
            raise InternalMismatchError("fan rays are not strictly counterclockwise")
        object.__setattr__(self, "rays", rays)

    @classmethod
    def subdivide(cls, ambient: Cone2, interior) -> "Fan2":
        return cls(ambient, (ambient.r1, *sort_ccw(set(interior)), ambient.r2))

    @property
    def interior_rays(self) -> tuple[LatticeVec, ...]:
        return self.rays[1:-1]

    def maximal_cones(self) -> tuple[Cone2, ...]:
        return tuple(Cone2(u, w) for u, w in pairwise(self.rays))

    def is_smooth(self) -> bool:
        return all(det(u, w) == 1 for u, w in pairwise(self.rays))


def _edge_normal(p: LatticeVec, q: LatticeVec, exps, sigma: Cone2) -> LatticeVec | None:
    """Primitive inner normal of the segment [p, q] if it is a bounded edge of the polyhedron."""
    d = q - p
    normal = primitive(LatticeVec(-d.b, d.a))
    for candidate in (normal, -normal):
        if not sigma.contains_strictly(candidate):
            continue
        level = candidate.dot(p)
        if all(candidate.dot(m) >= level for m in exps):
            return candidate
    return None


def normalized_blowup_fan(I: MonomialIdeal) -> Fan2:
    """
    Normal fan of the Newton polyhedron, as a subdivision of the dual cone.

    Raises:
        DegenerateConeError: the base cone is one-dimensional
        BaseNotSaturatedError: the base is not normal
    """
    cone = I.base.full_cone()
    if not is_saturated(I.base):
        raise BaseNotSaturatedError(f"{I.base} is not saturated")
    sigma = dual_cone(cone)
    points = [I.generator(i) for i in newton_vertices(I)]
    normals = set()
    for p, q in combinations(points, 2):
        normal = _edge_normal(p, q, I.exps, sigma)
        if normal is not None:
            normals.add(normal)
    return Fan2.subdivide(sigma, normals)


def normal_cones(I: MonomialIdeal) -> dict[int, Cone2]:
    """Maximal cone of the normalized blow-up fan attached to each Newton vertex."""
    fan = normalized_blowup_fan(I)
    out = {}
    for tau in fan.maximal_cones():
        interior = tau.r1 + tau.r2
        values = [(interior.dot(m), i) for i, m in enumerate(I.exps, start=1)]
        best = min(values)
        if sum(1 for value, _ in values if value == best[0]) != 1:
            raise InternalMismatchError(f"normal cone {tau} has no unique minimizing vertex")
        out[best[1]] = tau
    return out
