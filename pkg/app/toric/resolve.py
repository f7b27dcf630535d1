"""
Iterated Blow-ups to Resolution

This module handles:
- Choosing a blow-up center per chart (A_k derivation ideal, maximal ideal, explicit)
- Breadth-first iteration of blow-ups over all singular charts, with sibling
  charts processed on a thread pool
- Assembly of the global fan, the exceptional dual graph and the
  Hirzebruch-Jung oracle it is compared against

Every chart semigroup lives in the lattice of the root semigroup, so the
normal fans of all steps subdivide the same dual cone and merge directly.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import partial
from itertools import pairwise

from app import config
from app.algebra.matfact import derivation_ideal_An
from app.errors import (
    InputError,
    InternalMismatchError,
    NonSmoothFanError,
    NotResolvedError,
    SelectorNotApplicableError,
)
from app.toric.blowup import BlowupResult, Fan2, MonomialIdeal, blowup, normalized_blowup_fan
from app.toric.lattice import LatticeVec, Unimodular, det, dual_cone, hj_fractions, lattice_isomorphism
from app.toric.semigroup import (
    AffineSemigroup,
    ChartClass,
    ChartKind,
    classify,
    gamma,
    minimal_generators,
    same_as,
    saturation,
)

logger = logging.getLogger(__name__)


# ============================================================================
# SELECTORS
# ============================================================================

class SelectorKind(str, Enum):
    AN_DERIVATION = "an-derivation"
    MAXIMAL_MONOMIAL = "maximal-monomial"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class IdealSelector:
    """
    How to pick the blow-up center of each singular chart.

    EXPLICIT blows up `ideal` at the root only; deeper charts fall back to
    their maximal monomial ideal.
    """

    kind: SelectorKind
    ideal: MonomialIdeal | None = None

    def __post_init__(self):
        if (self.kind is SelectorKind.EXPLICIT) != (self.ideal is not None):
            raise InputError("an explicit ideal is required by, and only by, the explicit selector")

    @classmethod
    def an_derivation(cls) -> "IdealSelector":
        return cls(SelectorKind.AN_DERIVATION)

    @classmethod
    def maximal_monomial(cls) -> "IdealSelector":
        return cls(SelectorKind.MAXIMAL_MONOMIAL)

    @classmethod
    def explicit(cls, ideal: MonomialIdeal) -> "IdealSelector":
        return cls(SelectorKind.EXPLICIT, ideal)


# ============================================================================
# TRACE
# ============================================================================

@dataclass
class ChartNode:
    """
    One chart of the resolution tree.

    `normalized` marks a chart whose semigroup was replaced by its saturation.
    `transport` maps the standard Γ_k onto this chart when its center came from
    the A_k derivation ideal.
    """

    semigroup: AffineSemigroup
    chart_class: ChartClass
    normalized: bool = False
    transport: Unimodular | None = None
    ideal: MonomialIdeal | None = None
    blowup: BlowupResult | None = None
    fan: Fan2 | None = None
    children: list["ChartNode"] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()

    def leaves(self):
        return (node for node in self.walk() if node.is_leaf)


@dataclass(frozen=True)
class ResolutionTrace:
    root: ChartNode
    depth: int
    global_fan: Fan2
    new_rays_per_step: tuple[int, ...]
    terminated: bool


def _make_node(S: AffineSemigroup, normalize: bool) -> ChartNode:
    chart_class = classify(S)
    if chart_class.kind is ChartKind.NONNORMAL:
        if normalize:
            saturated = saturation(S)
            logger.debug("normalizing chart %s -> %s", S, saturated)
            return ChartNode(saturated, classify(saturated), normalized=True)
        if chart_class.qtype.is_smooth:
            logger.warning(
                "⚠️ chart %s is not normal but its saturation is smooth; without normalization "
                "it keeps being blown up and the chart count can grow exponentially", S,
            )
    return ChartNode(S, chart_class)


def _select_ideal(node: ChartNode, selector: IdealSelector, depth: int) -> tuple[MonomialIdeal, Unimodular | None]:
    S = node.semigroup
    if selector.kind is SelectorKind.AN_DERIVATION:
        k = node.chart_class.an_index()
        if k is None:
            raise SelectorNotApplicableError(f"chart {S} ({node.chart_class}) is not an A_k singularity")
        transport = lattice_isomorphism(gamma(k).full_cone(), S.full_cone())
        if transport is None:
            raise InternalMismatchError(f"no lattice isomorphism from Γ_{k} onto {S}")
        template = derivation_ideal_An(k)
        return MonomialIdeal(S, tuple(transport.apply(m) for m in template.exps)), transport
    if selector.kind is SelectorKind.EXPLICIT and depth == 0:
        return selector.ideal.rebase(S), None
    return MonomialIdeal(S, minimal_generators(S).gens), None


def _blow_up_node(node: ChartNode, selector: IdealSelector, normalize: bool, depth: int) -> ChartNode:
    ideal, transport = _select_ideal(node, selector, depth)
    result = blowup(ideal)
    if node.chart_class.kind is ChartKind.NONNORMAL:
        fan = normalized_blowup_fan(ideal.rebase(saturation(ideal.base)))
    else:
        fan = normalized_blowup_fan(ideal)
    node.ideal, node.transport, node.blowup, node.fan = ideal, transport, result, fan
    node.children = [_make_node(chart.semigroup, normalize) for chart in result.charts]
    logger.info(
        "step %d: %s blown up into %s (+%d rays)",
        depth + 1, node.chart_class, [str(c.chart_class) for c in result.charts], len(fan.interior_rays),
    )
    return node


# ============================================================================
# RESOLUTION
# ============================================================================

def resolve_generic(
    S: AffineSemigroup,
    sel: IdealSelector,
    max_steps: int,
    *,
    normalize: bool | None = None,
    threads: int | None = None,
) -> ResolutionTrace:
    """
    Blow up every singular chart, level by level, until all charts are smooth.

    Stopping at `max_steps` with singular charts left is not an error: the
    trace comes back with `terminated=False`.

    With `normalize=False` a non-normal chart is never smooth, so it is blown
    up again on every level even when its saturation is smooth. The number of
    charts can then grow exponentially in `max_steps`; such charts are
    reported with a warning.

    Args:
        S: pointed, full-dimensional root semigroup
        sel: center selection policy
        max_steps: maximum number of levels
        normalize: saturate non-normal charts before recursing (default from config)
        threads: worker threads for sibling charts (default from config)

    Raises:
        DegenerateConeError: S is not full-dimensional
        SelectorNotApplicableError: the selector cannot handle some chart
    """
    if max_steps < 1:
        raise InputError(f"max_steps must be >= 1, got {max_steps}")
    normalize = config.NORMALIZE if normalize is None else normalize
    threads = config.THREADS if threads is None else threads
    if threads < 1:
        raise InputError(f"threads must be >= 1, got {threads}")
    if sel.kind is SelectorKind.EXPLICIT and not same_as(sel.ideal.base, S):
        raise InputError(f"explicit ideal lives over {sel.ideal.base}, not {S}")

    sigma = dual_cone(S.full_cone())
    root = _make_node(S, normalize)
    interior: set[LatticeVec] = set()
    new_rays: list[int] = []
    frontier = [root]
    terminated = True

    with ThreadPoolExecutor(max_workers=threads) as pool:
        while True:
            singular = [node for node in frontier if not node.chart_class.is_smooth]
            if not singular:
                break
            depth = len(new_rays)
            if depth >= max_steps:
                terminated = False
                break
            step = partial(_blow_up_node, selector=sel, normalize=normalize, depth=depth)
            done = list(pool.map(step, singular))
            added = 0
            for node in done:
                for ray in node.fan.interior_rays:
                    if ray in interior:
                        raise InternalMismatchError(f"ray {ray} was created twice")
                    interior.add(ray)
                    added += 1
            new_rays.append(added)
            frontier = [child for node in done for child in node.children]

    trace = ResolutionTrace(
        root=root,
        depth=len(new_rays),
        global_fan=Fan2.subdivide(sigma, interior),
        new_rays_per_step=tuple(new_rays),
        terminated=terminated,
    )
    logger.info(
        "resolution of %s: depth %d, %d rays, terminated=%s",
        S, trace.depth, len(interior), terminated,
    )
    return trace


def resolve_An(n: int, *, threads: int | None = None) -> ResolutionTrace:
    """
    Resolve A_n by repeatedly blowing up the derivation ideal of every A_k chart.

    Raises:
        InputError: n < 1
        InternalMismatchError: a chart left the A_k family or the run did not finish
    """
    root = gamma(n)
    try:
        trace = resolve_generic(root, IdealSelector.an_derivation(), max_steps=n, threads=threads)
    except SelectorNotApplicableError as exc:
        raise InternalMismatchError(f"resolution of A_{n} left the A_k family: {exc}") from exc
    for node in trace.root.walk():
        if node.normalized or (not node.chart_class.is_smooth and node.chart_class.an_index() is None):
            raise InternalMismatchError(f"chart {node.semigroup} of A_{n} is {node.chart_class}")
    if not trace.terminated:
        raise InternalMismatchError(f"resolution of A_{n} did not finish in {n} steps")
    return trace


def divisor_count(t: ResolutionTrace) -> int:
    return len(t.global_fan.interior_rays)


# ============================================================================
# DUAL GRAPHS
# ============================================================================

@dataclass(frozen=True)
class DualGraph:
    """Chain of exceptional curves, listed by self-intersection."""

    self_intersections: tuple[int, ...]

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((i, i + 1) for i in range(1, len(self.self_intersections)))

    def to_dot(self) -> str:
        lines = ["graph dual_graph {", "  rankdir=LR;", "  node [shape=circle];"]
        lines += [f'  E{i} [label="{e}"];' for i, e in enumerate(self.self_intersections, start=1)]
        lines += [f"  E{i} -- E{j};" for i, j in self.edges]
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        return " ".join(str(e) for e in self.self_intersections)


def dual_graph(t: ResolutionTrace) -> DualGraph:
    """
    Self-intersections -b_i read off the global fan: v_{i-1} + v_{i+1} = b_i * v_i.

    Raises:
        NotResolvedError: the trace stopped early or has a singular leaf
        NonSmoothFanError: two consecutive rays do not form a lattice basis
    """
    if not t.terminated or any(not leaf.chart_class.is_smooth for leaf in t.root.leaves()):
        raise NotResolvedError("the trace does not end in smooth charts")
    rays = t.global_fan.rays
    for u, w in pairwise(rays):
        if det(u, w) != 1:
            raise NonSmoothFanError(f"rays {u} and {w} span a cone of index {det(u, w)}")
    chain = []
    for prev, cur, nxt in zip(rays, rays[1:], rays[2:]):
        total = prev + nxt
        b = total.a // cur.a if cur.a else total.b // cur.b
        if cur.scale(b) != total:
            raise NonSmoothFanError(f"{prev} + {nxt} is not a multiple of {cur}")
        chain.append(-b)
    return DualGraph(tuple(chain))


def hj_oracle(n: int, q: int) -> DualGraph:
    """Minimal resolution chain of 1/n(1,q)."""
    return DualGraph(tuple(-b for b in hj_fractions(n, q)))
