"""
JSON payloads crossing the process boundary.

This module handles:
- Input payloads (semigroups, monomial ideals, run configuration) and their
  conversion into engine objects
- Output models for blow-ups, fans, resolution traces, dual graphs and
  matrix factorizations
- JSON Schema export for the `schema` command and docs/schemas/
"""

from enum import Enum
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.toric.blowup import BlowupResult, Fan2, MonomialIdeal
from app.toric.lattice import LatticeVec
from app.toric.resolve import ChartNode, DualGraph, ResolutionTrace, divisor_count
from app.toric.semigroup import AffineSemigroup

SCHEMA_VERSION = "1"

Pair = tuple[int, int]


def _pairs(vectors) -> list[Pair]:
    return [v.as_pair() for v in vectors]


def parse_semigroup(pairs: list[Pair]) -> AffineSemigroup:
    return AffineSemigroup(tuple(LatticeVec(a, b) for a, b in pairs))


# ============================================================================
# INPUT
# ============================================================================

class MonomialIdealPayload(BaseModel):
    """{"base": [[a,b],...], "exps": [[a,b],...]}"""

    model_config = ConfigDict(extra="forbid")

    base: list[Pair] = Field(min_length=1)
    exps: list[Pair] = Field(min_length=1)

    def to_ideal(self) -> MonomialIdeal:
        return MonomialIdeal(parse_semigroup(self.base), tuple(LatticeVec(a, b) for a, b in self.exps))

    @classmethod
    def from_ideal(cls, ideal: MonomialIdeal) -> "MonomialIdealPayload":
        return cls(base=ideal.base.as_pairs(), exps=_pairs(ideal.exps))


class Command(str, Enum):
    AN_RESOLVE = "an-resolve"
    RESOLVE = "resolve"
    BLOWUP = "blowup"
    MATFACT = "matfact"


class OutputFormat(str, Enum):
    JSON = "json"
    DOT = "dot"
    TEXT = "text"


class RunConfig(BaseModel):
    """Validated options of one CLI invocation."""

    command: Command
    n: int | None = Field(default=None, ge=1)
    semigroup: list[Pair] | None = None
    ideal: MonomialIdealPayload | None = None
    output: OutputFormat = OutputFormat.JSON
    out_path: Path | None = None
    max_steps: int = Field(default=64, ge=1)
    threads: int | None = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _required_per_command(self):
        if self.command is Command.AN_RESOLVE and self.n is None:
            raise ValueError("an-resolve requires n")
        if self.command in (Command.RESOLVE, Command.BLOWUP) and not self.semigroup:
            raise ValueError(f"{self.command.value} requires a semigroup")
        if self.command is Command.BLOWUP and self.ideal is None:
            raise ValueError("blowup requires an ideal")
        return self


# ============================================================================
# OUTPUT
# ============================================================================

class FanOut(BaseModel):
    ambient: list[Pair]
    rays: list[Pair]

    @classmethod
    def from_fan(cls, fan: Fan2) -> "FanOut":
        return cls(ambient=[fan.ambient.r1.as_pair(), fan.ambient.r2.as_pair()], rays=_pairs(fan.rays))


class ChartOut(BaseModel):
    index: int
    semigroup: list[Pair]
    chart_class: str


class GluingOut(BaseModel):
    source: int
    target: int
    localizer: Pair


class BlowupOut(BaseModel):
    ideal: MonomialIdealPayload
    vertex_indices: list[int]
    charts: list[ChartOut]
    gluings: list[GluingOut]
    fan: FanOut | None = None

    @classmethod
    def from_result(cls, result: BlowupResult, fan: Fan2 | None = None) -> "BlowupOut":
        return cls(
            ideal=MonomialIdealPayload.from_ideal(result.ideal),
            vertex_indices=list(result.vertex_indices),
            charts=[
                ChartOut(index=c.index, semigroup=c.semigroup.as_pairs(), chart_class=c.chart_class.tag)
                for c in result.charts
            ],
            gluings=[
                GluingOut(source=g.source, target=g.target, localizer=g.localizer.as_pair())
                for g in result.gluings
            ],
            fan=FanOut.from_fan(fan) if fan is not None else None,
        )


class ChartNodeOut(BaseModel):
    semigroup: list[Pair]
    chart_class: str
    normalized: bool
    transport: list[list[int]] | None = None
    blowup: BlowupOut | None = None
    children: list["ChartNodeOut"] = []

    @classmethod
    def from_node(cls, node: ChartNode) -> "ChartNodeOut":
        return cls(
            semigroup=node.semigroup.as_pairs(),
            chart_class=node.chart_class.tag,
            normalized=node.normalized,
            transport=node.transport.as_rows() if node.transport is not None else None,
            blowup=BlowupOut.from_result(node.blowup, node.fan) if node.blowup is not None else None,
            children=[cls.from_node(child) for child in node.children],
        )


class TraceOut(BaseModel):
    schema_version: Literal["1"] = SCHEMA_VERSION
    depth: int
    terminated: bool
    divisor_count: int
    new_rays_per_step: list[int]
    global_fan: FanOut
    root: ChartNodeOut

    @classmethod
    def from_trace(cls, trace: ResolutionTrace) -> "TraceOut":
        return cls(
            depth=trace.depth,
            terminated=trace.terminated,
            divisor_count=divisor_count(trace),
            new_rays_per_step=list(trace.new_rays_per_step),
            global_fan=FanOut.from_fan(trace.global_fan),
            root=ChartNodeOut.from_node(trace.root),
        )


class DualGraphOut(BaseModel):
    self_intersections: list[int]
    edges: list[Pair]

    @classmethod
    def from_graph(cls, graph: DualGraph) -> "DualGraphOut":
        return cls(self_intersections=list(graph.self_intersections), edges=list(graph.edges))


class MatfactOut(BaseModel):
    f: str
    B: list[list[str]]
    C: list[list[str]]
    D: list[list[str]]
    factorization: bool
    complex: bool
    cols: Pair
    minors: list[str]
    minimal_monomials: list[str] | None = None


SCHEMAS: dict[str, type[BaseModel]] = {
    "ideal": MonomialIdealPayload,
    "blowup": BlowupOut,
    "trace": TraceOut,
    "dual-graph": DualGraphOut,
    "matfact": MatfactOut,
    "run-config": RunConfig,
}
