"""Finite metric multigraphs with marks on vertices.

A graph is a finite multigraph (loops and parallel edges allowed) whose
edges carry exact positive rational lengths and whose vertices carry
finite sets of integer mark labels. The labels in use must be exactly
1..n, each placed on a single vertex; a vertex may hold several labels
or none. All values are immutable and all operations are pure, so
concurrent readers need no coordination.

Arithmetic on lengths is exact (`fractions.Fraction`); this module never
touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import DomainError


@dataclass(frozen=True)
class Vertex:
    id: str
    marks: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "marks", frozenset(self.marks))


@dataclass(frozen=True)
class Edge:
    id: str
    ends: tuple[str, str]
    length: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "ends", (self.ends[0], self.ends[1]))
        object.__setattr__(self, "length", Fraction(self.length))

    @property
    def is_loop(self) -> bool:
        return self.ends[0] == self.ends[1]

    def other_end(self, vertex_id: str) -> str:
        if self.ends[0] == vertex_id:
            return self.ends[1]
        if self.ends[1] == vertex_id:
            return self.ends[0]
        raise KeyError(f"vertex {vertex_id!r} is not an endpoint of edge {self.id!r}")


@dataclass(frozen=True)
class MetricGraph:
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))

    def vertex(self, vertex_id: str) -> Vertex:
        for v in self.vertices:
            if v.id == vertex_id:
                return v
        raise KeyError(vertex_id)

    def edge(self, edge_id: str) -> Edge:
        for e in self.edges:
            if e.id == edge_id:
                return e
        raise KeyError(edge_id)

    def marks(self) -> frozenset[int]:
        out: set[int] = set()
        for v in self.vertices:
            out |= v.marks
        return frozenset(out)


@dataclass(frozen=True)
class Violation:
    """One broken invariant, as data. `code` is stable and machine readable."""

    code: str
    subject: str

    def __str__(self) -> str:
        return f"{self.code}({self.subject})"


def validate(g: MetricGraph) -> list[Violation]:
    """Return every invariant violation of `g`; an empty list means valid.

    Checked: vertex/edge id uniqueness, endpoint references, strictly
    positive lengths, and that the marks present are exactly 1..n with
    each label on a single vertex.
    """
    out: list[Violation] = []
    seen_v: set[str] = set()
    for v in g.vertices:
        if v.id in seen_v:
            out.append(Violation("DuplicateVertexId", v.id))
        seen_v.add(v.id)
    seen_e: set[str] = set()
    for e in g.edges:
        if e.id in seen_e:
            out.append(Violation("DuplicateEdgeId", e.id))
        seen_e.add(e.id)
        for end in e.ends:
            if end not in seen_v:
                out.append(Violation("UnknownEndpoint", f"{e.id}:{end}"))
        if e.length <= 0:
            out.append(Violation("NonPositiveLength", e.id))
    placed: dict[int, str] = {}
    for v in g.vertices:
        for mark in v.marks:
            if not isinstance(mark, int) or mark < 1:
                out.append(Violation("NonPositiveMark", f"{v.id}:{mark}"))
                continue
            if mark in placed:
                out.append(Violation("DuplicateMark", str(mark)))
            else:
                placed[mark] = v.id
    if placed:
        for mark in range(1, max(placed) + 1):
            if mark not in placed:
                out.append(Violation("MissingMark", str(mark)))
    return out


def require_valid(g: MetricGraph) -> None:
    violations = validate(g)
    if violations:
        raise DomainError(
            "invalid metric graph: " + ", ".join(str(v) for v in violations)
        )


def components(g: MetricGraph) -> list[frozenset[str]]:
    """Connected components as a partition of vertex ids, ordered by
    smallest member id."""
    adjacency: dict[str, set[str]] = {v.id: set() for v in g.vertices}
    for e in g.edges:
        adjacency[e.ends[0]].add(e.ends[1])
        adjacency[e.ends[1]].add(e.ends[0])
    seen: set[str] = set()
    parts: list[frozenset[str]] = []
    for start in sorted(adjacency):
        if start in seen:
            continue
        stack = [start]
        part: set[str] = set()
        while stack:
            u = stack.pop()
            if u in part:
                continue
            part.add(u)
            stack.extend(adjacency[u] - part)
        seen |= part
        parts.append(frozenset(part))
    return parts


def is_connected(g: MetricGraph) -> bool:
    return len(components(g)) <= 1


def genus(g: MetricGraph) -> int:
    """First Betti number: |E| - |V| + number of components."""
    require_valid(g)
    return len(g.edges) - len(g.vertices) + len(components(g))


def total_length(g: MetricGraph) -> Fraction:
    require_valid(g)
    if not g.edges:
        raise DomainError("total_length needs at least one edge")
    return sum((e.length for e in g.edges), Fraction(0))


def valency(g: MetricGraph, vertex_id: str) -> int:
    """Endpoint incidences at a vertex; a loop counts twice."""
    count = 0
    for e in g.edges:
        count += (e.ends[0] == vertex_id) + (e.ends[1] == vertex_id)
    return count


def contract_edge(g: MetricGraph, edge_id: str) -> MetricGraph:
    """Collapse a non-loop edge, merging its endpoints.

    The merged vertex takes the lexicographically smaller id and the
    union of both mark sets; every other edge is re-attached. Genus is
    preserved. Contracting a loop would drop the genus and is rejected.
    """
    require_valid(g)
    try:
        e = g.edge(edge_id)
    except KeyError:
        raise DomainError(f"no edge with id {edge_id!r}") from None
    if e.is_loop:
        raise DomainError(f"cannot contract loop {edge_id!r}")
    keep, drop = sorted(e.ends)
    merged_marks = g.vertex(keep).marks | g.vertex(drop).marks
    vertices = tuple(
        Vertex(keep, merged_marks) if v.id == keep else v
        for v in g.vertices
        if v.id != drop
    )
    edges = tuple(
        Edge(
            f.id,
            (
                keep if f.ends[0] == drop else f.ends[0],
                keep if f.ends[1] == drop else f.ends[1],
            ),
            f.length,
        )
        for f in g.edges
        if f.id != edge_id
    )
    return MetricGraph(vertices, edges)


# ---------------------------------------------------------------------------
# JSON serialization
#
# { "vertices": [ { "id": "a", "marks": [1, 3] }, ... ],
#   "edges":    [ { "id": "e1", "ends": ["a", "b"], "length": "3/2" }, ... ] }
#
# Lengths are rationals written as "p/q" or integer strings.


def parse_rational(value) -> Fraction:
    """Parse a rational from a "p/q" or integer string (ints pass through).

    Floats are rejected: serialized lengths and turns stay exact.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise DomainError(f"expected an exact rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"bad rational literal {value!r}: {exc}") from None
    raise DomainError(f"expected an exact rational, got {value!r}")


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


def graph_to_json(g: MetricGraph) -> dict:
    return {
        "vertices": [
            {"id": v.id, "marks": sorted(v.marks)} for v in g.vertices
        ],
        "edges": [
            {"id": e.id, "ends": [e.ends[0], e.ends[1]], "length": format_rational(e.length)}
            for e in g.edges
        ],
    }


def graph_from_json(data) -> MetricGraph:
    if not isinstance(data, dict):
        raise DomainError("graph JSON must be an object")
    try:
        raw_vertices = data["vertices"]
        raw_edges = data["edges"]
    except KeyError as exc:
        raise DomainError(f"graph JSON is missing key {exc}") from None
    vertices = []
    for item in raw_vertices:
        try:
            vertices.append(Vertex(str(item["id"]), frozenset(item.get("marks", []))))
        except (TypeError, KeyError) as exc:
            raise DomainError(f"bad vertex entry {item!r}: {exc}") from None
    edges = []
    for item in raw_edges:
        try:
            ends = item["ends"]
            edges.append(
                Edge(str(item["id"]), (str(ends[0]), str(ends[1])), parse_rational(item["length"]))
            )
        except (TypeError, KeyError, IndexError) as exc:
            raise DomainError(f"bad edge entry {item!r}: {exc}") from None
    return MetricGraph(tuple(vertices), tuple(edges))
