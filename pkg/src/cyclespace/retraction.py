"""Bridge structure and the moves that remove it.

A bridge is an edge whose deletion increases the number of connected
components. `shrink_bridges` scales every bridge by the same factor so
that all of them vanish together at time 1, which keeps the genus and
every non-bridge length untouched. `conjectured_retract` applies the
candidate stabilization map: contract edges at lightly-marked leaves,
then smooth away unmarked degree-2 vertices, to a fixpoint.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError
from .metric_graph import (
    Edge,
    MetricGraph,
    contract_edge,
    is_connected,
    require_valid,
    valency,
)


def find_bridges(g: MetricGraph) -> frozenset[str]:
    """Edge ids whose removal disconnects their component.

    DFS lowpoint computation on the multigraph; the edge used to enter a
    vertex is skipped by id, so parallel edges and loops are never
    reported.
    """
    require_valid(g)
    disc: dict[str, int] = {}
    low: dict[str, int] = {}
    bridges: set[str] = set()
    adjacency: dict[str, list[tuple[str, str]]] = {v.id: [] for v in g.vertices}
    for e in g.edges:
        if e.is_loop:
            continue
        adjacency[e.ends[0]].append((e.ends[1], e.id))
        adjacency[e.ends[1]].append((e.ends[0], e.id))

    def explore(root: str) -> None:
        # iterative DFS; stack holds (vertex, incoming edge id, neighbor iterator)
        disc[root] = low[root] = len(disc)
        stack = [(root, "", iter(sorted(adjacency[root])))]
        while stack:
            u, in_edge, neighbors = stack[-1]
            advanced = False
            for w, eid in neighbors:
                if eid == in_edge:
                    continue
                if w in disc:
                    low[u] = min(low[u], disc[w])
                    continue
                disc[w] = low[w] = len(disc)
                stack.append((w, eid, iter(sorted(adjacency[w]))))
                advanced = True
                break
            if advanced:
                continue
            stack.pop()
            if stack:
                parent = stack[-1][0]
                low[parent] = min(low[parent], low[u])
                if low[u] > disc[parent]:
                    bridges.add(in_edge)

    for v in sorted(adjacency):
        if v not in disc:
            explore(v)
    return frozenset(bridges)


def shrink_bridges(g: MetricGraph, tau) -> MetricGraph:
    """Scale every bridge length by (1 - tau); at tau = 1 contract them.

    tau is an exact rational in [0, 1]. Contractions merge mark sets; the
    result at tau = 1 is bridge-free. Genus and non-bridge lengths are
    preserved bitwise for every tau.
    """
    require_valid(g)
    tau = Fraction(tau)
    if tau < 0 or tau > 1:
        raise DomainError(f"shrink time {tau} outside [0, 1]")
    bridges = find_bridges(g)
    if tau == 1:
        out = g
        for edge_id in sorted(bridges):
            out = contract_edge(out, edge_id)
        return out
    factor = 1 - tau
    edges = tuple(
        Edge(e.id, e.ends, e.length * factor) if e.id in bridges else e
        for e in g.edges
    )
    return MetricGraph(g.vertices, edges)


def is_tropically_stable(g: MetricGraph) -> bool:
    """True when every vertex has valency plus mark count at least 3."""
    require_valid(g)
    return all(valency(g, v.id) + len(v.marks) >= 3 for v in g.vertices)


def _smooth_vertex(g: MetricGraph, vertex_id: str) -> MetricGraph:
    """Remove a degree-2 vertex, splicing its two edges into one of summed
    length. The merged edge keeps the smaller id."""
    incident = sorted(
        (e for e in g.edges if vertex_id in e.ends), key=lambda e: e.id
    )
    e1, e2 = incident
    a = e1.other_end(vertex_id)
    b = e2.other_end(vertex_id)
    ends = (a, b) if a <= b else (b, a)
    merged = Edge(e1.id, ends, e1.length + e2.length)
    vertices = tuple(v for v in g.vertices if v.id != vertex_id)
    edges = tuple(e for e in g.edges if e.id not in (e1.id, e2.id)) + (merged,)
    return MetricGraph(vertices, edges)


def _leaf_edge_to_contract(g: MetricGraph) -> str | None:
    for e in sorted(g.edges, key=lambda e: e.id):
        if e.is_loop:
            continue
        for end in e.ends:
            if valency(g, end) == 1 and len(g.vertex(end).marks) <= 1:
                return e.id
    return None


def _vertex_to_smooth(g: MetricGraph) -> str | None:
    for v in sorted(g.vertices, key=lambda v: v.id):
        if v.marks or valency(g, v.id) != 2:
            continue
        incident = [e for e in g.edges if v.id in e.ends]
        if len(incident) == 1:
            # a lone loop vertex: the cycle needs one vertex, keep it
            continue
        return v.id
    return None


def conjectured_retract(g: MetricGraph) -> MetricGraph:
    """Candidate retraction onto tropically stable graphs.

    Iterates two moves to a fixpoint, in id order for determinism:
    contract each edge at a leaf carrying at most one mark, then delete
    each unmarked valency-2 vertex by splicing its edges. An unmarked
    vertex whose only incidence is its own loop stays (a one-vertex
    cycle has nowhere else to anchor). Genus is preserved throughout;
    idempotent by construction.
    """
    require_valid(g)
    if not is_connected(g):
        raise DomainError("conjectured_retract needs a connected graph")
    while True:
        edge_id = _leaf_edge_to_contract(g)
        if edge_id is not None:
            g = contract_edge(g, edge_id)
            continue
        vertex_id = _vertex_to_smooth(g)
        if vertex_id is not None:
            g = _smooth_vertex(g, vertex_id)
            continue
        return g
