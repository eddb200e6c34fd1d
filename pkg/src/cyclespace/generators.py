"""Seeded random instances for tests and the property harness.

Everything here is deterministic in the supplied `random.Random`; RNG
draws always happen over sorted sequences so results do not depend on
set or dict iteration order.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .metric_graph import Edge, MetricGraph, Vertex
from .moduli_space import HALF, ModuliPoint, canonical_form, marked_cycle

_DENOMINATORS = (4, 6, 8, 12, 16, 24, 48, 120, 240, 1024)


def rng_for(seed, *parts) -> random.Random:
    return random.Random("|".join(str(p) for p in (seed, *parts)))


def random_turn(rng: random.Random) -> Fraction:
    d = rng.choice(_DENOMINATORS)
    return Fraction(rng.randrange(d), d)


def random_length(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, 48), rng.randint(1, 12))


def random_point(rng: random.Random, max_vertices: int = 8,
                 max_marks: int = 5) -> ModuliPoint:
    """A random cycle class with at most `max_vertices` vertices and
    marks 1..n for a random n in 1..max_marks."""
    n_vertices = rng.randint(1, max_vertices)
    n_marks = rng.randint(1, max_marks)
    turns = {HALF}
    while len(turns) < n_vertices:
        turns.add(random_turn(rng))
    ordered = sorted(turns)
    marks: dict[Fraction, set[int]] = {t: set() for t in ordered}
    marks[HALF].add(1)
    for label in range(2, n_marks + 1):
        marks[rng.choice(ordered)].add(label)
    return canonical_form(marked_cycle(sorted(marks.items())))


def _distribute_marks(rng: random.Random, vertex_ids: list[str],
                      n_marks: int) -> dict[str, set[int]]:
    marks: dict[str, set[int]] = {v: set() for v in vertex_ids}
    for label in range(1, n_marks + 1):
        marks[rng.choice(vertex_ids)].add(label)
    return marks


def random_connected_graph(rng: random.Random, max_vertices: int = 8,
                           max_edges: int = 12, max_marks: int = 5) -> MetricGraph:
    """A random connected multigraph: a spanning tree plus extra edges,
    loops and parallels included, with 0..max_marks marks."""
    n_vertices = rng.randint(1, max_vertices)
    ids = [f"v{i}" for i in range(n_vertices)]
    edges = []
    for i in range(1, n_vertices):
        edges.append((ids[rng.randrange(i)], ids[i]))
    n_extra = rng.randint(0, max(0, max_edges - len(edges)))
    for _ in range(n_extra):
        a = rng.choice(ids)
        b = rng.choice(ids)  # a == b gives a loop
        edges.append((a, b))
    marks = _distribute_marks(rng, ids, rng.randint(0, max_marks))
    return MetricGraph(
        tuple(Vertex(v, frozenset(marks[v])) for v in ids),
        tuple(
            Edge(f"e{i}", ends, random_length(rng))
            for i, ends in enumerate(edges)
        ),
    )


def random_genus1_graph(rng: random.Random, max_vertices: int = 8,
                        max_marks: int = 5) -> MetricGraph:
    """A random connected genus-1 graph with n >= 1: one cycle core with
    random trees (bridges) hanging off it."""
    core = rng.randint(1, max(1, max_vertices // 2))
    total = rng.randint(core, max_vertices)
    ids = [f"v{i}" for i in range(total)]
    edges: list[tuple[str, str]] = []
    if core == 1:
        edges.append((ids[0], ids[0]))
    else:
        for i in range(core):
            edges.append((ids[i], ids[(i + 1) % core]))
    for i in range(core, total):
        edges.append((ids[rng.randrange(i)], ids[i]))
    marks = _distribute_marks(rng, ids, rng.randint(1, max_marks))
    return MetricGraph(
        tuple(Vertex(v, frozenset(marks[v])) for v in ids),
        tuple(
            Edge(f"e{i}", ends, random_length(rng))
            for i, ends in enumerate(edges)
        ),
    )


def random_cycle_graph(rng: random.Random, max_vertices: int = 8,
                       max_marks: int = 5) -> MetricGraph:
    """A random bridge-free genus-1 graph (a bare cycle) with n >= 1."""
    core = rng.randint(1, max_vertices)
    ids = [f"v{i}" for i in range(core)]
    if core == 1:
        edges = [(ids[0], ids[0])]
    elif core == 2:
        edges = [(ids[0], ids[1]), (ids[0], ids[1])]
    else:
        edges = [(ids[i], ids[(i + 1) % core]) for i in range(core)]
    marks = _distribute_marks(rng, ids, rng.randint(1, max_marks))
    return MetricGraph(
        tuple(Vertex(v, frozenset(marks[v])) for v in ids),
        tuple(
            Edge(f"e{i}", ends, random_length(rng))
            for i, ends in enumerate(edges)
        ),
    )
