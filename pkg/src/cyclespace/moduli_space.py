"""Isometry classes of marked unit cycles and their neighborhood structure.

A cycle of total length 1 is identified with the unit circle. Positions
are "turns": exact rationals in [0, 1), measured counterclockwise from
(1, 0), so the x-coordinate of turn u is cos(2*pi*u). The vertex whose
mark set contains 1 is pinned at turn 1/2, the point (-1, 0). Classes
are taken up to the reflection u -> -u (conjugation), realized here by a
canonical form that picks the lexicographically smaller of the two
encodings.

Two circle points are eps-close when the shorter arc between them stays
inside a vertical strip of half-width eps. The strip can be centered on
the first point only ("paper" mode) or required around both endpoints
("symmetric" mode, the default: the relation is then symmetric, which
the neighborhood tests rely on). Membership of a class y in the open
eps-neighborhood of a class x holds when some representative of y
(plain or reflected) is mark-wise close to x's canonical representative
and the two vertex sets cover each other within eps.

All turn arithmetic is exact; cosines are compared in double precision.
A strict inequality decided within `TOLERANCE` of a tie is reported as
"boundary" rather than silently resolved.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, GeneratorError
from .metric_graph import (
    Edge,
    MetricGraph,
    Vertex,
    format_rational,
    genus,
    is_connected,
    parse_rational,
    require_valid,
    total_length,
    valency,
)

HALF = Fraction(1, 2)
_TWO_PI = 2.0 * math.pi

#: statuses of a neighborhood or closeness query
INSIDE = "inside"
OUTSIDE = "outside"
BOUNDARY = "boundary"

#: closeness modes
PAPER = "paper"
SYMMETRIC = "symmetric"

#: half-width of the tie band around strict float comparisons
TOLERANCE = 1e-12

#: generators keep their samples at least this clear of a verdict flip
BOUNDARY_BAND = 1e-9

_MAX_TURN_DENOMINATOR = 10**6


@dataclass(frozen=True)
class CyclePoint:
    turn: Fraction
    marks: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        if type(self.turn) is not Fraction:
            object.__setattr__(self, "turn", Fraction(self.turn))
        if type(self.marks) is not frozenset:
            object.__setattr__(self, "marks", frozenset(self.marks))


@dataclass(frozen=True)
class MarkedCycle:
    """A marked cycle of length 1: distinct rational turns with mark sets.

    Construction sorts the points by turn and enforces the invariants:
    turns in [0, 1) and pairwise distinct, labels exactly 1..n with each
    on one point, and mark 1 sitting at turn 1/2.
    """

    points: tuple[CyclePoint, ...]

    def __post_init__(self) -> None:
        pts = tuple(sorted(self.points, key=lambda p: p.turn))
        object.__setattr__(self, "points", pts)
        if not pts:
            raise DomainError("a cycle needs at least one point")
        if pts[0].turn < 0 or pts[-1].turn >= 1:
            raise DomainError("turns must lie in [0, 1)")
        for i in range(1, len(pts)):
            if pts[i - 1].turn == pts[i].turn:
                raise DomainError("turns must be pairwise distinct")
        placed: dict[int, Fraction] = {}
        for p in pts:
            for mark in p.marks:
                if not isinstance(mark, int) or mark < 1:
                    raise DomainError(f"bad mark label {mark!r}")
                if mark in placed:
                    raise DomainError(f"mark {mark} placed twice")
                placed[mark] = p.turn
        if not placed or sorted(placed) != list(range(1, max(placed) + 1)):
            raise DomainError("marks must be exactly 1..n with n >= 1")
        if placed[1] != HALF:
            raise DomainError("mark 1 must sit at turn 1/2")

    @property
    def n_marks(self) -> int:
        return max(max(p.marks) for p in self.points if p.marks)

    def point_at(self, turn) -> CyclePoint | None:
        turn = Fraction(turn)
        for p in self.points:
            if p.turn == turn:
                return p
        return None


def marked_cycle(entries) -> MarkedCycle:
    """Build a cycle from (turn, marks) pairs or a {turn: marks} mapping."""
    if hasattr(entries, "items"):
        entries = entries.items()
    return MarkedCycle(tuple(CyclePoint(t, frozenset(m)) for t, m in entries))


@dataclass(frozen=True)
class ModuliPoint:
    """A cycle class: the canonical (reflection-minimal) representative."""

    cycle: MarkedCycle

    def __post_init__(self) -> None:
        if _encoding(self.cycle) > _reflected_encoding(self.cycle):
            raise DomainError("cycle is not in canonical form; use canonical_form")

    @property
    def points(self) -> tuple[CyclePoint, ...]:
        return self.cycle.points


@dataclass(frozen=True)
class NeighborhoodVerdict:
    """Outcome of a neighborhood query.

    `witness` names the representative of y ("plain" or "reflected")
    that realized the membership, when inside. `margin` is the float
    slack of the decision in x-units: positive inside, negative outside,
    within TOLERANCE of zero on the boundary.
    """

    status: str
    witness: str | None
    margin: float


def x_coord(u) -> float:
    """Abscissa cos(2*pi*u) of the circle point at turn u, in doubles."""
    return math.cos(_TWO_PI * float(Fraction(u)))


def reflect(c: MarkedCycle) -> MarkedCycle:
    """Mirror across the x-axis: turn u goes to (1 - u) mod 1."""
    return MarkedCycle(
        tuple(CyclePoint((1 - p.turn) % 1, p.marks) for p in c.points)
    )


def _encoding(c: MarkedCycle):
    return tuple((p.turn, tuple(sorted(p.marks))) for p in c.points)


def _reflected_encoding(c: MarkedCycle):
    # the reflection keeps a point at turn 0 first and reverses the rest
    pts = c.points
    out = []
    start = 0
    if pts[0].turn == 0:
        out.append((pts[0].turn, tuple(sorted(pts[0].marks))))
        start = 1
    for i in range(len(pts) - 1, start - 1, -1):
        out.append((1 - pts[i].turn, tuple(sorted(pts[i].marks))))
    return tuple(out)


def canonical_form(c: MarkedCycle | ModuliPoint) -> ModuliPoint:
    """Quotient by reflection: keep the lexicographically smaller of the
    two encodings (turn-ascending lists of (turn, sorted marks))."""
    if isinstance(c, ModuliPoint):
        return c
    chosen = c if _encoding(c) <= _reflected_encoding(c) else reflect(c)
    return ModuliPoint(chosen)


def as_point(value: MarkedCycle | ModuliPoint) -> ModuliPoint:
    return value if isinstance(value, ModuliPoint) else canonical_form(value)


def iso_equal(a: MarkedCycle | ModuliPoint, b: MarkedCycle | ModuliPoint) -> bool:
    return as_point(a).cycle == as_point(b).cycle


# ---------------------------------------------------------------------------
# eps-closeness and neighborhood membership
#
# Everything is computed through penalties. The penalty of a pair of
# turns is the worst x-excursion of the shorter connecting arc, measured
# from the strip center(s); the pair is eps-close exactly when the
# penalty is < eps, so the decision margin is eps - penalty. Penalties
# compose: an exists-quantifier takes the min over partners, a
# conjunction the max, the choice of representative the min. The margin
# of a whole membership query is therefore affine in eps, which makes
# monotonicity in eps exact.
#
# The arc logic runs on float turns. That is safe because the penalty is
# continuous in the turns everywhere except at the antipodal tie (arc
# length exactly 1/2), where the choice of arc flips; only that decision
# falls back to exact rationals, and only when the float gap is within
# 1e-9 of the tie. Pole crossings need no care: an arc endpoint at turn
# 0 or 1/2 already contributes its own cosine (+1 or -1) exactly.

_ANTIPODE_GUARD = 1e-9


def _arc_excursion(start: float, end: float, xa: float, xb: float,
                   xs: float, symmetric: bool) -> float:
    # worst strip excursion of the ccw arc start -> end, centered on xa
    # (and on xb too when symmetric); xs is a precomputed min(xa, xb)
    hi = 1.0 if start > end else (xa if xa >= xb else xb)
    if (start <= 0.5 <= end) if start <= end else (start <= 0.5 or 0.5 <= end):
        lo = -1.0
    else:
        lo = xs
    penalty = hi - xa if hi - xa >= xa - lo else xa - lo
    if symmetric:
        if hi - xb > penalty:
            penalty = hi - xb
        if xb - lo > penalty:
            penalty = xb - lo
    return penalty


def _pair_penalty(a: Fraction, b: Fraction, fa: float, fb: float,
                  xa: float, xb: float, symmetric: bool) -> float:
    """Worst strip excursion of the shorter arc from a to b.

    The subject point a carries the strip center in paper mode. When the
    two arcs tie at length exactly 1/2 the cheaper one counts: either
    arc is a shortest path there.
    """
    gap = fb - fa
    if gap < 0.0:
        gap += 1.0
    if gap == 0.0:
        return 0.0
    xs = xa if xa <= xb else xb
    tie = gap - 0.5
    if -_ANTIPODE_GUARD < tie < _ANTIPODE_GUARD:
        exact_gap = (b - a) % 1
        if exact_gap == HALF:
            forward = _arc_excursion(fa, fb, xa, xb, xs, symmetric)
            backward = _arc_excursion(fb, fa, xa, xb, xs, symmetric)
            return forward if forward <= backward else backward
        counterclockwise = exact_gap < HALF
    else:
        counterclockwise = tie < 0.0
    if counterclockwise:
        return _arc_excursion(fa, fb, xa, xb, xs, symmetric)
    return _arc_excursion(fb, fa, xa, xb, xs, symmetric)


def _classify(margin: float, tol: float) -> str:
    if margin > tol:
        return INSIDE
    if margin < -tol:
        return OUTSIDE
    return BOUNDARY


def eps_close(a, b, eps: float, mode: str = SYMMETRIC, tol: float = TOLERANCE) -> str:
    """Status of the eps-closeness of two turns: inside, outside, or
    boundary when the decision falls within `tol` of a tie."""
    if eps <= 0:
        raise DomainError("eps must be positive")
    symmetric = _check_mode(mode)
    a = Fraction(a) % 1
    b = Fraction(b) % 1
    penalty = _pair_penalty(
        a, b, float(a), float(b), x_coord(a), x_coord(b), symmetric
    )
    return _classify(eps - penalty, tol)


def _check_mode(mode: str) -> bool:
    if mode == SYMMETRIC:
        return True
    if mode == PAPER:
        return False
    raise DomainError(f"unknown closeness mode {mode!r}")


def _xdata(c: MarkedCycle) -> list[tuple[Fraction, float, float, frozenset[int]]]:
    out = []
    for p in c.points:
        f = float(p.turn)
        out.append((p.turn, f, math.cos(_TWO_PI * f), p.marks))
    return out


def _reflected_xdata(data):
    # reflection fixes x-coordinates and turn 0; other turns become 1 - u
    out = []
    for t, f, x, marks in data:
        if f == 0.0 and t == 0:
            out.append((t, f, x, marks))
        else:
            out.append(((1 - t) % 1, 1.0 - f, x, marks))
    return out


def _best_partner_penalty(subject, partners, symmetric: bool) -> float:
    # min over partners of the pair penalty, subject first (strip center)
    st, sf, sx, _ = subject
    best = math.inf
    for pt, pf, px, _ in partners:
        bound = sx - px if sx >= px else px - sx
        if bound >= best:  # every penalty is at least the endpoint gap
            continue
        penalty = _pair_penalty(st, pt, sf, pf, sx, px, symmetric)
        if penalty < best:
            best = penalty
            if best == 0.0:
                break
    return best


def _membership_penalty(gdata, hdata, symmetric: bool) -> float:
    """Worst excursion over the three membership conditions with G fixed
    and H the tested representative: mark-wise closeness, H covered by
    G, and G covered by H."""
    worst = 0.0
    g_by_mark: dict[int, tuple] = {}
    for item in gdata:
        for mark in item[3]:
            g_by_mark[mark] = item
    for item in hdata:
        for mark in item[3]:
            gt, gf, gx, _ = g_by_mark[mark]
            penalty = _pair_penalty(gt, item[0], gf, item[1], gx, item[2], symmetric)
            if penalty > worst:
                worst = penalty
    for item in hdata:
        penalty = _best_partner_penalty(item, gdata, symmetric)
        if penalty > worst:
            worst = penalty
    for item in gdata:
        penalty = _best_partner_penalty(item, hdata, symmetric)
        if penalty > worst:
            worst = penalty
    return worst


def in_neighborhood(x, y, eps: float, mode: str = SYMMETRIC,
                    tol: float = TOLERANCE) -> NeighborhoodVerdict:
    """Decide whether the class y lies in the open eps-neighborhood of x.

    G is x's canonical representative; H ranges over y's canonical
    representative and its reflection (the conditions are invariant
    under reflecting both graphs at once, so these two suffice). Inside
    when some H passes all three conditions strictly; boundary when the
    best H is within `tol` of the strict threshold.
    """
    if eps <= 0:
        raise DomainError("eps must be positive")
    symmetric = _check_mode(mode)
    x = as_point(x)
    y = as_point(y)
    if x.cycle.n_marks != y.cycle.n_marks:
        raise DomainError("points live in different mark spaces")
    gdata = _xdata(x.cycle)
    hdata = _xdata(y.cycle)
    best_penalty = math.inf
    witness = None
    for label, rep in (("plain", hdata), ("reflected", _reflected_xdata(hdata))):
        penalty = _membership_penalty(gdata, rep, symmetric)
        if penalty < best_penalty:
            best_penalty = penalty
            witness = label
    margin = eps - best_penalty
    status = _classify(margin, tol)
    return NeighborhoodVerdict(status, witness if status == INSIDE else None, margin)


def additivity_witness_check(x, y, z, eps1: float, eps2: float,
                             mode: str = SYMMETRIC) -> bool:
    """Check one witness triple of neighborhood additivity: whenever
    y is in N_eps2(x) and z is in N_eps1(y), z must be in
    N_(eps1+eps2)(x). Vacuously true when the premise fails."""
    if eps1 <= 0 or eps2 <= 0:
        raise DomainError("eps1 and eps2 must be positive")
    if in_neighborhood(x, y, eps2, mode).status != INSIDE:
        return True
    if in_neighborhood(y, z, eps1, mode).status != INSIDE:
        return True
    return in_neighborhood(x, z, eps1 + eps2, mode).status == INSIDE


# ---------------------------------------------------------------------------
# cycles of arbitrary total length: the graph side


def normalize(g: MetricGraph) -> tuple[ModuliPoint, Fraction]:
    """Read a bridge-free genus-1 graph as a cycle class plus its length.

    Walks the cycle from the mark-1 vertex, placing each vertex at turn
    1/2 + (arc distance)/total; the canonical form absorbs the choice of
    direction. Inverse of `denormalize` up to isometry.
    """
    require_valid(g)
    if not is_connected(g) or genus(g) != 1:
        raise DomainError("normalize needs a connected graph of genus 1")
    if 1 not in g.marks():
        raise DomainError("normalize needs mark 1 present")
    if any(valency(g, v.id) != 2 for v in g.vertices):
        raise DomainError("normalize needs a bridge-free cycle (every valency 2)")
    total = total_length(g)
    anchor = next(v for v in g.vertices if 1 in v.marks)
    if len(g.vertices) == 1:
        return canonical_form(marked_cycle([(HALF, anchor.marks)])), total
    by_vertex: dict[str, list[Edge]] = {v.id: [] for v in g.vertices}
    for e in g.edges:
        by_vertex[e.ends[0]].append(e)
        by_vertex[e.ends[1]].append(e)
    entries: list[tuple[Fraction, frozenset[int]]] = [(HALF, anchor.marks)]
    first, _second = sorted(by_vertex[anchor.id], key=lambda e: e.id)
    distance = first.length
    previous_edge, current = first, first.other_end(anchor.id)
    while current != anchor.id:
        entries.append(((HALF + distance / total) % 1, g.vertex(current).marks))
        e1, e2 = by_vertex[current]
        next_edge = e2 if e1.id == previous_edge.id else e1
        distance += next_edge.length
        previous_edge, current = next_edge, next_edge.other_end(current)
    return canonical_form(marked_cycle(entries)), total


def denormalize(p: ModuliPoint | MarkedCycle, total) -> MetricGraph:
    """Cycle graph whose consecutive edge lengths are the turn gaps of p
    scaled by `total`."""
    total = Fraction(total)
    if total <= 0:
        raise DomainError("total length must be positive")
    points = as_point(p).points
    vertices = tuple(
        Vertex(f"v{i}", pt.marks) for i, pt in enumerate(points)
    )
    if len(points) == 1:
        return MetricGraph(vertices, (Edge("e0", ("v0", "v0"), total),))
    edges = []
    for i, pt in enumerate(points):
        nxt = points[(i + 1) % len(points)]
        gap = (nxt.turn - pt.turn) % 1
        edges.append(Edge(f"e{i}", (f"v{i}", f"v{(i + 1) % len(points)}"), gap * total))
    return MetricGraph(vertices, tuple(edges))


# ---------------------------------------------------------------------------
# the tropical subspace


def is_in_Y(p: ModuliPoint | MarkedCycle) -> bool:
    """True when (1, 0) is a vertex and every other vertex is marked."""
    pts = as_point(p).points
    return any(pt.turn == 0 for pt in pts) and all(
        pt.marks for pt in pts if pt.turn != 0
    )


def to_tropical_point(p: ModuliPoint | MarkedCycle) -> ModuliPoint:
    """Forget the vertex at (1, 0) when it is unmarked (and not alone)."""
    p = as_point(p)
    if not is_in_Y(p):
        raise DomainError("to_tropical_point needs a point of the Y subspace")
    pts = p.points
    zero = next(pt for pt in pts if pt.turn == 0)
    if zero.marks or len(pts) == 1:
        return p
    return canonical_form(MarkedCycle(tuple(pt for pt in pts if pt.turn != 0)))


def is_tropical_point(p: ModuliPoint | MarkedCycle) -> bool:
    """True when every vertex is marked (valency 2 plus a mark is stable)."""
    return all(pt.marks for pt in as_point(p).points)


# ---------------------------------------------------------------------------
# seeded neighbor sampling


def _cycle_key(c: MarkedCycle) -> str:
    return ";".join(
        f"{p.turn}:{','.join(map(str, sorted(p.marks)))}" for p in c.points
    )


def _rationalize_turn(u: float) -> Fraction:
    return Fraction(u).limit_denominator(_MAX_TURN_DENOMINATOR) % 1


def _moved_turn(rng: random.Random, turn: Fraction, budget: float) -> Fraction:
    """A turn whose x-coordinate stays within `budget` of the original,
    without leaving the original half-circle (a point at turn 0 may fall
    to either side)."""
    x0 = x_coord(turn)
    span = budget * rng.uniform(0.15, 0.95)
    target = rng.uniform(max(-1.0, x0 - span), min(1.0, x0 + span))
    u = math.acos(target) / _TWO_PI  # in [0, 1/2]
    if turn > HALF or (turn == 0 and rng.random() < 0.5):
        u = 1.0 - u
    moved = _rationalize_turn(u)
    if abs(x_coord(moved) - x0) >= budget:
        return turn
    return moved


def _perturbed_entries(rng: random.Random, cycle: MarkedCycle,
                       budget: float) -> list[tuple[Fraction, set[int]]]:
    entries: list[tuple[Fraction, set[int]]] = []
    for p in cycle.points:
        marks = set(p.marks)
        splittable = sorted(marks - {1}) if p.turn == HALF else sorted(marks)
        if len(marks) >= 2 and splittable and rng.random() < 0.35:
            moving = set(rng.sample(splittable, rng.randint(1, max(1, len(splittable) - (0 if p.turn == HALF else 1)))))
            entries.append((_moved_turn(rng, p.turn, budget), moving))
            marks -= moving
        if p.turn == HALF:
            entries.append((HALF, marks))
        elif rng.random() < 0.9:
            entries.append((_moved_turn(rng, p.turn, budget), marks))
        else:
            entries.append((p.turn, marks))
    if len(entries) >= 3 and rng.random() < 0.2:
        # provoke an exact collision so the merge path gets exercised
        entries.sort(key=lambda item: item[0])
        i = rng.randrange(len(entries) - 1)
        a, b = entries[i], entries[i + 1]
        if a[0] != HALF and b[0] != HALF and abs(x_coord(a[0]) - x_coord(b[0])) < 0.5 * budget:
            entries[i + 1] = (a[0], b[1])
    return entries


def sample_neighbor(x, alpha: float, seed: int, mode: str = SYMMETRIC) -> ModuliPoint:
    """A deterministic pseudo-random point strictly inside N_alpha(x).

    Applies small turn perturbations, splits of multi-mark vertices, and
    merges of colliding vertices; the mark-1 vertex never moves. Every
    candidate is checked against `in_neighborhood` and must come back
    inside with margin above BOUNDARY_BAND, otherwise a fresh draw is
    taken; persistent failure raises GeneratorError instead of returning
    a bad sample. Budgets below the rounding floor return x unchanged.
    """
    if alpha <= 0:
        raise DomainError("alpha must be positive")
    x = as_point(x)
    budget = 0.9 * alpha
    if budget <= 4.0 * BOUNDARY_BAND:
        return x
    rng = random.Random(f"neighbor|{_cycle_key(x.cycle)}|{float(alpha).hex()}|{seed}")
    last = None
    for _attempt in range(32):
        merged: dict[Fraction, set[int]] = {}
        for turn, marks in _perturbed_entries(rng, x.cycle, budget):
            merged.setdefault(turn, set()).update(marks)
        try:
            y = canonical_form(marked_cycle(sorted(merged.items())))
        except DomainError:
            continue
        verdict = in_neighborhood(x, y, alpha, mode)
        if verdict.status == INSIDE and verdict.margin > BOUNDARY_BAND:
            return y
        last = verdict
    raise GeneratorError(
        f"no admissible neighbor after 32 attempts (alpha={alpha}, last={last})"
    )
