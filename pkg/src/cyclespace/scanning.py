"""The scanning sweep on marked unit cycles.

A vertical line sweeps the circle right to left as the scan turn w runs
from 1/2 down to 0; its abscissa is s = cos(2*pi*w). The sweep keeps
every marked vertex, puts vertices on the two circle points at turns w
and 1 - w, and deletes the unmarked vertices strictly behind the line
(abscissa below s). Because the frontier is parametrized by the turn w
rather than by s itself, the keep/delete comparisons are exact rational
comparisons of turns: u is ahead of the line iff u < w or u > 1 - w.

At w = 1/2 the sweep is the identity; at w = 0 it lands in the subspace
of cycles whose only possibly-unmarked vertex sits at (1, 0). The
lemma checkers and the continuity certificate probe, on seeded samples,
that each frame stays close to nearby frames and that close inputs stay
close after sweeping.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DomainError
from .moduli_space import (
    BOUNDARY,
    HALF,
    INSIDE,
    MarkedCycle,
    ModuliPoint,
    SYMMETRIC,
    as_point,
    canonical_form,
    in_neighborhood,
    is_in_Y,
    iso_equal,
    marked_cycle,
    sample_neighbor,
    x_coord,
)

_MAX_TURN_DENOMINATOR = 10**6


def check_scan_turn(w) -> Fraction:
    w = Fraction(w)
    if w < 0 or w > HALF:
        raise DomainError(f"scan turn {w} outside [0, 1/2]")
    return w


def scan_abscissa(w) -> float:
    """Abscissa s = cos(2*pi*w) of the scan line at scan turn w."""
    return x_coord(check_scan_turn(w))


def scan_cycle(c: MarkedCycle, w) -> MarkedCycle:
    """Sweep one representative, without canonicalizing the result."""
    w = check_scan_turn(w)
    kept: dict[Fraction, frozenset[int]] = {}
    for p in c.points:
        if p.marks or p.turn < w or p.turn > 1 - w:
            kept[p.turn] = p.marks
    for t in {w, (1 - w) % 1}:
        kept.setdefault(t, frozenset())
    return marked_cycle(sorted(kept.items()))


def scan(x, w) -> ModuliPoint:
    """Sweep a cycle class; independent of the representative."""
    return canonical_form(scan_cycle(as_point(x).cycle, w))


def homotopy_frame(x, tau) -> ModuliPoint:
    """Frame of the sweep at time tau in [0, 1]: tau = 0 is the identity,
    tau = 1 the endpoint in Y."""
    tau = Fraction(tau)
    if tau < 0 or tau > 1:
        raise DomainError(f"homotopy time {tau} outside [0, 1]")
    return scan(x, (1 - tau) / 2)


def lemma_step1_check(x, w0, w1, eps: float, mode: str = SYMMETRIC) -> bool:
    """Nearby scan times give neighboring frames of the same point:
    scan(x, w0) and scan(x, w1) must lie in each other's eps-neighborhood.
    Requires eps to exceed the abscissa gap |s1 - s0|."""
    w0 = check_scan_turn(w0)
    w1 = check_scan_turn(w1)
    if eps <= abs(x_coord(w1) - x_coord(w0)):
        raise DomainError("eps must exceed the scan abscissa gap")
    a = scan(x, w0)
    b = scan(x, w1)
    return (
        in_neighborhood(a, b, eps, mode).status == INSIDE
        and in_neighborhood(b, a, eps, mode).status == INSIDE
    )


def lemma_step2_check(x, y, w, eps: float, mode: str = SYMMETRIC) -> bool:
    """Scanning preserves neighborliness at a fixed time: for y inside
    N_eps(x), scan(y, w) must be inside N_eps(scan(x, w))."""
    w = check_scan_turn(w)
    if in_neighborhood(x, y, eps, mode).status != INSIDE:
        raise DomainError("lemma_step2_check needs y inside N_eps(x)")
    return in_neighborhood(scan(x, w), scan(y, w), eps, mode).status == INSIDE


@dataclass
class CertificateReport:
    samples: int
    passed: int
    failures: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "samples": self.samples,
            "passed": self.passed,
            "failures": self.failures,
        }


def _nearby_scan_turn(rng: random.Random, w: Fraction, alpha: float) -> Fraction:
    """A scan turn whose abscissa is strictly within alpha of w's."""
    s = x_coord(w)
    for shrink in (0.85, 0.4, 0.1, 0.0):
        target = min(1.0, max(-1.0, s + rng.uniform(-1.0, 1.0) * shrink * alpha))
        moved = Fraction(math.acos(target) / (2 * math.pi))
        moved = moved.limit_denominator(_MAX_TURN_DENOMINATOR)
        moved = min(max(moved, Fraction(0)), HALF)
        if abs(x_coord(moved) - s) < 0.95 * alpha:
            return moved
    return w


def continuity_certificate(x, w, alpha: float, eps: float, samples: int,
                           seed: int, mode: str = SYMMETRIC) -> CertificateReport:
    """Sampled continuity check of the sweep at (x, w).

    Each sample draws y strictly inside N_alpha(x) and a scan turn w'
    with |s' - s| < alpha, then tests that scan(y, w') stays inside
    N_eps(scan(x, w)). Requires alpha < eps/2. Samples that land in the
    numeric boundary band are redrawn, never counted either way; the
    report is deterministic in the seed.
    """
    w = check_scan_turn(w)
    if alpha <= 0 or eps <= 0:
        raise DomainError("alpha and eps must be positive")
    if not alpha < eps / 2:
        raise DomainError("continuity_certificate needs alpha < eps/2")
    if samples < 1:
        raise DomainError("samples must be at least 1")
    x = as_point(x)
    reference = scan(x, w)
    report = CertificateReport(samples=samples, passed=0)
    for i in range(samples):
        for retry in range(8):
            rng = random.Random(f"certify|{seed}|{i}|{retry}")
            y = sample_neighbor(x, alpha, seed=(seed * 1_000_003 + i * 8 + retry))
            w2 = _nearby_scan_turn(rng, w, alpha)
            verdict = in_neighborhood(reference, scan(y, w2), eps, mode)
            if verdict.status == BOUNDARY:
                continue
            if verdict.status != INSIDE:
                report.failures.append(
                    {
                        "sample": i,
                        "y": [
                            {"turn": str(p.turn), "marks": sorted(p.marks)}
                            for p in y.points
                        ],
                        "w2": str(w2),
                        "margin": verdict.margin,
                    }
                )
            else:
                report.passed += 1
            break
        else:
            report.failures.append({"sample": i, "error": "boundary band exhausted"})
    return report


def non_strongness_witness() -> tuple[ModuliPoint, Fraction]:
    """A point of Y that the sweep moves: evidence that the homotopy does
    not fix the subspace pointwise."""
    y = canonical_form(marked_cycle([(Fraction(0), ()), (HALF, (1,))]))
    w = Fraction(1, 4)
    assert is_in_Y(y) and not iso_equal(scan(y, w), y)
    return y, w
