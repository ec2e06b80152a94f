#!/usr/bin/env python3
"""
Objective-space bookkeeping
Incumbent list with the ⊎ update, local upper bounds, dominance fathoming,
cuts from weighted-sum and Tchebycheff level sets, and the approximated
hypervolume gaps used for node selection.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Sequence, Set, Tuple

from .errors import DegenerateInputError
from .model import Point2, Solution
from .numeric import EXACT, Arithmetic
from .relax import BoundPolyline, Origin, drop_collinear, is_convex_chain

logger = logging.getLogger(__name__)

M = math.inf


# ---------------------------------------------------------------------------
# incumbents

@dataclass
class Incumbent:
    solution: Solution
    confirmed_by: Set[str] = field(default_factory=set)

    @property
    def point(self) -> Point2:
        return self.solution.image

    @property
    def confirmed(self) -> bool:
        return bool(self.confirmed_by)


@dataclass(frozen=True)
class InsertOutcome:
    inserted: bool
    removed: Tuple[Solution, ...] = ()


class IncumbentList:
    """Mutually nondominated feasible images, sorted by z1"""

    def __init__(self):
        self.entries: List[Incumbent] = []

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def points(self) -> List[Point2]:
        return [e.point for e in self.entries]

    @property
    def solutions(self) -> List[Solution]:
        return [e.solution for e in self.entries]

    def find(self, point: Point2) -> Optional[Incumbent]:
        for entry in self.entries:
            if entry.point == point:
                return entry
        return None

    def confirm(self, point: Point2, source: str) -> bool:
        """Mark the incumbent with this image as proven nondominated"""
        entry = self.find(point)
        if entry is None:
            return False
        entry.confirmed_by.add(source)
        return True

    def confirmed_points(self, sources: Sequence[str]) -> List[Point2]:
        return [e.point for e in self.entries if e.confirmed_by.intersection(sources)]


def incumbent_insert(U: IncumbentList, cand: Solution) -> InsertOutcome:
    """U ⊎ {cand}: reject if weakly dominated, else insert and drop what it dominates"""
    z = cand.image
    if any(e.point.weakly_dominates(z) for e in U.entries):
        return InsertOutcome(False)
    removed = tuple(e.solution for e in U.entries if z.weakly_dominates(e.point))
    U.entries = [e for e in U.entries if not z.weakly_dominates(e.point)]
    U.entries.append(Incumbent(cand))
    U.entries.sort(key=lambda e: e.point.z1)
    return InsertOutcome(True, removed)


@dataclass(frozen=True)
class LocalUpperBounds:
    lubs: Tuple[Point2, ...]

    @property
    def interior(self) -> Tuple[Point2, ...]:
        return self.lubs[1:-1] if len(self.lubs) > 1 else ()


def interior_lubs(points: Sequence[Point2]) -> List[Point2]:
    return [Point2(b.z1, a.z2) for a, b in zip(points, points[1:])]


def rebuild_lubs(U: IncumbentList) -> LocalUpperBounds:
    points = sorted(U.points)
    if not points:
        return LocalUpperBounds((Point2(M, M),))
    lubs = [Point2(points[0].z1, M)] + interior_lubs(points) + [Point2(M, points[-1].z2)]
    return LocalUpperBounds(tuple(lubs))


def points_above(U: IncumbentList, L: BoundPolyline, arithmetic: Arithmetic = EXACT) -> List[Point2]:
    """Incumbent images lying in L + R²≧ (weak membership)"""
    return [p for p in U.points if L.contains(p, arithmetic)]


def lub_above(L: BoundPolyline, lub: Point2, arithmetic: Arithmetic = EXACT) -> bool:
    """Some point of L lies strictly below-left of lub"""
    eps = arithmetic.eps
    if not lub.z1 - L.first.z1 > -eps:
        return False
    return lub.z2 - L.height(lub.z1) > -eps if math.isfinite(lub.z2) else True


def fathom_by_dominance(L: BoundPolyline, U: IncumbentList, lubs: LocalUpperBounds,
                        arithmetic: Arithmetic = EXACT) -> bool:
    """True iff no local upper bound lies strictly above L"""
    return not any(lub_above(L, u, arithmetic) for u in lubs.lubs)


# ---------------------------------------------------------------------------
# cuts
#
# A cut keeps {z : phi(z) >= v} for phi increasing in both coordinates, i.e.
# the region above a decreasing function k. The new boundary is max(f, k)
# where f is the polyline boundary with its flat tail.

@dataclass(frozen=True)
class _Line:
    """z2 = intercept + slope * z1"""
    intercept: object
    slope: object

    def at(self, z1):
        return self.intercept + self.slope * z1


def _pieces(L: BoundPolyline) -> List[Tuple[object, object, _Line]]:
    """Segments of f as (z1 from, z1 to, line); the last piece is the flat tail"""
    pieces = []
    for a, b in zip(L.vertices, L.vertices[1:]):
        slope = (b.z2 - a.z2) / (b.z1 - a.z1)
        pieces.append((a.z1, b.z1, _Line(a.z2 - slope * a.z1, slope)))
    zero = L.last.z2 - L.last.z2
    pieces.append((L.last.z1, M, _Line(L.last.z2, zero)))
    return pieces


def _raise_boundary(L: BoundPolyline, k: Callable, lines: Sequence[_Line], kinks: Sequence,
                    tag: Origin, arithmetic: Arithmetic) -> BoundPolyline:
    ar = arithmetic
    start = L.first.z1
    candidates = {start}
    candidates.update(v.z1 for v in L.vertices)
    candidates.update(x for x in kinks if x >= start)
    for lo, hi, piece in _pieces(L):
        for line in lines:
            if ar.is_zero(piece.slope - line.slope):
                continue
            x = (line.intercept - piece.intercept) / (piece.slope - line.slope)
            if lo <= x <= hi:
                candidates.add(x)

    original = {v.z1: o for v, o in zip(L.vertices, L.origins)}
    raised = False
    points, origins = [], []
    floor = L.last.z2
    for x in sorted(candidates):
        f, kx = L.height(x), k(x)
        if ar.lt(f, kx):
            raised = True
        if ar.le(f, kx):
            g, tag_x = kx, tag
        else:
            g, tag_x = f, original.get(x, tag)
        if ar.le(g, floor):
            g = floor
        points.append(Point2(x, g))
        origins.append(tag_x)
        if g == floor:
            break
    if not raised:
        return L
    vertices, tags = drop_collinear(points, origins, ar)
    return BoundPolyline(vertices, tags, L.convex and is_convex_chain(vertices, ar))


def clip_halfspace(L: BoundPolyline, weights: Sequence, c,
                   arithmetic: Arithmetic = EXACT) -> BoundPolyline:
    """Intersect L + R²≧ with {λ·z >= c}"""
    l1, l2 = (arithmetic.num(w) for w in weights)
    c = arithmetic.num(c)
    if not (l1 > 0 and l2 > 0):
        raise DegenerateInputError(f"weights must be positive, got {weights}")
    if arithmetic.le(c, L.lambda_min((l1, l2))):
        return L
    line = _Line(c / l2, -l1 / l2)
    return _raise_boundary(L, line.at, [line], [], Origin.WS_CUT, arithmetic)


def clip_awt_levelset(L: BoundPolyline, params, value, arithmetic: Arithmetic = EXACT) -> BoundPolyline:
    """Intersect L + R²≧ with the Tchebycheff level set {norm(z - s) >= value}

    The excluded region is bounded by two lines meeting at the kink where
    w1(z1 - s1) = w2(z2 - s2); the new boundary is in general not convex.
    """
    w1, w2, tau, value = (arithmetic.num(v) for v in (params.w1, params.w2, params.tau, value))
    s = Point2(arithmetic.num(params.s.z1), arithmetic.num(params.s.z2))
    if value <= 0:
        return L
    # norm >= value  <=>  z2 >= min(shallow(z1), steep(z1))
    shallow = _Line(s.z2 + (value + tau * s.z1) / (w2 + tau), -tau / (w2 + tau))
    steep = _Line(s.z2 + (value + (w1 + tau) * s.z1) / tau, -(w1 + tau) / tau)
    sigma1 = value / (w1 + tau + tau * w1 / w2)
    kink = s.z1 + sigma1

    def k(z1):
        return min(shallow.at(z1), steep.at(z1))

    return _raise_boundary(L, k, [shallow, steep], [kink], Origin.AWT_CUT, arithmetic)


# ---------------------------------------------------------------------------
# hypervolume gaps

class GapKind(str, Enum):
    TOTAL = "total"
    LOCAL = "local"


@dataclass(frozen=True)
class GapReport:
    thg: object
    lhg: object
    pair: Optional[Tuple[Point2, Point2]] = None
    lub: Optional[Point2] = None
    kind: GapKind = GapKind.LOCAL
    proxy: bool = False

    @property
    def score(self):
        return self.thg if self.kind == GapKind.TOTAL else self.lhg


def _clamp(lub: Point2, L: BoundPolyline) -> Point2:
    z1 = lub.z1 if math.isfinite(lub.z1) else L.last.z1
    z2 = lub.z2 if math.isfinite(lub.z2) else L.first.z2
    return Point2(z1, z2)


def spanning_points(L: BoundPolyline, lub: Point2) -> Tuple[Optional[Point2], Point2]:
    """sp¹ (leftmost boundary point at height lu2) and sp² (boundary point below lu1)"""
    lub = _clamp(lub, L)
    x = L.leftmost_at(lub.z2)
    sp1 = None if x is None else Point2(x, lub.z2)
    return sp1, Point2(lub.z1, L.height(lub.z1))


def hg(L: BoundPolyline, lub: Point2):
    """Approximated hypervolume gap of one local upper bound"""
    lub = _clamp(lub, L)
    sp1, sp2 = spanning_points(L, lub)
    if sp1 is None or not math.isfinite(sp2.z2):
        return 0
    return abs(sp1.z1 - lub.z1) * abs(sp2.z2 - lub.z2) / 2


def slice_area(L: BoundPolyline, z: Point2, z_next: Point2):
    """Trapezoid between the boundary and the step of lu = (z_next1, z2)"""
    left = abs(z.z2 - L.height(z.z1))
    right = abs(z.z2 - L.height(z_next.z1))
    return (left + right) / 2 * abs(z_next.z1 - z.z1)


def gap_report(L: BoundPolyline, U: IncumbentList, kind: GapKind = GapKind.LOCAL,
               root: Optional[BoundPolyline] = None, arithmetic: Arithmetic = EXACT) -> GapReport:
    """thg and lhg of L against the incumbents above it

    With fewer than two such incumbents the score falls back to half the box
    of L's extreme vertices (of `root` when there are no incumbents at all).
    """
    K = points_above(U, L, arithmetic)
    if len(K) < 2:
        base = root if (len(U) == 0 and root is not None) else L
        proxy = base.box_area() / 2
        return GapReport(proxy, proxy, kind=kind, proxy=True)
    lubs = interior_lubs(K)
    gaps = [hg(L, lu) for lu in lubs]
    thg = gaps[0] + sum((slice_area(L, K[i], K[i + 1]) for i in range(1, len(K) - 1)), 0)
    best = 0
    for i, g in enumerate(gaps):
        if g > gaps[best]:
            best = i
    return GapReport(thg, gaps[best], (K[best], K[best + 1]), lubs[best], kind)
