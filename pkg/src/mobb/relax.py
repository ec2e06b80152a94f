#!/usr/bin/env python3
"""
Bi-objective LP relaxation of a node
The nondominated boundary of {Cx : x in the LP relaxation under fixings} is
built with the dichotomic weighted-sum scheme and returned as a BoundPolyline,
together with the basic solutions attaining its vertices.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Mapping, Optional, Sequence, Tuple

from .errors import ParameterError
from .lp import DEFAULT_SETTINGS, Basis, LpProblem, LpRow, LpSettings, lp_solve
from .model import Instance, Point2, Solution, make_solution
from .numeric import EXACT, Arithmetic, dot

logger = logging.getLogger(__name__)

Fixings = Mapping[int, int]


class Origin(str, Enum):
    RELAXATION = "relaxation"
    WS_CUT = "ws_cut"
    AWT_CUT = "awt_cut"


def _rational(value):
    return Fraction(value) if isinstance(value, int) else value


@dataclass(frozen=True)
class BoundPolyline:
    """Lower bound set L as a decreasing chain of vertices

    The region L + R²≧ is everything with z1 >= vertices[0].z1 lying on or above
    the chain, extended by a vertical ray above the first vertex and a
    horizontal ray right of the last one.
    """
    vertices: Tuple[Point2, ...]
    origins: Tuple[Origin, ...] = ()
    convex: bool = True

    def __post_init__(self):
        if not self.vertices:
            raise ParameterError("a polyline needs at least one vertex")
        # integer coordinates become fractions so interpolation stays exact
        object.__setattr__(self, "vertices", tuple(
            Point2(_rational(v.z1), _rational(v.z2)) for v in self.vertices))
        if not self.origins:
            object.__setattr__(self, "origins", (Origin.RELAXATION,) * len(self.vertices))
        if len(self.origins) != len(self.vertices):
            raise ParameterError("one origin tag per vertex")

    @property
    def first(self) -> Point2:
        return self.vertices[0]

    @property
    def last(self) -> Point2:
        return self.vertices[-1]

    def __len__(self) -> int:
        return len(self.vertices)

    def height(self, z1):
        """Boundary value f(z1): +inf left of the first vertex, flat after the last"""
        if z1 < self.first.z1:
            return math.inf
        if z1 >= self.last.z1:
            return self.last.z2
        for a, b in zip(self.vertices, self.vertices[1:]):
            if z1 <= b.z1:
                return a.z2 + (b.z2 - a.z2) * (z1 - a.z1) / (b.z1 - a.z1)
        return self.last.z2

    def leftmost_at(self, z2):
        """Smallest z1 with f(z1) <= z2, None if the level lies below the chain"""
        if z2 >= self.first.z2:
            return self.first.z1
        if z2 < self.last.z2:
            return None
        for a, b in zip(self.vertices, self.vertices[1:]):
            if z2 >= b.z2:
                return a.z1 + (b.z1 - a.z1) * (a.z2 - z2) / (a.z2 - b.z2)
        return self.last.z1

    def contains(self, point: Point2, arithmetic: Arithmetic = EXACT) -> bool:
        """Weak membership of L + R²≧"""
        if not arithmetic.le(self.first.z1, point.z1):
            return False
        return arithmetic.le(self.height(max(point.z1, self.first.z1)), point.z2)

    def lambda_min(self, weights: Sequence):
        """min over L of λ·z (attained at a vertex)"""
        return min(weights[0] * v.z1 + weights[1] * v.z2 for v in self.vertices)

    def box_area(self):
        """Area of the box spanned by the two extreme vertices"""
        return (self.last.z1 - self.first.z1) * (self.first.z2 - self.last.z2)


def _cross(a: Point2, b: Point2, c: Point2):
    return (b.z1 - a.z1) * (c.z2 - b.z2) - (b.z2 - a.z2) * (c.z1 - b.z1)


def is_convex_chain(vertices: Sequence[Point2], arithmetic: Arithmetic = EXACT) -> bool:
    """Slopes nondecreasing along the chain"""
    return all(arithmetic.le(0, _cross(a, b, c))
               for a, b, c in zip(vertices, vertices[1:], vertices[2:]))


def drop_collinear(vertices: Sequence[Point2], origins: Sequence[Origin],
                   arithmetic: Arithmetic = EXACT) -> Tuple[Tuple[Point2, ...], Tuple[Origin, ...]]:
    """Remove interior vertices lying on the segment joining their neighbours"""
    kept_v, kept_o = [], []
    for v, o in zip(vertices, origins):
        if kept_v and arithmetic.eq(kept_v[-1].z1, v.z1) and arithmetic.eq(kept_v[-1].z2, v.z2):
            continue
        while len(kept_v) >= 2 and arithmetic.is_zero(_cross(kept_v[-2], kept_v[-1], v)):
            kept_v.pop()
            kept_o.pop()
        kept_v.append(v)
        kept_o.append(o)
    return tuple(kept_v), tuple(kept_o)


@dataclass(frozen=True)
class ExtremeSupport:
    """Basic LP solutions attaining the relaxation vertices"""
    points: Tuple[Point2, ...]
    primals: Tuple[Tuple, ...]
    fractional_count: Tuple[int, ...]
    arithmetic: Arithmetic = EXACT


# ---------------------------------------------------------------------------
# LP construction

def relaxation_problem(inst: Instance, objective: Sequence, fixings: Fixings = None,
                       arithmetic: Arithmetic = EXACT, extra_rows: Sequence[LpRow] = ()) -> LpProblem:
    """LP over the instance rows with 0 <= x <= 1 and the given fixings"""
    fixings = fixings or {}
    lower = [arithmetic.num(fixings.get(j, 0)) for j in range(inst.n)]
    upper = [arithmetic.num(fixings.get(j, 1)) for j in range(inst.n)]
    rows = [LpRow(tuple(arithmetic.num(a) for a in c.coefficients), c.relation, arithmetic.num(c.rhs))
            for c in inst.constraints]
    return LpProblem(tuple(arithmetic.num(c) for c in objective), rows + list(extra_rows), lower, upper)


def _image(inst: Instance, primal: Sequence) -> Point2:
    c1, c2 = inst.min_objectives
    return Point2(dot(c1, primal), dot(c2, primal))


def _combined(inst: Instance, weights: Sequence, arithmetic: Arithmetic) -> Tuple:
    c1, c2 = inst.min_objectives
    l1, l2 = (arithmetic.num(w) for w in weights)
    return tuple(l1 * a + l2 * b for a, b in zip(c1, c2))


def _lex_solve(inst: Instance, fixings: Fixings, primary: int,
               settings: LpSettings) -> Optional[Tuple[Point2, Tuple, Basis]]:
    ar = settings.arithmetic
    objectives = inst.min_objectives
    first, second = objectives[primary - 1], objectives[2 - primary]
    stage1 = lp_solve(relaxation_problem(inst, first, fixings, ar), settings=settings)
    if not stage1.optimal:
        return None
    level = stage1.value + ar.eps
    pinned = LpRow(tuple(ar.num(c) for c in first), "le", level)
    stage2 = lp_solve(relaxation_problem(inst, second, fixings, ar, [pinned]),
                      warm=stage1.basis, settings=settings)
    if not stage2.optimal:
        # float round-off on the pinning row only
        return _image(inst, stage1.primal), stage1.primal, stage1.basis
    return _image(inst, stage2.primal), stage2.primal, stage1.basis


def lex_endpoint(inst: Instance, fixings: Fixings, primary: int,
                 settings: LpSettings = DEFAULT_SETTINGS) -> Optional[Tuple[Point2, Tuple]]:
    """Lexicographic optimum: min z_primary, then the other objective

    Returns (image, primal) or None when the node LP is infeasible.
    """
    if primary not in (1, 2):
        raise ParameterError(f"primary objective must be 1 or 2, got {primary}")
    found = _lex_solve(inst, fixings, primary, settings)
    if found is None:
        return None
    return found[0], found[1]


def _fractional_count(primals: Sequence[Tuple], n: int, arithmetic: Arithmetic) -> Tuple[int, ...]:
    counts = [0] * n
    for primal in primals:
        for j, v in enumerate(primal):
            if not arithmetic.is_integral(v):
                counts[j] += 1
    return tuple(counts)


def dichotomic_frontier(inst: Instance, fixings: Fixings = None,
                        settings: LpSettings = DEFAULT_SETTINGS
                        ) -> Optional[Tuple[BoundPolyline, ExtremeSupport]]:
    """Extreme supported points of the node relaxation, None if infeasible"""
    ar = settings.arithmetic
    fixings = fixings or {}
    left = _lex_solve(inst, fixings, 1, settings)
    if left is None:
        return None
    right = _lex_solve(inst, fixings, 2, settings)
    points: List[Point2] = [left[0]]
    primals: List[Tuple] = [left[1]]
    warm = left[2]
    if right is not None and not (ar.eq(right[0].z1, left[0].z1) and ar.eq(right[0].z2, left[0].z2)):
        points.append(right[0])
        primals.append(right[1])

    i = 0
    while i + 1 < len(points):
        a, b = points[i], points[i + 1]
        weights = (a.z2 - b.z2, b.z1 - a.z1)
        if not ar.exact:
            total = weights[0] + weights[1]
            weights = (weights[0] / total, weights[1] / total)
        result = lp_solve(relaxation_problem(inst, _combined(inst, weights, ar), fixings, ar),
                          warm=warm, settings=settings)
        if not result.optimal:
            # cannot happen for a feasible node; keep the segment
            logger.warning(f"Weighted LP infeasible between {a} and {b}")
            i += 1
            continue
        warm = result.basis or warm
        reference = weights[0] * a.z1 + weights[1] * a.z2
        candidate = _image(inst, result.primal)
        if ar.lt(result.value, reference) and not (
                ar.eq(candidate.z1, a.z1) or ar.eq(candidate.z1, b.z1)):
            points.insert(i + 1, candidate)
            primals.insert(i + 1, result.primal)
        else:
            i += 1

    vertices, _ = drop_collinear(points, [Origin.RELAXATION] * len(points), ar)
    kept = set(vertices)
    support_points, support_primals = [], []
    for p, x in zip(points, primals):
        if p in kept and p not in support_points:
            support_points.append(p)
            support_primals.append(x)
    polyline = BoundPolyline(vertices)
    support = ExtremeSupport(tuple(support_points), tuple(support_primals),
                             _fractional_count(support_primals, inst.n, ar), ar)
    logger.debug(f"Relaxation with {len(fixings)} fixings: {len(vertices)} vertices")
    return polyline, support


def integer_extreme_points(sup: ExtremeSupport, inst: Instance) -> List[Solution]:
    """Stored basic solutions that are 0/1 vectors"""
    return [make_solution(inst, x) for x in sup.primals if sup.arithmetic.is_binary_vector(x)]

