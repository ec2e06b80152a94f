#!/usr/bin/env python3
"""
Single-objective IP scalarizations
Weighted sum and augmented weighted Tchebycheff problems are solved to
integer optimality with a small LP-based branch and bound; solved
scalarizations are cached by their normalized key.
"""

import heapq
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import DegenerateInputError, InfeasibleProblemError
from .lp import DEFAULT_SETTINGS, Basis, LpProblem, LpRow, LpSettings, lp_solve
from .model import Instance, Point2, Solution, make_solution
from .numeric import to_coprime_integers

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# integer programming

@dataclass(frozen=True)
class IpResult:
    value: object
    solution: Solution
    aux: Tuple = ()
    nodes: int = 0


@dataclass(order=True)
class _IpNode:
    key: Tuple
    fixings: Dict[int, int] = field(compare=False)
    primal: Tuple = field(compare=False)
    value: object = field(compare=False)
    basis: Optional[Basis] = field(compare=False)
    depth: int = field(compare=False)


def _ip_problem(inst: Instance, objective: Sequence, fixings: Mapping[int, int],
                extra_rows: Sequence[LpRow], aux_bounds: Sequence[Tuple], settings: LpSettings) -> LpProblem:
    ar = settings.arithmetic
    pad = [ar.num(0)] * len(aux_bounds)
    rows = [LpRow(tuple(ar.num(a) for a in c.coefficients) + tuple(pad), c.relation, ar.num(c.rhs))
            for c in inst.constraints]
    rows += [LpRow(tuple(ar.num(a) for a in r.coefficients), r.relation, ar.num(r.rhs)) for r in extra_rows]
    lower = [ar.num(fixings.get(j, 0)) for j in range(inst.n)] + [ar.num(lo) for lo, _ in aux_bounds]
    upper = [ar.num(fixings.get(j, 1)) for j in range(inst.n)] + [ar.num(hi) for _, hi in aux_bounds]
    return LpProblem(tuple(ar.num(c) for c in objective), rows, lower, upper)


def ip_solve(objective: Sequence, inst: Instance, extra_rows: Sequence[LpRow] = (),
             aux_bounds: Sequence[Tuple] = (), settings: LpSettings = DEFAULT_SETTINGS) -> Optional[IpResult]:
    """min objective·x over the 0/1 points of inst (plus extra rows)

    `aux_bounds` appends continuous columns after the n binaries; `objective`
    and every extra row must then cover n + len(aux_bounds) entries. Returns
    None when no 0/1 point is feasible.
    """
    ar = settings.arithmetic
    n = inst.n
    integral_objective = not aux_bounds and all(Fraction(c).denominator == 1 for c in objective)

    def bound_of(value):
        if not integral_objective:
            return value
        return math.ceil(value - ar.eps)

    def solve(fixings, warm):
        return lp_solve(_ip_problem(inst, objective, fixings, extra_rows, aux_bounds, settings), warm, settings)

    counter = 0
    heap: List[_IpNode] = []

    def push(fixings, result, depth):
        nonlocal counter
        counter += 1
        heapq.heappush(heap, _IpNode((bound_of(result.value), -depth, counter), fixings,
                                     result.primal, result.value, result.basis, depth))

    root = solve({}, None)
    if not root.optimal:
        return None
    push({}, root, 0)
    best: Optional[Tuple] = None
    explored = 0
    while heap:
        node = heapq.heappop(heap)
        if best is not None and not ar.lt(node.key[0], bound_of(best[0])):
            continue
        explored += 1
        structural = node.primal[:n]
        fractional = [(ar.fractionality(v), j) for j, v in enumerate(structural)
                      if j not in node.fixings and not ar.is_integral(v)]
        if not fractional:
            if best is None or ar.lt(node.value, best[0]):
                best = (node.value, node.primal)
            continue
        # most fractional, smallest index on ties
        _, var = max(fractional, key=lambda item: (item[0], -item[1]))
        for fixed in (1, 0):
            child = dict(node.fixings)
            child[var] = fixed
            result = solve(child, node.basis)
            if result.optimal:
                push(child, result, node.depth + 1)

    if best is None:
        return None
    value, primal = best
    solution = make_solution(inst, primal[:n])
    logger.debug(f"IP solved in {explored} nodes, value {value}")
    return IpResult(value, solution, tuple(primal[n:]), explored)


# ---------------------------------------------------------------------------
# weighted sum

@dataclass(frozen=True)
class WeightVector:
    l1: int
    l2: int

    def __post_init__(self):
        if not (self.l1 > 0 and self.l2 > 0):
            raise DegenerateInputError(f"weights must be positive, got ({self.l1}, {self.l2})")

    @property
    def key(self) -> Tuple[int, int]:
        return to_coprime_integers((self.l1, self.l2))

    def __iter__(self):
        return iter((self.l1, self.l2))


def derive_lambda(pair: Tuple[Point2, Point2]) -> WeightVector:
    """Normal of the segment between two adjacent incumbents"""
    a, b = sorted(pair)
    l1, l2 = a.z2 - b.z2, b.z1 - a.z1
    if not (l1 > 0 and l2 > 0):
        raise DegenerateInputError(f"pair {a}, {b} spans no box")
    return WeightVector(*to_coprime_integers((l1, l2)))


class ScalarStatus(str, Enum):
    NEW = "new"
    CACHE_HIT = "cache_hit"
    SKIPPED = "skipped"


@dataclass(frozen=True)
class ScalarOutcome:
    status: ScalarStatus
    value: object = None
    solution: Optional[Solution] = None


@dataclass
class ScalarCache:
    ws: Dict[Tuple[int, int], Tuple[object, Solution]] = field(default_factory=dict)
    awt: Dict[Tuple[Point2, Point2], Tuple[object, Solution]] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.ws) + len(self.awt)


def weighted_objective(inst: Instance, weights: Sequence) -> Tuple:
    c1, c2 = inst.min_objectives
    l1, l2 = weights
    return tuple(l1 * a + l2 * b for a, b in zip(c1, c2))


def solve_weighted_sum(inst: Instance, weights: Sequence, cache: ScalarCache,
                       settings: LpSettings = DEFAULT_SETTINGS) -> ScalarOutcome:
    """min λ1 z1 + λ2 z2 over X, skipped for a non-positive weight"""
    l1, l2 = weights
    if not (l1 > 0 and l2 > 0):
        return ScalarOutcome(ScalarStatus.SKIPPED)
    key = to_coprime_integers((l1, l2))
    if key in cache.ws:
        value, solution = cache.ws[key]
        return ScalarOutcome(ScalarStatus.CACHE_HIT, value, solution)
    result = ip_solve(weighted_objective(inst, key), inst, settings=settings)
    if result is None:
        raise InfeasibleProblemError("weighted sum over an infeasible instance")
    cache.ws[key] = (result.value, result.solution)
    logger.debug(f"WS λ={key}: value {result.value} at {result.solution.image}")
    return ScalarOutcome(ScalarStatus.NEW, result.value, result.solution)


# ---------------------------------------------------------------------------
# augmented weighted Tchebycheff

@dataclass(frozen=True)
class AwtParams:
    """Weights, augmentation and local ideal point of one box"""
    w1: Fraction
    w2: Fraction
    tau: Fraction
    s: Point2
    box: Tuple[Point2, Point2]


def awt_params(z_left: Point2, z_right: Point2) -> AwtParams:
    """Corner-equalizing weights and τ = 1/(2(Δ1+Δ2)²) for the box of two points"""
    a, b = sorted((z_left, z_right))
    d1, d2 = Fraction(b.z1 - a.z1), Fraction(a.z2 - b.z2)
    if d1 <= 0 or d2 <= 0:
        raise DegenerateInputError(f"points {a} and {b} span an empty box")
    total = d1 + d2
    return AwtParams(d2 / total, d1 / total, 1 / (2 * total ** 2), Point2(a.z1, b.z2), (a, b))


def awt_norm(point: Point2, params: AwtParams):
    d1, d2 = point.z1 - params.s.z1, point.z2 - params.s.z2
    return max(params.w1 * d1, params.w2 * d2) + params.tau * (d1 + d2)


def _objective_range(row: Sequence[int]) -> Tuple[int, int]:
    return sum(min(c, 0) for c in row), sum(max(c, 0) for c in row)


def solve_awt(inst: Instance, params: AwtParams, cache: ScalarCache,
              settings: LpSettings = DEFAULT_SETTINGS) -> ScalarOutcome:
    """min t + τ(σ1 + σ2), t >= w_i σ_i, σ = z(x) - s, over X"""
    if params.box in cache.awt:
        value, solution = cache.awt[params.box]
        return ScalarOutcome(ScalarStatus.CACHE_HIT, value, solution)
    ar = settings.arithmetic
    c1, c2 = inst.min_objectives
    w1, w2, tau = (ar.num(v) for v in (params.w1, params.w2, params.tau))
    s1, s2 = ar.num(params.s.z1), ar.num(params.s.z2)
    (lo1, hi1), (lo2, hi2) = _objective_range(c1), _objective_range(c2)
    t_bounds = (max(w1 * (lo1 - s1), w2 * (lo2 - s2)), max(w1 * (hi1 - s1), w2 * (hi2 - s2)))
    objective = tuple(tau * (a + b) for a, b in zip(c1, c2)) + (ar.num(1),)
    rows = [
        LpRow(tuple(w1 * a for a in c1) + (ar.num(-1),), "le", w1 * s1),
        LpRow(tuple(w2 * b for b in c2) + (ar.num(-1),), "le", w2 * s2),
    ]
    result = ip_solve(objective, inst, rows, [t_bounds], settings)
    if result is None:
        raise InfeasibleProblemError("Tchebycheff problem over an infeasible instance")
    value = awt_norm(result.solution.image, params)
    cache.awt[params.box] = (value, result.solution)
    logger.debug(f"AWT box {params.box}: value {value} at {result.solution.image}")
    return ScalarOutcome(ScalarStatus.NEW, value, result.solution)
