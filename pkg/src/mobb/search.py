#!/usr/bin/env python3
"""
Bi-objective branch and bound driver
Per iteration: select an active node, maybe run an IP scalarization per the
class schedule, explore the node (relaxation, incumbent update, fathoming)
and branch when it survives.
"""

import heapq
import logging
import math
import time
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, FrozenSet, List, Optional, Tuple

from .bounds import (GapKind, IncumbentList, LocalUpperBounds, clip_awt_levelset, clip_halfspace,
                     fathom_by_dominance, gap_report, incumbent_insert, rebuild_lubs)
from .config import SolverConfig
from .errors import BranchingError, DegenerateInputError, ParameterError
from .model import ClassKind, Instance, Point2, Solution
from .relax import BoundPolyline, ExtremeSupport, dichotomic_frontier, integer_extreme_points
from .scalarize import (AwtParams, ScalarCache, ScalarStatus, awt_params, derive_lambda, ip_solve,
                        solve_awt, solve_weighted_sum)

logger = logging.getLogger(__name__)

AWT_PERIOD = 50
WS_PERIOD = 10


class NodeOrder(str, Enum):
    DEPTH_FIRST = "depth_first"
    MAX_LHG = "max_lhg"
    MAX_THG = "max_thg"


class Scalarization(str, Enum):
    NONE = "none"
    WS_ONLY = "ws_only"
    WS_PLUS_AWT = "ws_plus_awt"


class AwtCut(str, Enum):
    INTEGRATE = "integrate_awt_cut"
    SKIP = "skip_awt_cut"


class Trigger(str, Enum):
    WS = "ws"
    AWT = "awt"


class FathomReason(str, Enum):
    INFEASIBILITY = "infeasibility"
    OPTIMALITY = "optimality"
    DOMINANCE = "dominance"


class SolveStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    INCOMPLETE = "incomplete"


@dataclass(frozen=True)
class Strategy:
    node_order: NodeOrder = NodeOrder.DEPTH_FIRST
    scalarization: Scalarization = Scalarization.NONE
    alpha: int = 1
    awt_cut: AwtCut = AwtCut.INTEGRATE
    label: str = ""

    def __post_init__(self):
        if self.alpha not in (1, 2, 3):
            raise ParameterError(f"alpha must be 1, 2 or 3, got {self.alpha}")

    @property
    def gap_kind(self) -> GapKind:
        return GapKind.TOTAL if self.node_order == NodeOrder.MAX_THG else GapKind.LOCAL


@dataclass
class Node:
    id: int
    parent: Optional[int] = None
    fixed0: FrozenSet[int] = frozenset()
    fixed1: FrozenSet[int] = frozenset()
    depth: int = 0
    score: Any = 0
    inherited: Optional[BoundPolyline] = None
    state: str = "open"
    reason: Optional[FathomReason] = None
    bound: Optional[BoundPolyline] = None

    @property
    def fixings(self) -> Dict[int, int]:
        fixings = {j: 0 for j in self.fixed0}
        fixings.update({j: 1 for j in self.fixed1})
        return fixings


@dataclass(frozen=True)
class Exploration:
    """Either a fathoming reason or the variable to branch on"""
    reason: Optional[FathomReason] = None
    var: Optional[int] = None

    @property
    def fathomed(self) -> bool:
        return self.reason is not None


@dataclass(frozen=True)
class Cut:
    kind: Trigger
    value: Any
    weights: Optional[Tuple[int, int]] = None
    params: Optional[AwtParams] = None


@dataclass
class RunStats:
    nodes: int = 0
    ips: int = 0
    wall_time: float = 0.0
    iterations: int = 0
    branched: int = 0
    fathomed: Dict[str, int] = field(default_factory=lambda: {r.value: 0 for r in FathomReason})
    ws_triggers: int = 0
    awt_triggers: int = 0
    cache_hits: int = 0
    skipped_triggers: int = 0
    triggers: List[Dict[str, Any]] = field(default_factory=list)
    cuts: List[Cut] = field(default_factory=list)
    events: List[Dict[str, Any]] = field(default_factory=list)

    def summary(self) -> Dict[str, Any]:
        return {
            "nodes": self.nodes,
            "ips": self.ips,
            "time_s": round(self.wall_time, 6),
            "iterations": self.iterations,
            "branched": self.branched,
            "fathomed": dict(self.fathomed),
            "ws_triggers": self.ws_triggers,
            "awt_triggers": self.awt_triggers,
            "cache_hits": self.cache_hits,
        }


@dataclass
class SolveResult:
    frontier: List[Tuple[Point2, Solution]]
    stats: RunStats
    status: SolveStatus

    @property
    def points(self) -> List[Point2]:
        return [p for p, _ in self.frontier]


@dataclass
class SearchState:
    """Everything one solve owns; mutated only by the driver"""
    inst: Instance
    strategy: Strategy
    config: SolverConfig
    incumbents: IncumbentList = field(default_factory=IncumbentList)
    lubs: LocalUpperBounds = None
    cache: ScalarCache = field(default_factory=ScalarCache)
    cuts: List[Cut] = field(default_factory=list)
    root_bound: Optional[BoundPolyline] = None
    stats: RunStats = field(default_factory=RunStats)
    next_id: int = 0

    def __post_init__(self):
        if self.lubs is None:
            self.lubs = rebuild_lubs(self.incumbents)

    @property
    def arithmetic(self):
        return self.config.arithmetic

    def new_id(self) -> int:
        node_id = self.next_id
        self.next_id += 1
        return node_id

    def insert(self, solution: Solution, confirmed_by: Optional[str] = None) -> bool:
        outcome = incumbent_insert(self.incumbents, solution)
        if outcome.inserted:
            self.lubs = rebuild_lubs(self.incumbents)
        if confirmed_by:
            self.incumbents.confirm(solution.image, confirmed_by)
        return outcome.inserted

    def log_event(self, event: Dict[str, Any]) -> None:
        self.stats.events.append(event)


def _point(p: Point2) -> List[float]:
    return [float(p.z1), float(p.z2)]


# ---------------------------------------------------------------------------
# node selection

class OpenSet:
    """Stack for depth-first, max-heap on (score, -id) for the gap orders"""

    def __init__(self, strategy: Strategy):
        self.strategy = strategy
        self._stack: List[Node] = []
        self._heap: List[Tuple[Any, int, Node]] = []

    def push(self, node: Node) -> None:
        if self.strategy.node_order == NodeOrder.DEPTH_FIRST:
            self._stack.append(node)
        else:
            heapq.heappush(self._heap, (-node.score, node.id, node))

    def pop(self) -> Node:
        if self.strategy.node_order == NodeOrder.DEPTH_FIRST:
            return self._stack.pop()
        return heapq.heappop(self._heap)[2]

    def __len__(self) -> int:
        return len(self._stack) + len(self._heap)


def select_node(open_set: OpenSet) -> Node:
    """Last-in node for depth-first, largest score (then smallest id) otherwise"""
    return open_set.pop()


# ---------------------------------------------------------------------------
# exploration and branching

def most_fractional(sup: ExtremeSupport) -> Optional[int]:
    """Variable fractional in the most stored solutions, smallest index on ties"""
    best = None
    for j, count in enumerate(sup.fractional_count):
        if count > 0 and (best is None or count > sup.fractional_count[best]):
            best = j
    return best


def apply_cuts(L: BoundPolyline, state: SearchState) -> BoundPolyline:
    ar = state.arithmetic
    for cut in state.cuts:
        if cut.kind == Trigger.WS:
            L = clip_halfspace(L, cut.weights, cut.value, ar)
        elif state.strategy.awt_cut == AwtCut.INTEGRATE:
            L = clip_awt_levelset(L, cut.params, cut.value, ar)
    return L


def explore(node: Node, state: SearchState) -> Exploration:
    """Relax, update incumbents, fathom (infeasibility, optimality, dominance) or pick a variable"""
    inst, ar = state.inst, state.arithmetic
    state.stats.nodes += 1
    relaxed = dichotomic_frontier(inst, node.fixings, state.config.lp_settings)
    if relaxed is None:
        return _fathom(node, state, FathomReason.INFEASIBILITY)
    relaxation, support = relaxed
    if state.root_bound is None:
        state.root_bound = relaxation

    integral = integer_extreme_points(support, inst)
    for solution in integral:
        state.insert(solution)

    L = apply_cuts(relaxation, state)
    node.bound = L
    if len(relaxation) == 1 and any(s.image == relaxation.first for s in integral):
        return _fathom(node, state, FathomReason.OPTIMALITY)
    if fathom_by_dominance(L, state.incumbents, state.lubs, ar):
        return _fathom(node, state, FathomReason.DOMINANCE)

    if state.strategy.node_order != NodeOrder.DEPTH_FIRST:
        node.score = gap_report(L, state.incumbents, state.strategy.gap_kind,
                                state.root_bound, ar).score
    # branching uses the supports of the uncut relaxation
    var = most_fractional(support)
    if var is None:
        fixed = node.fixed0 | node.fixed1
        free = [j for j in range(inst.n) if j not in fixed]
        if not free:
            raise BranchingError(f"node {node.id} survived with every variable fixed")
        var = free[0]
    node.state = "branched"
    state.stats.branched += 1
    state.log_event({"event": "node", "node": node.id, "parent": node.parent, "depth": node.depth,
                     "outcome": "branch", "var": var, "vertices": len(L),
                     "cuts": len(state.cuts), "incumbents": len(state.incumbents)})
    return Exploration(var=var)


def _fathom(node: Node, state: SearchState, reason: FathomReason) -> Exploration:
    node.state = "fathomed"
    node.reason = reason
    state.stats.fathomed[reason.value] += 1
    state.log_event({"event": "node", "node": node.id, "parent": node.parent, "depth": node.depth,
                     "outcome": "fathomed", "reason": reason.value,
                     "vertices": len(node.bound) if node.bound else 0,
                     "cuts": len(state.cuts), "incumbents": len(state.incumbents)})
    logger.debug(f"Node {node.id} fathomed by {reason.value}")
    return Exploration(reason=reason)


def branch(node: Node, var: int, state: SearchState) -> Tuple[Node, Node]:
    """Children fixing var to 0 and to 1, both inheriting score and bound"""
    if var in node.fixed0 or var in node.fixed1:
        raise BranchingError(f"variable {var} is already fixed in node {node.id}")
    common = dict(parent=node.id, depth=node.depth + 1, score=node.score, inherited=node.bound)
    child0 = Node(state.new_id(), fixed0=node.fixed0 | {var}, fixed1=node.fixed1, **common)
    child1 = Node(state.new_id(), fixed0=node.fixed0, fixed1=node.fixed1 | {var}, **common)
    return child0, child1


# ---------------------------------------------------------------------------
# scalarization schedule

def ws_phases(inst: Instance, alpha: int) -> List[Tuple[Any, int]]:
    """(last iteration, modulus) per weighted-sum phase of the class table"""
    n = inst.n
    kind = inst.class_tag.kind
    if kind == ClassKind.ASSIGNMENT:
        (l,) = inst.class_tag.params
        window = n * l
        limits = [Fraction(window, 3), Fraction(2 * window, 3), window]
        moduli = [WS_PERIOD, l, n]
    elif kind == ClassKind.FACILITY_LOCATION:
        window = Fraction(n * n, 4)
        limits = [window, 2 * window, 3 * window]
        moduli = [WS_PERIOD, max(1, n // 2), n]
    else:
        window = n * n
        limits = [Fraction(window, 3), Fraction(2 * window, 3), window]
        moduli = [WS_PERIOD, n, 2 * n]
    if alpha == 1:
        return [(math.inf, WS_PERIOD)]
    if alpha == 2:
        return [(window, WS_PERIOD)]
    return list(zip(limits, moduli))


def schedule_trigger(iteration: int, strategy: Strategy, inst: Instance) -> Optional[Trigger]:
    """WS, AWT or nothing for this iteration; AWT wins when both match"""
    if strategy.scalarization == Scalarization.NONE:
        return None
    phases = ws_phases(inst, strategy.alpha)
    ws = False
    for limit, modulus in phases:
        if iteration <= limit:
            ws = iteration % modulus == 0
            break
    if strategy.scalarization == Scalarization.WS_PLUS_AWT and iteration % AWT_PERIOD == 0:
        if strategy.alpha == 1 or iteration > phases[-1][0]:
            return Trigger.AWT
    return Trigger.WS if ws else None


def _record_trigger(state: SearchState, iteration: int, kind: Trigger, applied: bool, detail: str,
                    point: Optional[Point2] = None) -> bool:
    entry = {"event": "trigger", "iteration": iteration, "kind": kind.value,
             "applied": applied, "detail": detail}
    if point is not None:
        entry["point"] = _point(point)
    state.stats.triggers.append(entry)
    state.log_event(entry)
    if not applied:
        state.stats.skipped_triggers += 1
    return applied


def _largest_open_box(state: SearchState) -> Optional[Tuple[Point2, Point2]]:
    sources = ("ws", "awt") if state.config.awt_spans_boxes else ("ws",)
    confirmed = sorted(state.incumbents.confirmed_points(sources))
    best, best_area = None, 0
    for a, b in zip(confirmed, confirmed[1:]):
        area = (b.z1 - a.z1) * (a.z2 - b.z2)
        if area > best_area and (a, b) not in state.cache.awt:
            best, best_area = (a, b), area
    return best


def trigger_scalarization(kind: Trigger, state: SearchState, node: Node, iteration: int = 0) -> bool:
    """Run one root scalarization; False when it cannot be applied or was solved before"""
    settings = state.config.lp_settings
    if kind == Trigger.WS:
        if node.inherited is None:
            return _record_trigger(state, iteration, kind, False, "no bound")
        report = gap_report(node.inherited, state.incumbents, GapKind.LOCAL,
                            state.root_bound, state.arithmetic)
        if report.pair is None:
            return _record_trigger(state, iteration, kind, False, "fewer than two incumbents above bound")
        try:
            weights = derive_lambda(report.pair)
        except DegenerateInputError:
            return _record_trigger(state, iteration, kind, False, "degenerate pair")
        outcome = solve_weighted_sum(state.inst, tuple(weights), state.cache, settings)
        if outcome.status != ScalarStatus.NEW:
            if outcome.status == ScalarStatus.CACHE_HIT:
                state.stats.cache_hits += 1
            return _record_trigger(state, iteration, kind, False, outcome.status.value)
        state.stats.ips += 1
        state.stats.ws_triggers += 1
        state.insert(outcome.solution, confirmed_by="ws")
        cut = Cut(Trigger.WS, outcome.value, weights=weights.key)
        state.cuts.append(cut)
        state.stats.cuts.append(cut)
        return _record_trigger(state, iteration, kind, True, f"lambda {weights.key}", outcome.solution.image)

    box = _largest_open_box(state)
    if box is None:
        return _record_trigger(state, iteration, kind, False, "no open box")
    params = awt_params(*box)
    outcome = solve_awt(state.inst, params, state.cache, settings)
    if outcome.status != ScalarStatus.NEW:
        state.stats.cache_hits += 1
        return _record_trigger(state, iteration, kind, False, outcome.status.value)
    state.stats.ips += 1
    state.stats.awt_triggers += 1
    state.insert(outcome.solution, confirmed_by="awt")
    cut = Cut(Trigger.AWT, outcome.value, params=params)
    state.stats.cuts.append(cut)
    if state.strategy.awt_cut == AwtCut.INTEGRATE:
        state.cuts.append(cut)
    return _record_trigger(state, iteration, kind, True, f"box {box}", outcome.solution.image)


# ---------------------------------------------------------------------------
# driver

def _budget_exhausted(state: SearchState, started: float) -> bool:
    config = state.config
    if config.budget_nodes is not None and state.stats.nodes >= config.budget_nodes:
        return True
    if config.budget_seconds is not None and time.perf_counter() - started >= config.budget_seconds:
        return True
    return False


def solve(inst: Instance, strategy: Strategy, seed: Optional[int] = None,
          config: SolverConfig = SolverConfig()) -> SolveResult:
    """Minimal complete set of inst (min-sense images, sorted by z1)"""
    started = time.perf_counter()
    state = SearchState(inst, strategy, config)
    stats = state.stats
    label = strategy.label or strategy.node_order.value
    logger.info(f"Solving n={inst.n} class={inst.class_tag} with {label} (seed {seed})")

    if strategy.scalarization != Scalarization.NONE:
        if inst.class_tag.kind == ClassKind.GENERIC:
            logger.warning("No schedule table for generic instances, using the knapsack table")
        probe = ip_solve([0] * inst.n, inst, settings=config.lp_settings)
        if probe is None:
            stats.wall_time = time.perf_counter() - started
            logger.info("Instance has no feasible 0/1 point")
            return SolveResult([], stats, SolveStatus.INFEASIBLE)

    open_set = OpenSet(strategy)
    open_set.push(Node(state.new_id()))
    status = SolveStatus.OPTIMAL
    while open_set:
        if _budget_exhausted(state, started):
            logger.warning(f"Budget exhausted after {stats.nodes} nodes, result incomplete")
            status = SolveStatus.INCOMPLETE
            break
        stats.iterations += 1
        node = select_node(open_set)
        kind = schedule_trigger(stats.iterations, strategy, inst)
        if kind is not None:
            trigger_scalarization(kind, state, node, stats.iterations)
        outcome = explore(node, state)
        if not outcome.fathomed:
            child0, child1 = branch(node, outcome.var, state)
            open_set.push(child1)
            open_set.push(child0)

    if status == SolveStatus.OPTIMAL and len(state.incumbents) == 0:
        status = SolveStatus.INFEASIBLE
    stats.wall_time = time.perf_counter() - started
    frontier = [(e.point, e.solution) for e in state.incumbents]
    logger.info(f"{label}: {len(frontier)} points, {stats.nodes} nodes, {stats.ips} IPs, "
                f"{stats.wall_time:.3f}s ({status.value})")
    return SolveResult(frontier, stats, status)
