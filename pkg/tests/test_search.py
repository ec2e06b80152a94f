#!/usr/bin/env python3
"""
Branch and bound tests: selection, exploration, branching, schedules and
complete solves checked against the enumeration oracle
"""

from unittest.mock import patch

import pytest

from mobb.config import SolverConfig
from mobb.errors import BranchingError, ParameterError
from mobb.model import Constraint, Instance, Point2, Solution, gen_assignment, gen_facility_location, gen_knapsack
from mobb.oracle import brute_force_frontier
from mobb.relax import ExtremeSupport
from mobb.scalarize import awt_norm
from mobb.search import (FathomReason, Node, NodeOrder, OpenSet, SearchState, SolveStatus, Strategy,
                         Trigger, branch, explore, most_fractional, schedule_trigger, select_node, solve,
                         trigger_scalarization, ws_phases)
from mobb.versions import VERSION_LABELS, parse_versions, strategy_for


def pick_one(c1, c2):
    n = len(c1)
    return Instance(n, (tuple(c1), tuple(c2)), (Constraint((1,) * n, "eq", 1),))


def state_for(inst, label="BB", config=SolverConfig()):
    return SearchState(inst, strategy_for(label), config)


class TestSelection:
    def test_largest_gap_first(self):
        open_set = OpenSet(strategy_for("BS1"))
        open_set.push(Node(0, score=5.3))
        open_set.push(Node(1, score=8.5))
        assert select_node(open_set).id == 1

    def test_ties_go_to_the_smaller_id(self):
        open_set = OpenSet(strategy_for("BS2"))
        open_set.push(Node(3, score=2))
        open_set.push(Node(2, score=2))
        assert select_node(open_set).id == 2

    def test_depth_first_is_last_in(self):
        open_set = OpenSet(strategy_for("BB"))
        for node_id in range(3):
            open_set.push(Node(node_id, score=10 - node_id))
        assert [select_node(open_set).id for _ in range(3)] == [2, 1, 0]


def test_most_fractional_prefers_smallest_index():
    assert most_fractional(ExtremeSupport((), (), (0, 3, 3, 1))) == 1
    assert most_fractional(ExtremeSupport((), (), (0, 0, 5))) == 2
    assert most_fractional(ExtremeSupport((), (), (0, 1, 0))) == 1
    assert most_fractional(ExtremeSupport((), (), (0, 0, 0))) is None


class TestBranch:
    def test_children(self):
        state = state_for(gen_knapsack(4, 1, seed=1))
        state.next_id = 1
        node = Node(0, fixed0=frozenset({0}))
        child0, child1 = branch(node, 2, state)
        assert (child0.fixed0, child0.fixed1) == ({0, 2}, set())
        assert (child1.fixed0, child1.fixed1) == ({0}, {2})
        assert child0.depth == child1.depth == 1
        assert (child0.id, child1.id) == (1, 2)
        assert child0.parent == 0

    def test_fixed_variable(self):
        state = state_for(gen_knapsack(4, 1, seed=1))
        with pytest.raises(BranchingError):
            branch(Node(0, fixed1=frozenset({1})), 1, state)


class TestExplore:
    def test_infeasible_fixings(self, tiny_knapsack):
        state = state_for(tiny_knapsack)
        outcome = explore(Node(0, fixed1=frozenset({0, 1})), state)
        assert outcome.reason == FathomReason.INFEASIBILITY

    def test_all_fixed(self, tiny_knapsack):
        state = state_for(tiny_knapsack)
        outcome = explore(Node(0, fixed0=frozenset({0, 2}), fixed1=frozenset({1})), state)
        assert outcome.reason == FathomReason.OPTIMALITY
        assert state.incumbents.points == [Point2(-2, -2)]

    def test_dominated_bound(self):
        state = state_for(pick_one((0, 2, 4), (4, 1, 0)))
        state.insert(Solution((0, 0, 0), Point2(-1, -1)))
        assert explore(Node(0), state).reason == FathomReason.DOMINANCE

    def test_integral_supports_still_branch(self):
        state = state_for(pick_one((0, 2, 4), (4, 1, 0)))
        outcome = explore(Node(0), state)
        assert not outcome.fathomed
        assert outcome.var == 0
        assert state.incumbents.points == [Point2(0, 4), Point2(2, 1), Point2(4, 0)]
        assert state.root_bound is not None


class TestSchedule:
    def test_awt_every_fiftieth_iteration(self):
        inst = gen_knapsack(50, 1, seed=1)
        assert schedule_trigger(50, strategy_for("M2.1.1.1"), inst) == Trigger.AWT
        assert schedule_trigger(50, strategy_for("M1.1.1"), inst) == Trigger.WS
        assert schedule_trigger(40, strategy_for("M2.1.1.1"), inst) == Trigger.WS

    def test_window_ends(self):
        inst = gen_knapsack(50, 1, seed=1)
        assert schedule_trigger(2510, strategy_for("M1.2.1"), inst) is None
        assert schedule_trigger(2500, strategy_for("M1.2.1"), inst) == Trigger.WS
        assert schedule_trigger(2550, strategy_for("M2.2.1.1"), inst) == Trigger.AWT
        assert schedule_trigger(2450, strategy_for("M2.2.1.1"), inst) == Trigger.WS

    def test_quiet_iterations(self):
        inst = gen_knapsack(10, 1, seed=1)
        for label in VERSION_LABELS:
            assert schedule_trigger(7, strategy_for(label), inst) is None
        assert schedule_trigger(10, strategy_for("BS1"), inst) is None

    def test_knapsack_phases(self):
        inst = gen_knapsack(30, 1, seed=1)
        strategy = strategy_for("M1.3.2")
        assert schedule_trigger(290, strategy, inst) == Trigger.WS
        assert schedule_trigger(320, strategy, inst) is None
        assert schedule_trigger(330, strategy, inst) == Trigger.WS
        assert schedule_trigger(660, strategy, inst) == Trigger.WS
        assert schedule_trigger(690, strategy, inst) is None
        assert schedule_trigger(960, strategy, inst) is None
        assert schedule_trigger(950, strategy_for("M2.3.2.1"), inst) == Trigger.AWT

    def test_assignment_phases(self):
        inst = gen_assignment(3, seed=1)
        strategy = strategy_for("M1.3.1")
        assert schedule_trigger(12, strategy, inst) == Trigger.WS
        assert schedule_trigger(10, strategy, inst) is None
        assert schedule_trigger(27, strategy, inst) == Trigger.WS

    def test_facility_phases(self):
        inst = gen_facility_location(4, 2, seed=1)
        assert [m for _, m in ws_phases(inst, 3)] == [10, 5, 10]
        strategy = strategy_for("M1.3.1")
        assert schedule_trigger(30, strategy, inst) == Trigger.WS
        assert schedule_trigger(55, strategy, inst) is None

    def test_alpha_validation(self):
        with pytest.raises(ParameterError):
            Strategy(NodeOrder.MAX_LHG, alpha=4)


class TestTrigger:
    def test_weighted_sum_from_largest_local_gap(self, gap_polyline, gap_incumbents):
        state = state_for(pick_one((2, 3, 6), (6, 3, 1)), "M1.1.1")
        state.incumbents = gap_incumbents
        node = Node(0, inherited=gap_polyline)
        assert trigger_scalarization(Trigger.WS, state, node, 10)
        assert state.cuts[-1].weights == (1, 1)
        assert state.stats.ips == 1
        assert state.incumbents.find(Point2(3, 3)).confirmed

    def test_duplicate_lambda_is_not_applied(self, gap_polyline, make_incumbents):
        images = [(2, 6), (3, 5), (5, 3), (6, 1)]
        state = state_for(pick_one((2, 3, 6), (6, 3, 1)), "M1.1.1")
        state.incumbents = make_incumbents(images)
        node = Node(0, inherited=gap_polyline)
        trigger_scalarization(Trigger.WS, state, node, 10)
        state.incumbents = make_incumbents(images)
        assert not trigger_scalarization(Trigger.WS, state, node, 20)
        assert state.stats.ips == 1
        assert state.stats.cache_hits == 1

    def test_without_bound_or_confirmed_points(self):
        state = state_for(gen_knapsack(6, 1, seed=2), "M2.1.1.1")
        with patch("mobb.search.solve_awt") as awt, patch("mobb.search.solve_weighted_sum") as ws:
            assert not trigger_scalarization(Trigger.WS, state, Node(0), 10)
            assert not trigger_scalarization(Trigger.AWT, state, Node(0), 50)
            awt.assert_not_called()
            ws.assert_not_called()
        assert state.stats.skipped_triggers == 2

    def test_awt_between_confirmed_points(self):
        state = state_for(pick_one((1, 6, 7), (7, 4, 1)), "M2.1.1.1")
        state.insert(Solution((1, 0, 0), Point2(1, 7)), confirmed_by="ws")
        state.insert(Solution((0, 0, 1), Point2(7, 1)), confirmed_by="ws")
        assert trigger_scalarization(Trigger.AWT, state, Node(0), 50)
        assert state.incumbents.points == [Point2(1, 7), Point2(6, 4), Point2(7, 1)]
        assert state.cuts[-1].kind == Trigger.AWT

    def test_skipped_awt_cut_is_only_recorded(self):
        state = state_for(pick_one((1, 6, 7), (7, 4, 1)), "M2.1.1.2")
        state.insert(Solution((1, 0, 0), Point2(1, 7)), confirmed_by="ws")
        state.insert(Solution((0, 0, 1), Point2(7, 1)), confirmed_by="ws")
        assert trigger_scalarization(Trigger.AWT, state, Node(0), 50)
        assert state.cuts == []
        assert len(state.stats.cuts) == 1


class TestSolve:
    def test_single_feasible_point(self):
        inst = Instance(2, ((1, 2), (2, 1)), (Constraint((1, 0), "eq", 1), Constraint((0, 1), "eq", 0)))
        result = solve(inst, strategy_for("BB"))
        assert result.points == [Point2(1, 2)]
        assert result.stats.nodes == 1
        assert result.status == SolveStatus.OPTIMAL

    def test_infeasible(self):
        inst = Instance(2, ((1, 2), (2, 1)), (Constraint((1, 1), "eq", 3),))
        assert solve(inst, strategy_for("BB")).status == SolveStatus.INFEASIBLE
        result = solve(inst, strategy_for("WS"))
        assert result.status == SolveStatus.INFEASIBLE
        assert result.stats.nodes == 0

    @pytest.mark.parametrize("label", VERSION_LABELS)
    def test_every_version_matches_the_oracle(self, label):
        inst = gen_knapsack(8, 2, seed=5)
        result = solve(inst, strategy_for(label), inst.seed)
        assert result.points == brute_force_frontier(inst).frontier
        assert all(p == s.image for p, s in result.frontier)

    @pytest.mark.parametrize("label", ["BB", "BS1", "M2.1.2.1"])
    def test_knapsack_twelve(self, label):
        inst = gen_knapsack(12, 1, seed=5)
        assert solve(inst, strategy_for(label)).points == brute_force_frontier(inst).frontier

    def test_assignment(self):
        inst = gen_assignment(3, seed=5)
        result = solve(inst, strategy_for("BB"))
        assert result.points == brute_force_frontier(inst).frontier
        assert result.status == SolveStatus.OPTIMAL

    def test_facility_location(self):
        inst = gen_facility_location(3, 2, seed=5)
        assert solve(inst, strategy_for("BS2")).points == brute_force_frontier(inst).frontier

    def test_float_arithmetic(self):
        inst = gen_knapsack(8, 1, seed=7)
        result = solve(inst, strategy_for("M2.3.1.1"), config=SolverConfig(exact=False))
        assert result.points == brute_force_frontier(inst).frontier

    def test_node_budget(self):
        inst = gen_knapsack(10, 1, seed=5)
        result = solve(inst, strategy_for("BB"), config=SolverConfig(budget_nodes=1))
        assert result.status == SolveStatus.INCOMPLETE
        assert result.stats.nodes == 1

    def test_deterministic(self):
        inst = gen_knapsack(10, 2, seed=4)
        first = solve(inst, strategy_for("M2.1.1.1"), inst.seed)
        second = solve(inst, strategy_for("M2.1.1.1"), inst.seed)
        assert first.points == second.points
        strip = lambda stats: {k: v for k, v in stats.summary().items() if k != "time_s"}  # noqa: E731
        assert strip(first.stats) == strip(second.stats)
        assert first.stats.events == second.stats.events

    def test_weighted_sum_with_rejected_warm_starts(self):
        inst = gen_knapsack(10, 2, seed=101)
        result = solve(inst, strategy_for("WS"), inst.seed)
        assert result.points == brute_force_frontier(inst).frontier
        assert result.stats.triggers

    @pytest.mark.parametrize("label", ["BB", "BS1", "WS", "M2.1.1.1"])
    @pytest.mark.parametrize("inst", [gen_knapsack(10, 2, seed=101), gen_assignment(3, seed=2)],
                             ids=["knapsack", "assignment"])
    def test_every_explored_node_is_fathomed_or_branched(self, inst, label):
        stats = solve(inst, strategy_for(label), inst.seed).stats
        assert stats.nodes == sum(stats.fathomed.values()) + stats.branched
        outcomes = [e["outcome"] for e in stats.events if e["event"] == "node"]
        assert len(outcomes) == stats.nodes
        assert outcomes.count("branch") == stats.branched


class TestCutAudit:
    """Every cut recorded before a node is explored is applied to its bound"""

    def explored_bounds(self, inst, label):
        seen = []

        def recording(node, state):
            outcome = explore(node, state)
            if node.bound is not None:
                seen.append((node.bound, len(state.cuts)))
            return outcome

        with patch("mobb.search.explore", side_effect=recording):
            result = solve(inst, strategy_for(label), inst.seed)
        return result, seen

    def test_bounds_respect_earlier_cuts(self):
        applied = 0
        for seed in (8, 9, 10):
            inst = gen_knapsack(12, 1, seed)
            result, seen = self.explored_bounds(inst, "M2.1.1.1")
            assert result.points == brute_force_frontier(inst).frontier
            cuts = result.stats.cuts
            for bound, active in seen:
                for cut in cuts[:active]:
                    applied += 1
                    for v in bound.vertices:
                        if cut.kind == Trigger.WS:
                            l1, l2 = cut.weights
                            assert l1 * v.z1 + l2 * v.z2 >= cut.value
                        else:
                            assert awt_norm(v, cut.params) >= cut.value
        assert applied > 0

    def test_node_events_count_active_cuts(self):
        inst = gen_knapsack(12, 1, seed=8)
        result, seen = self.explored_bounds(inst, "M1.1.1")
        node_events = [e for e in result.stats.events if e["event"] == "node" and e["vertices"]]
        assert [e["cuts"] for e in node_events] == [active for _, active in seen]


def test_version_grid():
    assert len(VERSION_LABELS) == 22
    assert parse_versions("BB, BS1") == ["BB", "BS1"]
    assert parse_versions("all") == VERSION_LABELS
    with pytest.raises(ParameterError):
        parse_versions("BB,M3.1.1")
    strategy = strategy_for("M2.3.2.2")
    assert strategy.node_order == NodeOrder.MAX_THG
    assert strategy.alpha == 3
