#!/usr/bin/env python3
"""
Scalarization tests: the IP solver, weighted sums and Tchebycheff problems
"""

import itertools
from fractions import Fraction as F
from unittest.mock import patch

import pytest

from mobb.errors import DegenerateInputError
from mobb.lp import LpRow
from mobb.model import Constraint, Instance, Point2, evaluate, gen_knapsack, is_feasible
from mobb.oracle import brute_force_frontier
from mobb.scalarize import (ScalarCache, ScalarStatus, awt_norm, awt_params, derive_lambda,
                            ip_solve, solve_awt, solve_weighted_sum)


def pick_one(c1, c2):
    """Exactly one of n items is chosen, so the images are the columns"""
    n = len(c1)
    return Instance(n, (tuple(c1), tuple(c2)), (Constraint((1,) * n, "eq", 1),))


class TestIpSolve:
    def test_zero_objective(self):
        inst = gen_knapsack(8, 2, seed=4)
        result = ip_solve((0,) * inst.n, inst)
        assert result.value == 0
        assert is_feasible(inst, result.solution.assignment)

    def test_matches_enumeration(self):
        inst = gen_knapsack(12, 1, seed=3)
        c1 = inst.min_objectives[0]
        best = min(sum(c * x for c, x in zip(c1, v))
                   for v in itertools.product((0, 1), repeat=inst.n) if is_feasible(inst, v))
        result = ip_solve(c1, inst)
        assert result.value == best
        assert evaluate(inst, result.solution.assignment).z1 == best

    def test_contradictory_rows(self):
        inst = Instance(3, ((1, 2, 3), (3, 2, 1)))
        rows = [LpRow((1, 0, 0), "le", 0), LpRow((1, 0, 0), "ge", 1)]
        assert ip_solve((1, 1, 1), inst, rows) is None

    def test_deterministic(self):
        inst = gen_knapsack(10, 2, seed=8)
        objective = tuple(a + b for a, b in zip(*inst.min_objectives))
        assert ip_solve(objective, inst) == ip_solve(objective, inst)


def test_derive_lambda():
    assert tuple(derive_lambda((Point2(2, 6), Point2(3, 5)))) == (1, 1)
    assert tuple(derive_lambda((Point2(1, 7), Point2(7, 1)))) == (1, 1)
    assert tuple(derive_lambda((Point2(6, 1), Point2(2, 6)))) == (5, 4)
    with pytest.raises(DegenerateInputError):
        derive_lambda((Point2(0, 1), Point2(1, 1)))


class TestWeightedSum:
    def test_supported_optimum(self):
        inst = pick_one((2, 3, 6), (6, 3, 1))
        outcome = solve_weighted_sum(inst, (1, 1), ScalarCache())
        assert outcome.status == ScalarStatus.NEW
        assert outcome.value == 6
        assert outcome.solution.image == Point2(3, 3)

    def test_cache_hits_on_normalized_weights(self):
        inst = pick_one((2, 3, 6), (6, 3, 1))
        cache = ScalarCache()
        solve_weighted_sum(inst, (1, 1), cache)
        with patch("mobb.scalarize.ip_solve") as solver:
            assert solve_weighted_sum(inst, (1, 1), cache).status == ScalarStatus.CACHE_HIT
            hit = solve_weighted_sum(inst, (2, 2), cache)
            solver.assert_not_called()
        assert hit.status == ScalarStatus.CACHE_HIT
        assert hit.solution.image == Point2(3, 3)
        assert len(cache) == 1

    def test_non_positive_weight_is_skipped(self):
        inst = pick_one((2, 3, 6), (6, 3, 1))
        assert solve_weighted_sum(inst, (0, 1), ScalarCache()).status == ScalarStatus.SKIPPED

    @pytest.mark.parametrize("weights", [(1, 1), (3, 1), (1, 4)])
    def test_result_is_supported_and_valid(self, weights):
        inst = gen_knapsack(10, 1, seed=6)
        frontier = brute_force_frontier(inst).frontier
        outcome = solve_weighted_sum(inst, weights, ScalarCache())
        assert outcome.solution.image in frontier
        assert all(weights[0] * p.z1 + weights[1] * p.z2 >= outcome.value for p in frontier)


class TestTchebycheff:
    def test_params(self):
        p = awt_params(Point2(1, 7), Point2(7, 1))
        assert p.s == Point2(1, 1)
        assert (p.w1, p.w2, p.tau) == (F(1, 2), F(1, 2), F(1, 288))
        q = awt_params(Point2(0, 2), Point2(1, 0))
        assert q.s == Point2(0, 0)
        assert (q.w1, q.w2) == (F(2, 3), F(1, 3))
        with pytest.raises(DegenerateInputError):
            awt_params(Point2(0, 1), Point2(1, 1))

    def test_finds_the_point_hidden_from_weighted_sums(self):
        inst = pick_one((1, 6, 7), (7, 4, 1))
        params = awt_params(Point2(1, 7), Point2(7, 1))
        outcome = solve_awt(inst, params, ScalarCache())
        assert outcome.solution.image == Point2(6, 4)
        assert outcome.value == F(5, 2) + 8 * params.tau
        assert awt_norm(Point2(1, 7), params) == 3 + 6 * params.tau

    def test_single_point(self):
        inst = Instance(1, ((3,), (4,)), (Constraint((1,), "eq", 1),))
        outcome = solve_awt(inst, awt_params(Point2(0, 9), Point2(9, 0)), ScalarCache())
        assert outcome.solution.image == Point2(3, 4)

    def test_repeated_box_is_cached(self):
        inst = pick_one((1, 6, 7), (7, 4, 1))
        cache = ScalarCache()
        params = awt_params(Point2(1, 7), Point2(7, 1))
        solve_awt(inst, params, cache)
        assert solve_awt(inst, params, cache).status == ScalarStatus.CACHE_HIT

    @pytest.mark.parametrize("seed", [2, 9])
    def test_result_is_efficient(self, seed):
        inst = gen_knapsack(10, 1, seed)
        frontier = brute_force_frontier(inst).frontier
        if len(frontier) < 2:
            pytest.skip("frontier has a single point")
        outcome = solve_awt(inst, awt_params(frontier[0], frontier[-1]), ScalarCache())
        assert outcome.solution.image in frontier
