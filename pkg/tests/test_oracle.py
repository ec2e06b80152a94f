#!/usr/bin/env python3
"""
Enumeration oracle tests
"""

import pytest

from mobb.errors import OracleGuardError
from mobb.model import ClassTag, Constraint, Instance, Point2, evaluate, gen_assignment, gen_facility_location, gen_knapsack
from mobb.oracle import brute_force_frontier


def as_generic(inst):
    return Instance(inst.n, inst.objectives, inst.constraints, inst.sense, ClassTag(), inst.seed)


def test_three_item_knapsack(tiny_knapsack):
    result = brute_force_frontier(tiny_knapsack)
    assert result.frontier == [Point2(-3, -1), Point2(-2, -2), Point2(-1, -3)]
    for point, x in result.preimages.items():
        assert evaluate(tiny_knapsack, x) == point


def test_no_feasible_point():
    inst = Instance(2, ((1, 2), (2, 1)), (Constraint((1, 1), "eq", 3),))
    assert brute_force_frontier(inst).frontier == []


def test_identical_objectives():
    inst = gen_knapsack(8, 1, seed=3)
    same = Instance(inst.n, (inst.objectives[0],) * 2, inst.constraints, inst.sense)
    assert len(brute_force_frontier(same).frontier) == 1


def test_size_guard():
    with pytest.raises(OracleGuardError):
        brute_force_frontier(Instance(25, ((1,) * 25, (1,) * 25)))
    with pytest.raises(OracleGuardError):
        brute_force_frontier(gen_assignment(9, seed=1))


def test_frontier_is_sorted_and_nondominated():
    frontier = brute_force_frontier(gen_knapsack(14, 2, seed=4)).frontier
    assert all(a.z1 < b.z1 and a.z2 > b.z2 for a, b in zip(frontier, frontier[1:]))


@pytest.mark.parametrize("seed", [1, 2])
def test_permutations_agree_with_full_enumeration(seed):
    inst = gen_assignment(3, seed)
    assert brute_force_frontier(inst).frontier == brute_force_frontier(as_generic(inst)).frontier


@pytest.mark.parametrize("seed", [1, 2])
def test_facility_merge_agrees_with_full_enumeration(seed):
    inst = gen_facility_location(3, 2, seed)
    result = brute_force_frontier(inst)
    assert result.frontier == brute_force_frontier(as_generic(inst)).frontier
    for point, x in result.preimages.items():
        assert evaluate(inst, x) == point
