#!/usr/bin/env python3
"""
End-to-end checks over seeded instance sets
The default run uses a handful of small instances; the full grids are marked
slow (pytest -m slow).
"""

import itertools
import statistics

import pytest

from mobb.model import evaluate, gen_assignment, gen_facility_location, gen_knapsack, is_feasible
from mobb.oracle import brute_force_frontier
from mobb.scalarize import ScalarCache, awt_norm, awt_params, solve_awt
from mobb.search import Trigger, solve
from mobb.versions import VERSION_LABELS, strategy_for


def feasible_images(inst):
    return {evaluate(inst, x) for x in itertools.product((0, 1), repeat=inst.n) if is_feasible(inst, x)}


def assert_all_versions_match(inst):
    expected = brute_force_frontier(inst).frontier
    for label in VERSION_LABELS:
        result = solve(inst, strategy_for(label), inst.seed)
        assert result.points == expected, f"{label} on seed {inst.seed}"


def assert_cuts_hold(inst, label):
    result = solve(inst, strategy_for(label), inst.seed)
    images = feasible_images(inst)
    for cut in result.stats.cuts:
        if cut.kind == Trigger.WS:
            l1, l2 = cut.weights
            assert all(l1 * z.z1 + l2 * z.z2 >= cut.value for z in images)
        else:
            assert all(awt_norm(z, cut.params) >= cut.value for z in images)
    return result


def assert_awt_finds_box_points(inst):
    frontier = brute_force_frontier(inst).frontier
    if len(frontier) < 2:
        return
    boxes = [(frontier[0], frontier[-1])]
    boxes += [(frontier[i], frontier[i + 2]) for i in range(len(frontier) - 2)]
    cache = ScalarCache()
    for a, b in boxes:
        params = awt_params(a, b)
        image = solve_awt(inst, params, cache).solution.image
        assert image in frontier
        assert awt_norm(image, params) == min(awt_norm(p, params) for p in frontier)
        inside = [p for p in frontier if a.z1 < p.z1 < b.z1]
        for p in inside:
            assert awt_norm(p, params) < min(awt_norm(a, params), awt_norm(b, params))
        # points left of a or right of b are unconstrained; only the full box has none
        if inside and (a, b) == boxes[0]:
            assert image in inside


@pytest.mark.parametrize("inst", [
    gen_knapsack(8, 1, seed=1),
    gen_knapsack(8, 3, seed=2),
    gen_knapsack(10, 2, seed=101),
    gen_assignment(3, seed=3),
    gen_facility_location(3, 2, seed=4),
], ids=["knapsack-m1", "knapsack-m3", "knapsack-m2", "assignment", "facility"])
def test_every_version_returns_the_oracle_frontier(inst):
    assert_all_versions_match(inst)


@pytest.mark.parametrize("seed", range(3))
def test_recorded_cuts_never_remove_feasible_images(seed):
    inst = gen_knapsack(10, 1, seed)
    for label in ("M1.1.1", "M2.1.1.1", "M2.3.2.2"):
        assert_cuts_hold(inst, label)


@pytest.mark.parametrize("seed", range(5))
def test_tchebycheff_returns_box_points(seed):
    assert_awt_finds_box_points(gen_knapsack(10, 1, seed))


def test_baseline_solves_no_ips():
    instances = [gen_knapsack(12, 1, seed) for seed in (8, 9, 10)]
    assert all(solve(inst, strategy_for("BB")).stats.ips == 0 for inst in instances)
    assert sum(solve(inst, strategy_for("M1.1.1")).stats.ips for inst in instances) > 0


# ---------------------------------------------------------------------------
# full grids

@pytest.mark.slow
@pytest.mark.parametrize("m", [1, 2, 3])
def test_knapsack_grid(m):
    for seed in range(1, 21):
        assert_all_versions_match(gen_knapsack(15, m, seed))


@pytest.mark.slow
def test_assignment_grid():
    for seed in range(1, 21):
        assert_all_versions_match(gen_assignment(4, seed))


@pytest.mark.slow
def test_facility_grid():
    for seed in range(1, 21):
        assert_all_versions_match(gen_facility_location(6, 2, seed))


@pytest.mark.slow
def test_cut_validity_grid():
    for seed in range(100):
        assert_cuts_hold(gen_knapsack(12, 1 + seed % 3, seed), "M2.1.1.1")


@pytest.mark.slow
def test_tchebycheff_grid():
    for seed in range(50):
        assert_awt_finds_box_points(gen_knapsack(12, 1 + seed % 3, seed))


@pytest.mark.slow
def test_node_reduction_trend():
    nodes = {"BB": [], "BS1": [], "M2.1.1.2": []}
    ips = {"BB": [], "M1.1.1": []}
    for seed in range(1, 21):
        inst = gen_knapsack(30, 1, seed)
        for label in nodes:
            nodes[label].append(solve(inst, strategy_for(label), seed).stats.nodes)
        for label in ips:
            ips[label].append(solve(inst, strategy_for(label), seed).stats.ips)
    bs1 = [a - b for a, b in zip(nodes["BS1"], nodes["BB"])]
    assert statistics.median(bs1) < 0
    ratio = [a / b for a, b in zip(nodes["M2.1.1.2"], nodes["BB"])]
    assert statistics.median(ratio) <= 0.8
    assert statistics.mean(ips["BB"]) == 0
    assert statistics.mean(ips["M1.1.1"]) > 0
