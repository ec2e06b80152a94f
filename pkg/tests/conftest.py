#!/usr/bin/env python3
"""
Shared fixtures: the worked geometry used throughout the bounds and search
tests, plus small hand-made instances.
"""

import os
import sys
from fractions import Fraction as F

import pytest

# Add src directory to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from mobb.bounds import IncumbentList, incumbent_insert  # noqa: E402
from mobb.model import ClassTag, Constraint, Instance, Point2, Sense, Solution  # noqa: E402
from mobb.relax import BoundPolyline  # noqa: E402


def incumbents_from(points):
    """IncumbentList holding the given images (dummy preimages)"""
    U = IncumbentList()
    for k, (z1, z2) in enumerate(points):
        incumbent_insert(U, Solution((k,), Point2(z1, z2)))
    return U


@pytest.fixture
def make_incumbents():
    return incumbents_from


@pytest.fixture
def gap_polyline():
    return BoundPolyline((Point2(F(1, 2), 7), Point2(F(3, 2), F(5, 2)), Point2(F(7, 2), 1), Point2(7, F(1, 2))))


@pytest.fixture
def gap_incumbents():
    return incumbents_from([(2, 6), (3, 5), (5, 3), (6, 1)])


@pytest.fixture
def tiny_knapsack():
    """max (3,2,1)·x and (1,2,3)·x subject to x1 + x2 + x3 <= 1"""
    return Instance(3, ((3, 2, 1), (1, 2, 3)), (Constraint((1, 1, 1), "le", 1),), Sense.MAX,
                    ClassTag(), None)


@pytest.fixture
def free_instance():
    """min-sense, no constraints, conflicting objectives"""
    return Instance(3, ((1, 2, -3), (-2, 1, 2)), (), Sense.MIN)
