#!/usr/bin/env python3
"""
Exhaustive frontier oracle
Independent of the branch and bound: full enumeration for small generic and
knapsack instances, permutations for assignment, open facility sets with an
exact per-customer merge for facility location.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .errors import OracleGuardError
from .model import ClassKind, Instance, Point2, evaluate, is_feasible, nondominated_filter

logger = logging.getLogger(__name__)

MAX_ENUMERATED_VARIABLES = 24
MAX_ASSIGNMENT_SIZE = 8
MAX_FACILITIES = 16
CHUNK = 1 << 16


@dataclass
class OracleResult:
    frontier: List[Point2]
    preimages: Dict[Point2, Tuple[int, ...]] = field(default_factory=dict)
    count: int = 0


def _filter(images: Dict[Tuple[int, int], object]) -> List[Tuple[int, int]]:
    """Nondominated keys of an image -> preimage map, sorted by z1"""
    return [p.as_tuple() for p in nondominated_filter(Point2(*z) for z in images)]


def _enumerate_vectors(inst: Instance) -> OracleResult:
    n = inst.n
    if n > MAX_ENUMERATED_VARIABLES:
        raise OracleGuardError(f"n={n} exceeds the enumeration guard of {MAX_ENUMERATED_VARIABLES}")
    c = np.array(inst.min_objectives, dtype=np.int64)
    rows = [r for r in inst.constraints]
    a = np.array([r.coefficients for r in rows], dtype=np.int64).reshape(len(rows), n)
    rhs = np.array([r.rhs for r in rows], dtype=np.int64)
    is_eq = np.array([r.relation == "eq" for r in rows], dtype=bool)
    shifts = np.arange(n, dtype=np.int64)

    best: Dict[Tuple[int, int], int] = {}
    total = 1 << n
    for start in range(0, total, CHUNK):
        idx = np.arange(start, min(start + CHUNK, total), dtype=np.int64)
        x = (idx[:, None] >> shifts) & 1
        if len(rows):
            lhs = x @ a.T
            ok = np.where(is_eq, lhs == rhs, lhs <= rhs).all(axis=1)
            idx, x = idx[ok], x[ok]
        z = x @ c.T
        for code, (z1, z2) in zip(idx.tolist(), z.tolist()):
            best.setdefault((z1, z2), code)
    frontier = _filter(best)
    preimages = {Point2(*z): tuple((best[z] >> j) & 1 for j in range(n)) for z in frontier}
    return OracleResult([Point2(*z) for z in frontier], preimages, total)


def _enumerate_assignments(inst: Instance) -> OracleResult:
    (l,) = inst.class_tag.params
    if l > MAX_ASSIGNMENT_SIZE:
        raise OracleGuardError(f"assignment l={l} exceeds the permutation guard of {MAX_ASSIGNMENT_SIZE}")
    best: Dict[Tuple[int, int], Tuple[int, ...]] = {}
    count = 0
    for perm in itertools.permutations(range(l)):
        x = [0] * inst.n
        for i, j in enumerate(perm):
            x[i * l + j] = 1
        count += 1
        if not is_feasible(inst, x):
            continue
        p = evaluate(inst, x)
        best.setdefault((p.z1, p.z2), tuple(x))
    frontier = _filter(best)
    return OracleResult([Point2(*z) for z in frontier], {Point2(*z): best[z] for z in frontier}, count)


def _merge(front: Dict[Tuple[int, int], Tuple], options: Sequence[Tuple[int, int, int]]
           ) -> Dict[Tuple[int, int], Tuple]:
    """Nondominated part of the Minkowski sum of a front and one customer's options"""
    combined: Dict[Tuple[int, int], Tuple] = {}
    for (z1, z2), choice in front.items():
        for j, d1, d2 in options:
            combined.setdefault((z1 + d1, z2 + d2), choice + (j,))
    return {z: combined[z] for z in _filter(combined)}


def _enumerate_facilities(inst: Instance) -> OracleResult:
    l, q = inst.class_tag.params
    if q > MAX_FACILITIES:
        raise OracleGuardError(f"q={q} exceeds the facility guard of {MAX_FACILITIES}")
    c1, c2 = inst.min_objectives
    best: Dict[Tuple[int, int], Tuple[int, ...]] = {}
    count = 0
    for size in range(1, q + 1):
        for open_set in itertools.combinations(range(q), size):
            count += 1
            fixed = (sum(c1[l * q + j] for j in open_set), sum(c2[l * q + j] for j in open_set))
            front: Dict[Tuple[int, int], Tuple] = {fixed: ()}
            for i in range(l):
                options = [(j, c1[i * q + j], c2[i * q + j]) for j in open_set]
                front = _merge(front, options)
            for z, choice in front.items():
                if z in best:
                    continue
                x = [0] * inst.n
                for j in open_set:
                    x[l * q + j] = 1
                for i, j in enumerate(choice):
                    x[i * q + j] = 1
                best[z] = tuple(x)
    frontier = _filter(best)
    return OracleResult([Point2(*z) for z in frontier], {Point2(*z): best[z] for z in frontier}, count)


def brute_force_frontier(inst: Instance) -> OracleResult:
    """Exact nondominated set (min-sense images) with one preimage per point"""
    kind = inst.class_tag.kind
    if kind == ClassKind.ASSIGNMENT:
        result = _enumerate_assignments(inst)
    elif kind == ClassKind.FACILITY_LOCATION:
        result = _enumerate_facilities(inst)
    else:
        result = _enumerate_vectors(inst)
    logger.debug(f"Oracle: {len(result.frontier)} nondominated points from {result.count} candidates")
    return result
