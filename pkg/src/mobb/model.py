#!/usr/bin/env python3
"""
Problem representation for bi-objective 0-1 linear programs
Instances, image points, solutions, the three benchmark generators
(knapsack, assignment, facility location) and the BOILP text format.

Internally everything is minimisation: a max-sense instance keeps its
coefficients as written, and `min_objectives` hands out the negated rows.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DimensionError, InstanceError, InstanceParseError, ParameterError

MAGIC = "BOILP"
FORMAT_VERSION = 1


class Sense(str, Enum):
    MIN = "min"
    MAX = "max"


class ClassKind(str, Enum):
    KNAPSACK = "knapsack"
    ASSIGNMENT = "assignment"
    FACILITY_LOCATION = "facility_location"
    GENERIC = "generic"


# number of integer parameters carried by each class tag
_TAG_ARITY = {
    ClassKind.KNAPSACK: 1,           # m
    ClassKind.ASSIGNMENT: 1,         # l
    ClassKind.FACILITY_LOCATION: 2,  # l, q
    ClassKind.GENERIC: 0,
}


@dataclass(frozen=True)
class ClassTag:
    """Benchmark class and its size parameters"""
    kind: ClassKind = ClassKind.GENERIC
    params: Tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.params) != _TAG_ARITY[self.kind]:
            raise InstanceError(
                f"class {self.kind.value} takes {_TAG_ARITY[self.kind]} parameters, got {self.params}")

    def __str__(self) -> str:
        return " ".join([self.kind.value] + [str(p) for p in self.params])


@dataclass(frozen=True, order=True)
class Point2:
    """Image point in objective space"""
    z1: object
    z2: object

    def weakly_dominates(self, other: "Point2") -> bool:
        return self.z1 <= other.z1 and self.z2 <= other.z2

    def negated(self) -> "Point2":
        return Point2(-self.z1, -self.z2)

    def as_tuple(self) -> Tuple:
        return (self.z1, self.z2)

    def __repr__(self) -> str:
        return f"({_fmt(self.z1)}, {_fmt(self.z2)})"


def _fmt(value) -> str:
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if value == int(value):
        return str(int(value))
    return f"{float(value):.4f}"


@dataclass(frozen=True)
class Solution:
    """0/1 assignment with its min-sense image"""
    assignment: Tuple[int, ...]
    image: Point2


@dataclass(frozen=True)
class Constraint:
    """One linear row: coefficients · x (le|eq) rhs"""
    coefficients: Tuple[int, ...]
    relation: str
    rhs: int

    def __post_init__(self):
        if self.relation not in ("le", "eq"):
            raise InstanceError(f"relation must be 'le' or 'eq', got {self.relation!r}")

    def satisfied_by(self, x: Sequence[int]) -> bool:
        lhs = sum(a * v for a, v in zip(self.coefficients, x))
        return lhs <= self.rhs if self.relation == "le" else lhs == self.rhs


@dataclass(frozen=True)
class Instance:
    """Bi-objective 0-1 linear program"""
    n: int
    objectives: Tuple[Tuple[int, ...], Tuple[int, ...]]
    constraints: Tuple[Constraint, ...] = ()
    sense: Sense = Sense.MIN
    class_tag: ClassTag = field(default_factory=ClassTag)
    seed: Optional[int] = None

    def __post_init__(self):
        if self.n < 1:
            raise InstanceError("instance needs at least one variable")
        if len(self.objectives) != 2:
            raise InstanceError("exactly two objectives are supported")
        for k, row in enumerate(self.objectives, 1):
            if len(row) != self.n:
                raise InstanceError(f"objective {k} has {len(row)} coefficients, expected {self.n}")
            if not all(isinstance(c, int) and not isinstance(c, bool) for c in row):
                raise InstanceError(f"objective {k} coefficients must be integers")
        for i, row in enumerate(self.constraints, 1):
            if len(row.coefficients) != self.n:
                raise InstanceError(f"constraint {i} has {len(row.coefficients)} coefficients, expected {self.n}")
            if not all(isinstance(c, int) for c in row.coefficients) or not isinstance(row.rhs, int):
                raise InstanceError(f"constraint {i} must be integral")
        _check_class_structure(self)

    @property
    def min_objectives(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """Objective rows in minimisation orientation"""
        if self.sense == Sense.MAX:
            return tuple(tuple(-c for c in row) for row in self.objectives)
        return self.objectives

    def to_original(self, point: Point2) -> Point2:
        """Map an internal (min-sense) image back to the instance's sense"""
        return point.negated() if self.sense == Sense.MAX else point


def _check_class_structure(inst: Instance) -> None:
    tag = inst.class_tag
    eq_rows = [c for c in inst.constraints if c.relation == "eq"]
    le_rows = [c for c in inst.constraints if c.relation == "le"]
    if tag.kind == ClassKind.KNAPSACK:
        (m,) = tag.params
        if m not in (1, 2, 3) or len(le_rows) != m or eq_rows:
            raise InstanceError(f"knapsack(m={m}) needs exactly m <= rows")
    elif tag.kind == ClassKind.ASSIGNMENT:
        (l,) = tag.params
        if inst.n != l * l or len(eq_rows) != 2 * l or le_rows:
            raise InstanceError(f"assignment(l={l}) needs n=l^2 and 2l equality rows")
        for row in eq_rows:
            if any(c not in (0, 1) for c in row.coefficients) or sum(row.coefficients) != l or row.rhs != 1:
                raise InstanceError("assignment rows must hold l unit coefficients with rhs 1")
    elif tag.kind == ClassKind.FACILITY_LOCATION:
        l, q = tag.params
        if inst.n != (l + 1) * q or len(eq_rows) != l or len(le_rows) != l * q:
            raise InstanceError(f"facility_location(l={l}, q={q}) needs n=(l+1)q, l eq rows and l*q linking rows")


# ---------------------------------------------------------------------------
# evaluation

def evaluate(inst: Instance, x: Sequence[int]) -> Point2:
    """Min-sense image (C1·x, C2·x)"""
    if len(x) != inst.n:
        raise DimensionError(f"vector has length {len(x)}, instance has n={inst.n}")
    c1, c2 = inst.min_objectives
    return Point2(sum(a * v for a, v in zip(c1, x)), sum(a * v for a, v in zip(c2, x)))


def is_feasible(inst: Instance, x: Sequence[int]) -> bool:
    """True iff every <= row and every = row holds"""
    if len(x) != inst.n:
        raise DimensionError(f"vector has length {len(x)}, instance has n={inst.n}")
    return all(row.satisfied_by(x) for row in inst.constraints)


def make_solution(inst: Instance, x: Sequence) -> Solution:
    assignment = tuple(int(round(v)) for v in x)
    return Solution(assignment, evaluate(inst, assignment))


# ---------------------------------------------------------------------------
# generators
#
# Stream: numpy Generator over Philox (64-bit counter-based) keyed by the seed.
# Integers are drawn inclusive of both endpoints, in the order documented per
# generator, so an instance is a pure function of (parameters, seed).

def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def _ints(rng: np.random.Generator, low: int, high: int, size) -> List[int]:
    return [int(v) for v in rng.integers(low, high, size=size, endpoint=True)]


def gen_knapsack(n: int, m: int, seed: int) -> Instance:
    """Max-sense multidimensional knapsack (draw order: c1, c2, w, then v_j, r_j per extra row)"""
    if n < 1:
        raise ParameterError("knapsack needs n >= 1")
    if m not in (1, 2, 3):
        raise ParameterError(f"knapsack dimension m must be 1, 2 or 3, got {m}")
    rng = _rng(seed)
    c1 = _ints(rng, 50, 100, n)
    c2 = _ints(rng, 50, 100, n)
    w = _ints(rng, 5, 15, n)
    rows = [Constraint(tuple(w), "le", 5 * n)]
    for _ in range(m - 1):
        v = _ints(rng, 5, 15, n)
        r = _ints(rng, 5, 15, 1)[0]
        rows.append(Constraint(tuple(v), "le", (r * n) // 2))
    return Instance(n, (tuple(c1), tuple(c2)), tuple(rows), Sense.MAX,
                    ClassTag(ClassKind.KNAPSACK, (m,)), seed)


def gen_assignment(l: int, seed: int) -> Instance:
    """Max-sense l x l assignment, x_ij at index i*l + j (draw order: c1, c2 row-major)"""
    if l < 2:
        raise ParameterError("assignment needs l >= 2")
    rng = _rng(seed)
    n = l * l
    c1 = _ints(rng, 50, 100, n)
    c2 = _ints(rng, 50, 100, n)
    rows = []
    for i in range(l):
        rows.append(Constraint(tuple(1 if k // l == i else 0 for k in range(n)), "eq", 1))
    for j in range(l):
        rows.append(Constraint(tuple(1 if k % l == j else 0 for k in range(n)), "eq", 1))
    return Instance(n, (tuple(c1), tuple(c2)), tuple(rows), Sense.MAX,
                    ClassTag(ClassKind.ASSIGNMENT, (l,)), seed)


def l1_cost(a: Sequence[float], b: Sequence[float]) -> int:
    """L1 distance rounded to the nearest integer (halves round up)"""
    return int(math.floor(abs(a[0] - b[0]) + abs(a[1] - b[1]) + 0.5))


def gen_facility_location(l: int, q: int, seed: int) -> Instance:
    """Min-sense uncapacitated facility location with l customers and q sites

    Variables: x_ij at i*q + j, then y_j at l*q + j. Draw order: customer
    coordinates, facility coordinates, c2 (row-major), f1, f2.
    """
    if l < 1 or q < 1:
        raise ParameterError("facility location needs l >= 1 and q >= 1")
    rng = _rng(seed)
    customers = rng.uniform(0.0, 200.0, size=(l, 2))
    facilities = rng.uniform(0.0, 200.0, size=(q, 2))
    c2 = _ints(rng, 1, 200, l * q)
    f1 = _ints(rng, 200, 400, q)
    f2 = _ints(rng, 200, 400, q)
    c1 = [l1_cost(customers[i], facilities[j]) for i in range(l) for j in range(q)]
    n = (l + 1) * q
    rows = []
    for i in range(l):
        rows.append(Constraint(tuple(1 if i * q <= k < (i + 1) * q else 0 for k in range(n)), "eq", 1))
    for i in range(l):
        for j in range(q):
            coeffs = [0] * n
            coeffs[i * q + j] = 1
            coeffs[l * q + j] = -1
            rows.append(Constraint(tuple(coeffs), "le", 0))
    return Instance(n, (tuple(c1 + f1), tuple(c2 + f2)), tuple(rows), Sense.MIN,
                    ClassTag(ClassKind.FACILITY_LOCATION, (l, q)), seed)


# ---------------------------------------------------------------------------
# BOILP text format

def serialize(inst: Instance) -> str:
    lines = [
        f"{MAGIC} {FORMAT_VERSION}",
        f"sense {inst.sense.value}",
        f"n {inst.n}",
        f"class {inst.class_tag}",
        "obj1 " + " ".join(str(c) for c in inst.objectives[0]),
        "obj2 " + " ".join(str(c) for c in inst.objectives[1]),
    ]
    for row in inst.constraints:
        lines.append(f"{row.relation} " + " ".join(str(c) for c in row.coefficients) + f" {row.rhs}")
    if inst.seed is not None:
        lines.append(f"seed {inst.seed}")
    return "\n".join(lines) + "\n"


def _parse_int(token: str, line: int, field_name: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise InstanceParseError(line, field_name, f"expected an integer, got {token!r}") from None


def _expect(tokens: List[str], keyword: str, line: int) -> None:
    if not tokens or tokens[0] != keyword:
        found = tokens[0] if tokens else "<empty>"
        raise InstanceParseError(line, keyword, f"expected '{keyword}', got {found!r}")


def parse(text: str) -> Instance:
    """Parse a BOILP document; errors name the first offending line and field"""
    raw = [(no, line.split()) for no, line in enumerate(text.splitlines(), 1)]
    lines = [(no, tokens) for no, tokens in raw if tokens and not tokens[0].startswith("#")]
    if not lines:
        raise InstanceParseError(1, "magic", "empty document")

    def header(idx: int, keyword: str) -> Tuple[int, List[str]]:
        if idx >= len(lines):
            last = lines[-1][0] if lines else 1
            raise InstanceParseError(last + 1, keyword, "document ends early")
        no, tokens = lines[idx]
        _expect(tokens, keyword, no)
        return no, tokens

    no, tokens = header(0, MAGIC)
    if len(tokens) != 2 or _parse_int(tokens[1], no, "version") != FORMAT_VERSION:
        raise InstanceParseError(no, "version", f"unsupported version line {' '.join(tokens)!r}")

    no, tokens = header(1, "sense")
    if len(tokens) != 2 or tokens[1] not in ("min", "max"):
        raise InstanceParseError(no, "sense", "sense must be 'min' or 'max'")
    sense = Sense(tokens[1])

    no, tokens = header(2, "n")
    if len(tokens) != 2:
        raise InstanceParseError(no, "n", "expected 'n <int>'")
    n = _parse_int(tokens[1], no, "n")
    if n < 1:
        raise InstanceParseError(no, "n", "n must be positive")

    no, tokens = header(3, "class")
    try:
        kind = ClassKind(tokens[1]) if len(tokens) > 1 else None
    except ValueError:
        kind = None
    if kind is None:
        raise InstanceParseError(no, "class", f"unknown class line {' '.join(tokens)!r}")
    params = tuple(_parse_int(t, no, "class") for t in tokens[2:])
    if len(params) != _TAG_ARITY[kind]:
        raise InstanceParseError(no, "class", f"class {kind.value} takes {_TAG_ARITY[kind]} parameters")
    tag = ClassTag(kind, params)

    objectives = []
    for k, idx in ((1, 4), (2, 5)):
        no, tokens = header(idx, f"obj{k}")
        if len(tokens) - 1 != n:
            raise InstanceParseError(no, f"obj{k}", f"expected {n} coefficients, got {len(tokens) - 1}")
        objectives.append(tuple(_parse_int(t, no, f"obj{k}") for t in tokens[1:]))

    constraints = []
    seed = None
    for no, tokens in lines[6:]:
        if seed is not None:
            raise InstanceParseError(no, tokens[0], "nothing may follow the seed line")
        if tokens[0] in ("le", "eq"):
            if len(tokens) != n + 2:
                raise InstanceParseError(no, tokens[0], f"expected {n} coefficients and a rhs")
            values = [_parse_int(t, no, tokens[0]) for t in tokens[1:]]
            constraints.append(Constraint(tuple(values[:-1]), tokens[0], values[-1]))
        elif tokens[0] == "seed":
            if len(tokens) != 2:
                raise InstanceParseError(no, "seed", "expected 'seed <int>'")
            seed = _parse_int(tokens[1], no, "seed")
        else:
            raise InstanceParseError(no, tokens[0], "expected 'le', 'eq' or 'seed'")

    try:
        return Instance(n, (objectives[0], objectives[1]), tuple(constraints), sense, tag, seed)
    except InstanceError as e:
        raise InstanceParseError(lines[3][0], "class", str(e)) from e


def read_instance(path) -> Instance:
    with open(path, encoding="utf-8") as f:
        return parse(f.read())


def write_instance(inst: Instance, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(serialize(inst))


def nondominated_filter(points: Iterable[Point2]) -> List[Point2]:
    """Sorted mutually nondominated subset (duplicates collapse to one)"""
    result: List[Point2] = []
    for p in sorted(set(points)):
        if not result or p.z2 < result[-1].z2:
            result.append(p)
    return result
