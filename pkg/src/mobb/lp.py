#!/usr/bin/env python3
"""
Bounded-variable primal simplex
Dense tableau, every row carries a slack (fixed to zero for equality rows),
phase 1 adds artificials only for rows whose slack starts out of bounds.
Pivot rule is largest reduced cost until a run of degenerate pivots trips the
counter, then Bland's smallest-index rule for the rest of the solve.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import FrozenSet, List, Optional, Sequence, Tuple

from .errors import LpCyclingError, LpError
from .numeric import EXACT, Arithmetic

logger = logging.getLogger(__name__)

INF = math.inf


class LpStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class LpRow:
    """coefficients · x (le|eq|ge) rhs"""
    coefficients: Tuple
    relation: str
    rhs: object

    def __post_init__(self):
        if self.relation not in ("le", "eq", "ge"):
            raise LpError(f"unknown row relation {self.relation!r}")


@dataclass
class LpProblem:
    """min objective · x over rows and finite variable bounds"""
    objective: Sequence
    rows: Sequence[LpRow]
    lower: Sequence
    upper: Sequence

    def __post_init__(self):
        n = len(self.objective)
        if len(self.lower) != n or len(self.upper) != n:
            raise LpError("bound vectors must match the objective length")
        for j, (lo, hi) in enumerate(zip(self.lower, self.upper)):
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise LpError(f"variable {j} needs finite bounds")
            if lo > hi:
                raise LpError(f"variable {j} has lower {lo} > upper {hi}")
        for i, row in enumerate(self.rows):
            if len(row.coefficients) != n:
                raise LpError(f"row {i} has {len(row.coefficients)} coefficients, expected {n}")

    @property
    def n(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class Basis:
    """Basic columns (structural j < n, slack of row i at n + i) and nonbasics at upper"""
    basic: Tuple[int, ...]
    at_upper: FrozenSet[int] = frozenset()


@dataclass
class LpResult:
    status: LpStatus
    value: object = None
    primal: Tuple = ()
    basis: Optional[Basis] = None
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == LpStatus.OPTIMAL


@dataclass
class _Tableau:
    """B^-1 [A | I | art] with the transformed rhs in a separate column"""
    rows: List[List]
    rhs: List
    basic: List[int]
    lower: List
    upper: List
    at_upper: List[bool] = field(default_factory=list)


class BoundedSimplex:
    """One LP solve; construct, call run(), read the result"""

    def __init__(self, problem: LpProblem, arithmetic: Arithmetic = EXACT,
                 degeneracy_limit: int = 50, max_iterations: int = 100000):
        self.problem = problem
        self.ar = arithmetic
        self.degeneracy_limit = degeneracy_limit
        self.max_iterations = max_iterations
        self.n = problem.n
        self.m = len(problem.rows)
        self.iterations = 0
        self.bland = False
        self._degenerate_run = 0
        self._build()

    # -- construction -----------------------------------------------------

    def _build(self) -> None:
        ar, n, m = self.ar, self.n, self.m
        zero, one = ar.num(0), ar.num(1)
        rows, rhs = [], []
        lower = [ar.num(v) for v in self.problem.lower]
        upper = [ar.num(v) for v in self.problem.upper]
        for i, row in enumerate(self.problem.rows):
            sign = -1 if row.relation == "ge" else 1
            coeffs = [ar.num(a) * sign for a in row.coefficients]
            slack = [zero] * m
            slack[i] = one
            rows.append(coeffs + slack)
            rhs.append(ar.num(row.rhs) * sign)
            lower.append(zero)
            upper.append(zero if row.relation == "eq" else INF)
        self.tab = _Tableau(rows, rhs, [n + i for i in range(m)], lower, upper,
                            [False] * (n + m))
        self.cost = [ar.num(c) for c in self.problem.objective] + [zero] * m

    @property
    def width(self) -> int:
        return len(self.tab.lower)

    def _value_of_nonbasic(self, j: int):
        return self.tab.upper[j] if self.tab.at_upper[j] else self.tab.lower[j]

    def _basic_values(self) -> List:
        tab = self.tab
        basic = set(tab.basic)
        nonbasic = [(j, self._value_of_nonbasic(j)) for j in range(self.width)
                    if j not in basic and self._value_of_nonbasic(j) != 0]
        values = []
        for i, row in enumerate(tab.rows):
            v = tab.rhs[i]
            for j, xj in nonbasic:
                a = row[j]
                if a != 0:
                    v -= a * xj
            values.append(v)
        return values

    def _pivot(self, r: int, j: int) -> None:
        tab = self.tab
        prow = tab.rows[r]
        piv = prow[j]
        if piv != 1:
            tab.rows[r] = prow = [a / piv for a in prow]
            tab.rhs[r] = tab.rhs[r] / piv
        for i, row in enumerate(tab.rows):
            if i == r:
                continue
            f = row[j]
            if f != 0:
                tab.rows[i] = [a - f * b if b != 0 else a for a, b in zip(row, prow)]
                tab.rhs[i] = tab.rhs[i] - f * tab.rhs[r]
        tab.basic[r] = j

    def _add_column(self, unit_row: int, lower, upper) -> int:
        zero, one = self.ar.num(0), self.ar.num(1)
        for i, row in enumerate(self.tab.rows):
            row.append(one if i == unit_row else zero)
        self.tab.lower.append(lower)
        self.tab.upper.append(upper)
        self.tab.at_upper.append(False)
        self.cost.append(zero)
        return self.width - 1

    def _within_bounds(self, i: int, value) -> bool:
        j = self.tab.basic[i]
        return self.ar.le(self.tab.lower[j], value) and self.ar.le(value, self.tab.upper[j])

    # -- warm start ---------------------------------------------------------

    def install_basis(self, basis: Basis) -> bool:
        """Pivot the given columns into the slack basis; False if unusable"""
        tab, ar = self.tab, self.ar
        wanted = [j for j in basis.basic if j < self.width]
        if len(wanted) != len(basis.basic):
            return False
        wanted_set = set(wanted)
        for j in wanted:
            if j in tab.basic:
                continue
            candidates = [i for i in range(self.m)
                          if tab.basic[i] not in wanted_set and not ar.is_zero(tab.rows[i][j])]
            if not candidates:
                return False
            if ar.exact:
                r = candidates[0]
            else:
                r = max(candidates, key=lambda i: abs(tab.rows[i][j]))
            self._pivot(r, j)
        basic = set(tab.basic)
        for j in range(self.width):
            tab.at_upper[j] = j in basis.at_upper and j not in basic and math.isfinite(tab.upper[j])
        values = self._basic_values()
        return all(self._within_bounds(i, v) for i, v in enumerate(values))

    # -- phases -------------------------------------------------------------

    def _add_artificials(self) -> List[int]:
        """Replace out-of-bounds basic slacks by artificials; returns their columns"""
        tab, ar = self.tab, self.ar
        artificials = []
        values = self._basic_values()
        for i, v in enumerate(values):
            if self._within_bounds(i, v):
                continue
            j = tab.basic[i]
            if ar.lt(v, tab.lower[j]):
                bound, tab.at_upper[j] = tab.lower[j], False
            else:
                bound, tab.at_upper[j] = tab.upper[j], True
            excess = v - bound
            if excess < 0:
                tab.rows[i] = [-a for a in tab.rows[i]]
                tab.rhs[i] = -tab.rhs[i]
            col = self._add_column(i, ar.num(0), INF)
            tab.basic[i] = col
            artificials.append(col)
        return artificials

    def _reduced_costs(self, cost: List) -> List:
        tab = self.tab
        d = list(cost)
        for i, row in enumerate(tab.rows):
            cb = cost[tab.basic[i]]
            if cb != 0:
                for j, a in enumerate(row):
                    if a != 0:
                        d[j] -= cb * a
        return d

    def _optimize(self, cost: List) -> None:
        tab, ar = self.tab, self.ar
        while True:
            if self.iterations >= self.max_iterations:
                raise LpCyclingError(
                    f"simplex exceeded {self.max_iterations} iterations",
                    {"rows": self.m, "columns": self.width, "bland": self.bland,
                     "basic": list(tab.basic)})
            d = self._reduced_costs(cost)
            basic = set(tab.basic)
            entering, best = None, None
            for j in range(self.width):
                if j in basic or not ar.lt(tab.lower[j], tab.upper[j]):
                    continue
                dj = d[j]
                improving = ar.lt(0, dj) if tab.at_upper[j] else ar.lt(dj, 0)
                if not improving:
                    continue
                if self.bland:
                    entering = j
                    break
                if best is None or abs(dj) > best:
                    entering, best = j, abs(dj)
            if entering is None:
                return
            self.iterations += 1
            self._step(entering)

    def _step(self, j: int) -> None:
        tab, ar = self.tab, self.ar
        direction = -1 if tab.at_upper[j] else 1
        values = self._basic_values()
        zero = ar.num(0)
        # a bound flip of the entering column wins ties against every row
        step = tab.upper[j] - tab.lower[j]
        leave, leave_to_upper = None, False
        for i, row in enumerate(tab.rows):
            rate = row[j] * direction
            if ar.is_zero(rate):
                continue
            b = tab.basic[i]
            if rate > 0:
                limit = (values[i] - tab.lower[b]) / rate
                to_upper = False
            elif math.isfinite(tab.upper[b]):
                limit = (tab.upper[b] - values[i]) / (-rate)
                to_upper = True
            else:
                continue
            limit = max(limit, zero)
            if limit < step or (leave is not None and limit == step and b < tab.basic[leave]):
                step, leave, leave_to_upper = limit, i, to_upper
        if not math.isfinite(step):
            raise LpError("unbounded direction in a bounded LP")
        if ar.is_zero(step):
            self._degenerate_run += 1
            if not self.bland and self._degenerate_run >= self.degeneracy_limit:
                logger.debug(f"Switching to Bland's rule after {self._degenerate_run} degenerate pivots")
                self.bland = True
        else:
            self._degenerate_run = 0
        if leave is None:
            tab.at_upper[j] = not tab.at_upper[j]
            return
        leaving = tab.basic[leave]
        self._pivot(leave, j)
        tab.at_upper[j] = False
        tab.at_upper[leaving] = leave_to_upper

    # -- driver -------------------------------------------------------------

    def run(self, warm: Optional[Basis] = None) -> LpResult:
        ar = self.ar
        warm_ok = False
        if warm is not None:
            warm_ok = self.install_basis(warm)
            if not warm_ok:
                logger.debug("Warm basis rejected, cold start")
                self._build()
        # _build replaces the tableau, so bind it only now
        tab = self.tab
        if not warm_ok:
            artificials = self._add_artificials()
            if artificials:
                phase1 = [ar.num(0)] * self.width
                for col in artificials:
                    phase1[col] = ar.num(1)
                self._optimize(phase1)
                values = self._basic_values()
                infeasibility = sum((values[i] for i, b in enumerate(tab.basic) if b in set(artificials)),
                                    ar.num(0))
                if not ar.is_zero(infeasibility):
                    return LpResult(LpStatus.INFEASIBLE, iterations=self.iterations)
                for col in artificials:
                    tab.upper[col] = ar.num(0)
                    tab.at_upper[col] = False
        self._optimize(self.cost)
        return self._result()

    def _result(self) -> LpResult:
        tab = self.tab
        values = self._basic_values()
        full = [self._value_of_nonbasic(j) for j in range(self.width)]
        for i, b in enumerate(tab.basic):
            full[b] = values[i]
        primal = tuple(full[:self.n])
        value = sum((c * x for c, x in zip(self.cost[:self.n], primal)), self.ar.num(0))
        real = self.n + self.m
        basis = None
        if all(b < real for b in tab.basic):
            basis = Basis(tuple(tab.basic),
                          frozenset(j for j in range(real) if tab.at_upper[j] and j not in set(tab.basic)))
        return LpResult(LpStatus.OPTIMAL, value, primal, basis, self.iterations)


@dataclass(frozen=True)
class LpSettings:
    arithmetic: Arithmetic = EXACT
    degeneracy_limit: int = 50
    max_iterations: int = 100000


DEFAULT_SETTINGS = LpSettings()


def lp_solve(problem: LpProblem, warm: Optional[Basis] = None,
             settings: LpSettings = DEFAULT_SETTINGS) -> LpResult:
    """Solve min c·x over the rows and bounds of `problem`

    Optimal results carry a basic primal solution and its basis (usable as a
    warm start for a later solve over the same rows, appended rows allowed).
    """
    solver = BoundedSimplex(problem, settings.arithmetic, settings.degeneracy_limit,
                            settings.max_iterations)
    return solver.run(warm)
