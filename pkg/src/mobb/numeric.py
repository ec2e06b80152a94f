#!/usr/bin/env python3
"""
Arithmetic modes
Exact mode works on fractions.Fraction with zero tolerance; float mode uses
plain floats and a fixed comparison tolerance. Every comparison in lp, relax,
bounds and scalarize goes through one of these objects.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence, Tuple


@dataclass(frozen=True)
class Arithmetic:
    """Number construction and tolerant comparisons for one arithmetic mode"""

    exact: bool = True
    tolerance: float = 1e-9
    fractional_tolerance: float = 1e-6

    @property
    def eps(self):
        return 0 if self.exact else self.tolerance

    def num(self, value: Any):
        if self.exact:
            return value if isinstance(value, Fraction) else Fraction(value)
        return float(value)

    def is_zero(self, value) -> bool:
        return value == 0 if self.exact else abs(value) <= self.tolerance

    def eq(self, a, b) -> bool:
        return self.is_zero(a - b)

    def lt(self, a, b) -> bool:
        return a < b if self.exact else a < b - self.tolerance

    def le(self, a, b) -> bool:
        return a <= b if self.exact else a <= b + self.tolerance

    def is_integral(self, value) -> bool:
        if self.exact:
            return Fraction(value).denominator == 1
        return abs(value - round(value)) <= self.fractional_tolerance

    def is_binary_vector(self, values: Sequence) -> bool:
        return all(self.is_integral(v) and round(v) in (0, 1) for v in values)

    def fractionality(self, value) -> float:
        """Distance to the nearest integer (0 for integral values)"""
        if self.is_integral(value):
            return 0
        return min(value - math.floor(value), math.ceil(value) - value)


EXACT = Arithmetic(exact=True)
FLOAT = Arithmetic(exact=False)


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), 0)


def to_coprime_integers(values: Sequence) -> Tuple[int, ...]:
    """Scale a rational vector to coprime integers (sign preserved)"""
    fractions = [Fraction(v).limit_denominator() if isinstance(v, float) else Fraction(v)
                 for v in values]
    common = 1
    for f in fractions:
        common = common * f.denominator // math.gcd(common, f.denominator)
    ints = [int(f * common) for f in fractions]
    divisor = 0
    for i in ints:
        divisor = math.gcd(divisor, i)
    if divisor == 0:
        return tuple(ints)
    return tuple(i // divisor for i in ints)
