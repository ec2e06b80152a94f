"""
mobb - bi-objective 0-1 branch and bound
Hypervolume-gap node selection with weighted sum and augmented weighted
Tchebycheff IP scalarizations, instance generators, an exhaustive oracle and
a benchmark harness.
"""

__version__ = "0.1.0"
