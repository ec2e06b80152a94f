#!/usr/bin/env python3
"""
Exception hierarchy for the solver
Everything raised on purpose derives from MobbError so the CLI can report it cleanly.
"""

from typing import Any, Dict, Optional


class MobbError(Exception):
    """Base class for all solver errors"""


class DimensionError(MobbError):
    """Vector length does not match the instance"""


class ParameterError(MobbError):
    """Generator or strategy parameter outside its domain"""


class InstanceError(MobbError):
    """Instance violates a structural invariant"""


class InstanceParseError(MobbError):
    """Instance document could not be parsed"""

    def __init__(self, line: int, field: str, message: str):
        super().__init__(f"line {line}, field '{field}': {message}")
        self.line = line
        self.field = field


class LpError(MobbError):
    """Malformed LP or unexpected simplex outcome"""


class LpCyclingError(LpError):
    """Iteration guard tripped inside the simplex"""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class InfeasibleProblemError(MobbError):
    """A problem that must be feasible has no feasible 0/1 point"""


class DegenerateInputError(MobbError):
    """Degenerate weight vector or empty scalarization box"""


class BranchingError(MobbError):
    """Branching on a variable that is already fixed"""


class OracleGuardError(MobbError):
    """Instance too large for exhaustive enumeration"""


class ConfigError(MobbError):
    """Configuration file could not be loaded"""
