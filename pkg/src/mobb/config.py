#!/usr/bin/env python3
"""
Configuration and logging setup
config.json is merged over the in-code defaults; the SolverConfig dataclass is
the typed view handed to the search driver.
"""

import copy
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional

from .errors import ConfigError
from .lp import LpSettings
from .numeric import Arithmetic

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

DEFAULT_CONFIG: Dict[str, Any] = {
    "solver": {
        "arithmetic": "exact",
        "float_tolerance": 1e-9,
        "fractional_tolerance": 1e-6,
        "budget_nodes": None,
        "budget_seconds": None,
        "awt_spans_boxes": True,
        "lp_degeneracy_limit": 50,
        "lp_max_iterations": 100000,
    },
    "bench": {
        "jobs": 1,
        "plot": False,
        "count": 20,
        "seed": 1,
    },
    "monitoring": {
        "log_level": "INFO",
        "log_file": None,
        "event_log": None,
    },
}


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(config_path: Optional[str] = "config.json") -> Dict[str, Any]:
    """Load configuration, falling back to defaults for anything missing"""
    if config_path is None:
        return copy.deepcopy(DEFAULT_CONFIG)
    path = Path(config_path)
    if not path.exists():
        logger.debug(f"No config at {path}, using defaults")
        return copy.deepcopy(DEFAULT_CONFIG)
    try:
        with open(path) as f:
            loaded = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"Failed to load config {path}: {e}") from e
    if not isinstance(loaded, dict):
        raise ConfigError(f"Config {path} must hold a JSON object")
    return _deep_merge(DEFAULT_CONFIG, loaded)


@dataclass(frozen=True)
class SolverConfig:
    """Solver knobs shared by every search run"""

    exact: bool = True
    float_tolerance: float = 1e-9
    fractional_tolerance: float = 1e-6
    budget_nodes: Optional[int] = None
    budget_seconds: Optional[float] = None
    awt_spans_boxes: bool = True
    lp_degeneracy_limit: int = 50
    lp_max_iterations: int = 100000

    @property
    def arithmetic(self) -> Arithmetic:
        return Arithmetic(exact=self.exact, tolerance=self.float_tolerance,
                          fractional_tolerance=self.fractional_tolerance)

    @property
    def lp_settings(self) -> LpSettings:
        return LpSettings(self.arithmetic, self.lp_degeneracy_limit, self.lp_max_iterations)

    @classmethod
    def from_dict(cls, config: Dict[str, Any]) -> "SolverConfig":
        solver = config.get("solver", {})
        mode = solver.get("arithmetic", "exact")
        if mode not in ("exact", "float"):
            raise ConfigError(f"solver.arithmetic must be 'exact' or 'float', got {mode!r}")
        return cls(
            exact=mode == "exact",
            float_tolerance=float(solver.get("float_tolerance", 1e-9)),
            fractional_tolerance=float(solver.get("fractional_tolerance", 1e-6)),
            budget_nodes=solver.get("budget_nodes"),
            budget_seconds=solver.get("budget_seconds"),
            awt_spans_boxes=bool(solver.get("awt_spans_boxes", True)),
            lp_degeneracy_limit=int(solver.get("lp_degeneracy_limit", 50)),
            lp_max_iterations=int(solver.get("lp_max_iterations", 100000)),
        )


def setup_logging(level: str = "INFO", log_file: Optional[str] = None) -> None:
    """Configure root logging once (stderr plus optional file)"""
    handlers = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.INFO),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )
