#!/usr/bin/env python3
"""
Version labels of the benchmark tables
BB, BS1, BS2, WS, M1.α.β and M2.α.β.γ mapped to search strategies.
β picks the node order (1 local gap, 2 total gap); γ picks whether the
Tchebycheff level set is integrated into the lower bound (1) or not (2).
"""

from typing import Dict, List

from .errors import ParameterError
from .search import AwtCut, NodeOrder, Scalarization, Strategy

_BETA = {1: NodeOrder.MAX_LHG, 2: NodeOrder.MAX_THG}
_GAMMA = {1: AwtCut.INTEGRATE, 2: AwtCut.SKIP}


def _build_grid() -> Dict[str, Strategy]:
    grid = {
        "BB": Strategy(NodeOrder.DEPTH_FIRST, label="BB"),
        "BS1": Strategy(NodeOrder.MAX_LHG, label="BS1"),
        "BS2": Strategy(NodeOrder.MAX_THG, label="BS2"),
        "WS": Strategy(NodeOrder.DEPTH_FIRST, Scalarization.WS_ONLY, 1, label="WS"),
    }
    for alpha in (1, 2, 3):
        for beta in (1, 2):
            label = f"M1.{alpha}.{beta}"
            grid[label] = Strategy(_BETA[beta], Scalarization.WS_ONLY, alpha, label=label)
    for alpha in (1, 2, 3):
        for beta in (1, 2):
            for gamma in (1, 2):
                label = f"M2.{alpha}.{beta}.{gamma}"
                grid[label] = Strategy(_BETA[beta], Scalarization.WS_PLUS_AWT, alpha, _GAMMA[gamma], label)
    return grid


VERSIONS: Dict[str, Strategy] = _build_grid()
VERSION_LABELS: List[str] = list(VERSIONS)


def strategy_for(label: str) -> Strategy:
    try:
        return VERSIONS[label]
    except KeyError:
        raise ParameterError(f"unknown version {label!r}; known versions: {', '.join(VERSION_LABELS)}") from None


def parse_versions(text: str) -> List[str]:
    """Comma-separated labels, 'all' for the whole grid"""
    if text.strip().lower() == "all":
        return list(VERSION_LABELS)
    labels = [part.strip() for part in text.split(",") if part.strip()]
    for label in labels:
        strategy_for(label)
    return labels
