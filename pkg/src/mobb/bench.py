#!/usr/bin/env python3
"""
Benchmark harness
Runs version labels over seed-pinned instance sets and aggregates the
table columns (mean nodes, time and solved IPs) with pandas. Plots are
optional static images.
"""

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .config import SolverConfig
from .model import Instance, parse, serialize
from .search import SolveStatus, solve
from .versions import VERSION_LABELS, strategy_for

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["version", "nodes", "time (s)", "solved IPs"]


@dataclass(frozen=True)
class BenchRow:
    version: str
    nodes: float
    time_s: float
    ips: float
    excluded: int = 0


def _solve_task(task: Tuple[str, str, str, Dict[str, Any]]) -> Dict[str, Any]:
    """Worker entry point: one (instance, version) pair"""
    name, text, label, config = task
    inst = parse(text)
    result = solve(inst, strategy_for(label), inst.seed, SolverConfig(**config))
    stats = result.stats
    return {"instance": name, "version": label, "nodes": stats.nodes, "time_s": stats.wall_time,
            "ips": stats.ips, "status": result.status.value, "points": len(result.frontier)}


def run_versions(instances: Sequence[Tuple[str, Instance]], versions: Sequence[str],
                 config: SolverConfig = SolverConfig(), jobs: int = 1) -> pd.DataFrame:
    """One record per (instance, version); rows come back in a fixed order"""
    tasks = [(name, serialize(inst), label, asdict(config))
             for label in versions for name, inst in instances]
    if jobs <= 1:
        records = [_solve_task(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_solve_task, tasks))
    for record in records:
        logger.debug(f"{record['version']} on {record['instance']}: {record['nodes']} nodes")
    return pd.DataFrame.from_records(records)


def aggregate(records: pd.DataFrame, versions: Sequence[str]) -> List[BenchRow]:
    """Means over complete runs; incomplete runs are counted but excluded"""
    rows = []
    for label in versions:
        subset = records[records["version"] == label]
        complete = subset[subset["status"] != SolveStatus.INCOMPLETE.value]
        excluded = len(subset) - len(complete)
        if complete.empty:
            rows.append(BenchRow(label, float("nan"), float("nan"), float("nan"), excluded))
            continue
        rows.append(BenchRow(label, float(complete["nodes"].mean()), float(complete["time_s"].mean()),
                             float(complete["ips"].mean()), excluded))
    return rows


def rows_frame(rows: Sequence[BenchRow]) -> pd.DataFrame:
    return pd.DataFrame([[r.version, r.nodes, r.time_s, r.ips] for r in rows], columns=CSV_COLUMNS)


def write_csv(rows: Sequence[BenchRow], path, records: Optional[pd.DataFrame] = None) -> Path:
    """Table CSV; excluded runs are listed in '#' footer lines"""
    path = Path(path)
    rows_frame(rows).to_csv(path, index=False, float_format="%.4f")
    if records is not None:
        incomplete = records[records["status"] == SolveStatus.INCOMPLETE.value]
        if not incomplete.empty:
            with open(path, "a", encoding="utf-8") as f:
                for _, record in incomplete.iterrows():
                    f.write(f"# excluded: {record['version']} on {record['instance']} (budget exceeded)\n")
    logger.info(f"Wrote {path}")
    return path


def plot_sizes(summary: pd.DataFrame, out_dir, prefix: str) -> List[Path]:
    """Nodes and time against problem size, one line per version"""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_dir = Path(out_dir)
    written = []
    for column, ylabel in (("nodes", "explored nodes"), ("time (s)", "time (s)")):
        plt.figure(figsize=(8, 5))
        for label in [v for v in VERSION_LABELS if v in set(summary["version"])]:
            series = summary[summary["version"] == label].sort_values("size")
            plt.plot(series["size"], series[column], marker="o", linewidth=2, label=label)
        plt.xlabel("number of variables")
        plt.ylabel(ylabel)
        plt.grid(True, alpha=0.3)
        plt.legend()
        plt.tight_layout()
        filename = out_dir / f"{prefix}_{'nodes' if column == 'nodes' else 'time'}.png"
        plt.savefig(filename, dpi=150, bbox_inches="tight")
        plt.close()
        written.append(filename)
    return written


def save_summary(summary: Dict[str, Any], filename) -> None:
    """JSON summary with numpy scalars converted to plain numbers"""
    def convert(obj):
        if isinstance(obj, dict):
            return {k: convert(v) for k, v in obj.items()}
        if isinstance(obj, list):
            return [convert(v) for v in obj]
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.floating):
            return None if np.isnan(obj) else float(obj)
        if isinstance(obj, float) and obj != obj:
            return None
        return obj

    with open(filename, "w") as f:
        json.dump(convert(summary), f, indent=2)
