#!/usr/bin/env python3
"""
mobb command line
  mobb generate  --class knapsack --n 15 --m 1 --count 20 --seed 1 --out DIR
  mobb solve     FILE --version M2.1.1.2 [--verify] [--format text|csv|jsonl]
  mobb bench     --class knapsack --n 15,20 --versions BB,BS1 --count 20 --out DIR
  mobb verify    FILE|DIR --versions all
"""

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple

import pandas as pd

from .bench import aggregate, plot_sizes, rows_frame, run_versions, save_summary, write_csv
from .config import SolverConfig, load_config, setup_logging
from .errors import MobbError, OracleGuardError, ParameterError
from .model import (ClassKind, Instance, Point2, gen_assignment, gen_facility_location, gen_knapsack,
                    read_instance, write_instance)
from .oracle import brute_force_frontier
from .search import SolveResult, solve
from .versions import VERSION_LABELS, parse_versions, strategy_for

logger = logging.getLogger("mobb-cli")

CLASS_CHOICES = [k.value for k in ClassKind if k != ClassKind.GENERIC]


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in str(text).split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


# ---------------------------------------------------------------------------
# generate

def size_label(kind: str, n=None, m=None, l=None, q=None) -> str:
    if kind == ClassKind.KNAPSACK.value:
        return f"n{n}_m{m}"
    if kind == ClassKind.ASSIGNMENT.value:
        return f"l{l}"
    return f"l{l}_q{q}"


def generate_instance(kind: str, seed: int, n=None, m=None, l=None, q=None) -> Instance:
    if kind == ClassKind.KNAPSACK.value:
        return gen_knapsack(n, m, seed)
    if kind == ClassKind.ASSIGNMENT.value:
        return gen_assignment(l, seed)
    if kind == ClassKind.FACILITY_LOCATION.value:
        return gen_facility_location(l, q, seed)
    raise ParameterError(f"unknown class {kind!r}; expected one of {', '.join(CLASS_CHOICES)}")


def cmd_generate(kind: str, count: int, seed: int, out, **size) -> List[Path]:
    """Write `count` instances and a manifest with per-file seeds"""
    out = Path(out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise MobbError(f"cannot create output directory {out}: {e}") from e
    label = size_label(kind, **size)
    files, entries = [], []
    for k in range(count):
        path = out / f"{kind}_{label}_{k}.boilp"
        write_instance(generate_instance(kind, seed + k, **size), path)
        files.append(path)
        entries.append({"file": path.name, "seed": seed + k})
    manifest = {"class": kind, "size": size, "seed": seed, "count": count, "files": entries}
    with open(out / "manifest.json", "w") as f:
        json.dump(manifest, f, indent=2)
    logger.info(f"Generated {count} {kind} instances in {out}")
    return files


# ---------------------------------------------------------------------------
# verify

@dataclass
class VerifyOutcome:
    name: str
    mismatches: List[Tuple[str, List[Point2], List[Point2]]] = field(default_factory=list)
    skipped: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.skipped is None and not self.mismatches

    def line(self) -> str:
        if self.skipped:
            return f"{self.name}: skipped ({self.skipped})"
        if self.passed:
            return f"{self.name}: pass"
        label, expected, got = self.mismatches[0]
        return f"{self.name}: fail {label}: oracle {expected} vs solver {got}"


def verify_instance(inst: Instance, labels: Sequence[str], config: SolverConfig = SolverConfig(),
                    name: str = "instance", solver: Callable[..., SolveResult] = solve) -> VerifyOutcome:
    """Compare every version's frontier point set with the oracle"""
    outcome = VerifyOutcome(name)
    try:
        expected = brute_force_frontier(inst).frontier
    except OracleGuardError as e:
        outcome.skipped = str(e)
        return outcome
    for label in labels:
        result = solver(inst, strategy_for(label), inst.seed, config)
        got = sorted(result.points)
        if got != expected:
            outcome.mismatches.append((label, expected, got))
    return outcome


def _instance_paths(target) -> List[Path]:
    target = Path(target)
    if target.is_dir():
        return sorted(target.glob("*.boilp"))
    return [target]


def cmd_verify(target, labels: Sequence[str], config: SolverConfig) -> List[VerifyOutcome]:
    outcomes = []
    for path in _instance_paths(target):
        outcome = verify_instance(read_instance(path), labels, config, path.name)
        print(outcome.line())
        outcomes.append(outcome)
    failed = sum(1 for o in outcomes if o.mismatches)
    skipped = sum(1 for o in outcomes if o.skipped)
    print(f"{len(outcomes)} instances: {len(outcomes) - failed - skipped} pass, {failed} fail, {skipped} skipped")
    return outcomes


# ---------------------------------------------------------------------------
# solve

def format_report(inst: Instance, result: SolveResult, fmt: str = "text",
                  oracle_match: Optional[bool] = None) -> str:
    """Frontier in the instance's own sense plus run statistics"""
    stats = result.stats
    points = [(inst.to_original(p), s) for p, s in result.frontier]
    if inst.sense.value == "max":
        points.reverse()
    lines = []
    if fmt == "csv":
        lines.append("z1,z2,assignment")
        lines += [f"{p.z1},{p.z2},{''.join(map(str, s.assignment))}" for p, s in points]
    elif fmt == "jsonl":
        lines += [json.dumps({"z1": int(p.z1), "z2": int(p.z2), "assignment": list(s.assignment)})
                  for p, s in points]
        summary = {"status": result.status.value, **stats.summary()}
        if oracle_match is not None:
            summary["oracle"] = "match" if oracle_match else "mismatch"
        lines.append(json.dumps(summary))
    else:
        lines.append(f"status: {result.status.value}")
        lines.append(f"frontier ({len(points)} points, {inst.sense.value} sense):")
        lines += [f"  {p.z1} {p.z2}  x={''.join(map(str, s.assignment))}" for p, s in points]
        lines.append(f"nodes: {stats.nodes}")
        lines.append(f"solved IPs: {stats.ips}")
        lines.append(f"time (s): {stats.wall_time:.4f}")
        if oracle_match is not None:
            lines.append(f"oracle: {'match' if oracle_match else 'mismatch'}")
    return "\n".join(lines)


def write_events(events: Sequence[dict], path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for event in events:
            f.write(json.dumps(event) + "\n")


def cmd_solve(path, label: str, config: SolverConfig, fmt: str = "text", verify: bool = False,
              events: Optional[str] = None) -> int:
    inst = read_instance(path)
    strategy = strategy_for(label)
    result = solve(inst, strategy, inst.seed, config)
    match = None
    if verify:
        match = sorted(result.points) == brute_force_frontier(inst).frontier
    if events:
        write_events(result.stats.events, events)
    print(format_report(inst, result, fmt, match))
    return 0 if match is not False else 1


# ---------------------------------------------------------------------------
# bench

def bench_sizes(kind: str, args) -> List[dict]:
    if kind == ClassKind.KNAPSACK.value:
        return [{"n": n, "m": args.m} for n in args.n]
    if kind == ClassKind.ASSIGNMENT.value:
        return [{"l": l} for l in args.l]
    qs = args.q if len(args.q) == len(args.l) else args.q * len(args.l)
    return [{"l": l, "q": q} for l, q in zip(args.l, qs)]


def cmd_bench(kind: str, sizes: Sequence[dict], labels: Sequence[str], count: int, seed: int, out,
              config: SolverConfig, jobs: int = 1, plot: bool = False) -> pd.DataFrame:
    """One CSV per size; returns the per-size summary table"""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    summary_rows, report = [], {"class": kind, "count": count, "seed": seed, "sizes": []}
    for size in sizes:
        label = size_label(kind, **size)
        files = cmd_generate(kind, count, seed, out / "instances" / label, **size)
        instances = [(p.name, read_instance(p)) for p in files]
        logger.info(f"Benchmarking {kind} {label}: {len(labels)} versions x {count} instances")
        records = run_versions(instances, labels, config, jobs)
        rows = aggregate(records, labels) if len(records) else []
        write_csv(rows, out / f"{kind}_{label}.csv", records if len(records) else None)
        n = instances[0][1].n if instances else None
        for row in rows:
            summary_rows.append({"version": row.version, "size": n, "nodes": row.nodes,
                                 "time (s)": row.time_s, "solved IPs": row.ips})
        report["sizes"].append({"size": size, "n": n,
                                "rows": rows_frame(rows).to_dict(orient="records")})
    summary = pd.DataFrame(summary_rows, columns=["version", "size", "nodes", "time (s)", "solved IPs"])
    save_summary(report, out / f"{kind}_summary.json")
    if plot and not summary.empty:
        plot_sizes(summary, out, kind)
    return summary


# ---------------------------------------------------------------------------
# entry point

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mobb", description="Bi-objective 0-1 branch and bound")
    parser.add_argument("--config", default="config.json", help="Path to config.json")
    parser.add_argument("--log-level", default=None, help="Override monitoring.log_level")
    sub = parser.add_subparsers(dest="command", required=True)

    def solver_flags(p):
        mode = p.add_mutually_exclusive_group()
        mode.add_argument("--exact", dest="arithmetic", action="store_const", const="exact")
        mode.add_argument("--float", dest="arithmetic", action="store_const", const="float")
        p.add_argument("--budget-nodes", type=int, default=None)
        p.add_argument("--budget-seconds", type=float, default=None)

    def size_flags(p):
        p.add_argument("--class", dest="kind", required=True, choices=CLASS_CHOICES)
        p.add_argument("--n", type=_int_list, default=[15], help="knapsack variable counts")
        p.add_argument("--m", type=int, default=1, help="knapsack constraint count")
        p.add_argument("--l", type=_int_list, default=[4], help="assignment size / customers")
        p.add_argument("--q", type=_int_list, default=[2], help="facility count")
        p.add_argument("--count", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", required=True)

    gen = sub.add_parser("generate", help="Write random instances")
    size_flags(gen)

    sol = sub.add_parser("solve", help="Solve one instance")
    sol.add_argument("instance")
    sol.add_argument("--version", dest="label", default="BB", help=f"one of {', '.join(VERSION_LABELS)}")
    sol.add_argument("--format", dest="fmt", choices=["text", "csv", "jsonl"], default="text")
    sol.add_argument("--verify", action="store_true", help="Compare with the brute-force oracle")
    sol.add_argument("--events", default=None, help="Write the JSON-lines event log here")
    solver_flags(sol)

    ben = sub.add_parser("bench", help="Run versions over generated instance sets")
    size_flags(ben)
    ben.add_argument("--versions", default="BB,BS1,BS2,WS")
    ben.add_argument("--jobs", type=int, default=None)
    ben.add_argument("--plot", action="store_true", default=None)
    solver_flags(ben)

    ver = sub.add_parser("verify", help="Check versions against the oracle")
    ver.add_argument("target", help="Instance file or directory of .boilp files")
    ver.add_argument("--versions", default="all")
    solver_flags(ver)
    return parser


def solver_config(config: dict, args) -> SolverConfig:
    base = SolverConfig.from_dict(config)
    overrides = {}
    if getattr(args, "arithmetic", None):
        overrides["exact"] = args.arithmetic == "exact"
    if getattr(args, "budget_nodes", None) is not None:
        overrides["budget_nodes"] = args.budget_nodes
    if getattr(args, "budget_seconds", None) is not None:
        overrides["budget_seconds"] = args.budget_seconds
    return replace(base, **overrides)


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
        monitoring = config["monitoring"]
        setup_logging(args.log_level or monitoring["log_level"], monitoring["log_file"])
        bench_cfg = config["bench"]
        if args.command == "generate":
            count = args.count if args.count is not None else bench_cfg["count"]
            seed = args.seed if args.seed is not None else bench_cfg["seed"]
            size = bench_sizes(args.kind, args)[0]
            files = cmd_generate(args.kind, count, seed, args.out, **size)
            print(f"{len(files)} instances written to {args.out}")
            return 0
        if args.command == "solve":
            events = args.events or monitoring.get("event_log")
            return cmd_solve(args.instance, args.label, solver_config(config, args), args.fmt,
                             args.verify, events)
        if args.command == "bench":
            labels = parse_versions(args.versions)
            summary = cmd_bench(
                args.kind, bench_sizes(args.kind, args), labels,
                args.count if args.count is not None else bench_cfg["count"],
                args.seed if args.seed is not None else bench_cfg["seed"],
                args.out, solver_config(config, args),
                args.jobs if args.jobs is not None else bench_cfg["jobs"],
                args.plot if args.plot is not None else bench_cfg["plot"])
            print(summary.to_string(index=False))
            return 0
        if args.command == "verify":
            outcomes = cmd_verify(args.target, parse_versions(args.versions), solver_config(config, args))
            return 1 if any(o.mismatches for o in outcomes) else 0
    except MobbError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        logger.error(f"I/O failure: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
