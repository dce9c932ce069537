"""Command-line front end: ``generate``, ``run``, ``report`` and ``simulate``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import statistics
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path as FsPath

from .graph import Graph, read_graph
from .scenario import (
    DEFAULT_EPSILON_FRACTION,
    gen_disjoint_adversarial,
    gen_random,
    offline_optimum,
    random_instance,
    read_scenario,
    synthetic_grid,
)
from .simulation import SimulationError, simulate, trace_to_jsonl
from .strategies import STRATEGY_NAMES, UnreachableGoal

log = logging.getLogger("coopctp")

CSV_COLUMNS = ["map", "instance", "strategy", "ugv_time_s", "uav_time_s", "l_star_m", "ratio"]
DISPLAY_NAMES = {
    "full_obs": "Full Obs.",
    "ugv_only": "UGV-Only",
    "bidirectional": "Bi-dir.",
    "optimal_partition": "Optimal Partition",
}
MEAN_LABEL = "mean"


class CliError(Exception):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    graphs: tuple[str, ...]
    instances: int = 50
    seed: int = 0
    block_prob: float = 0.2
    v_g: float = 20.0
    v_a: float = 40.0
    strategies: tuple[str, ...] = STRATEGY_NAMES
    out: str | None = None
    jobs: int = 1

    def __post_init__(self):
        if self.instances < 1:
            raise CliError("instance count must be at least 1")
        if not self.strategies:
            raise CliError("at least one strategy is required")
        for name in self.strategies:
            if name not in STRATEGY_NAMES:
                raise CliError(f"unknown strategy {name!r}")
        if not self.graphs:
            raise CliError("at least one --graph is required")


@dataclass(frozen=True)
class ReportRow:
    map: str
    instance: str
    strategy: str
    ugv_time: float
    uav_time: float
    l_star: float
    ratio: float

    def as_csv(self) -> list[str]:
        return [self.map, self.instance, self.strategy, repr(self.ugv_time), repr(self.uav_time),
                repr(self.l_star), repr(self.ratio)]


# --- run -----------------------------------------------------------------------


def _run_instance(task):
    map_id, graph_doc, index, cfg = task
    from .graph import graph_from_dict

    graph = graph_from_dict(graph_doc)
    scenario = random_instance(graph, cfg.block_prob, cfg.seed + index, cfg.v_g, cfg.v_a)
    rows = []
    for name in cfg.strategies:
        res = simulate(graph, scenario, name)
        rows.append(ReportRow(map_id, str(index), name, res.ugv_time, res.uav_time, res.l_star, res.competitive_ratio))
    return rows


def run_experiment(cfg: ExperimentConfig) -> list[ReportRow]:
    """Simulate ``cfg.instances`` random instances per map under each strategy.

    Instance ``i`` is drawn with seed ``cfg.seed + i``. Rows come back sorted by
    map, instance and strategy, with per-strategy mean rows after each map.
    """
    tasks = []
    for gpath in cfg.graphs:
        graph = read_graph(gpath)
        map_id = FsPath(gpath).stem
        doc = graph.to_dict()
        tasks.extend((map_id, doc, i, cfg) for i in range(cfg.instances))
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            batches = list(pool.map(_run_instance, tasks, chunksize=4))
    else:
        batches = [_run_instance(t) for t in tasks]

    order = {name: k for k, name in enumerate(STRATEGY_NAMES)}
    data = sorted(
        (row for batch in batches for row in batch),
        key=lambda r: (r.map, int(r.instance), order[r.strategy]),
    )
    out = []
    for map_id in sorted({r.map for r in data}):
        rows = [r for r in data if r.map == map_id]
        out.extend(rows)
        for name in sorted({r.strategy for r in rows}, key=order.get):
            sel = [r for r in rows if r.strategy == name]
            out.append(ReportRow(
                map_id, MEAN_LABEL, name,
                statistics.fmean(r.ugv_time for r in sel),
                statistics.fmean(r.uav_time for r in sel),
                statistics.fmean(r.l_star for r in sel),
                statistics.fmean(r.ratio for r in sel),
            ))
    return out


def rows_to_csv(rows: list[ReportRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.as_csv())
    return buf.getvalue()


# --- report --------------------------------------------------------------------


def render_report(csv_text: str) -> str:
    """Markdown table: one row per map, mean UGV time per strategy to 3 decimals."""
    reader = csv.DictReader(io.StringIO(csv_text))
    missing = [c for c in ("map", "instance", "strategy", "ugv_time_s") if c not in (reader.fieldnames or [])]
    if missing:
        raise CliError(f"missing columns: {', '.join(missing)}")
    times: dict[str, dict[str, list[float]]] = {}
    for rec in reader:
        if rec["instance"] == MEAN_LABEL:
            continue
        times.setdefault(rec["map"], {}).setdefault(rec["strategy"], []).append(float(rec["ugv_time_s"]))
    if not times:
        raise CliError("no data rows")
    present = [s for s in STRATEGY_NAMES if any(s in per for per in times.values())]
    lines = [
        "| Map | " + " | ".join(DISPLAY_NAMES[s] for s in present) + " |",
        "|---|" + "---:|" * len(present),
    ]
    for map_id in sorted(times):
        cells = []
        for s in present:
            vals = times[map_id].get(s)
            cells.append(f"{statistics.fmean(vals):.3f}" if vals else "-")
        lines.append(f"| {map_id} | " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


# --- generate -------------------------------------------------------------------


def _write(out_dir: FsPath, name: str, text: str) -> FsPath:
    out_dir.mkdir(parents=True, exist_ok=True)
    target = out_dir / name
    target.write_text(text, encoding="utf-8")
    return target


def _summary(graph: Graph, scenario) -> dict:
    return {
        "vertices": len(graph),
        "edges": len(graph.edge_keys()),
        "s": scenario.s,
        "g": scenario.g,
        "uav_start": scenario.uav_start,
        "blockages": len(scenario.blockages),
        "l_star": offline_optimum(graph, scenario),
    }


def cmd_generate(args) -> int:
    out = FsPath(args.out)
    if args.kind == "disjoint":
        lengths = [float(x) for x in args.lengths.split(",") if x.strip()]
        graph, scenario = gen_disjoint_adversarial(lengths, args.segments, args.epsilon, args.vg, args.va)
    elif args.kind == "grid":
        graph = synthetic_grid(args.rows, args.cols, args.spacing, args.jitter, args.delete_prob, args.seed)
        path = _write(out, f"{args.name}.json", graph.to_json())
        print(json.dumps({"graph": str(path), "vertices": len(graph), "edges": len(graph.edge_keys())}))
        return 0
    else:
        if args.graph:
            graph = read_graph(args.graph)
        else:
            graph = synthetic_grid(args.rows, args.cols, args.spacing, args.jitter, args.delete_prob, args.seed)
        if args.start and args.goal:
            scenario = gen_random(graph, args.start, args.goal, args.uav_start or args.start,
                                  args.block_prob, args.seed, args.vg, args.va)
        elif args.start or args.goal:
            raise CliError("--start and --goal must be given together")
        else:
            scenario = random_instance(graph, args.block_prob, args.seed, args.vg, args.va)
    _write(out, "graph.json", graph.to_json())
    _write(out, "scenario.json", scenario.to_json())
    print(json.dumps(_summary(graph, scenario), sort_keys=True))
    return 0


def cmd_run(args) -> int:
    cfg = ExperimentConfig(
        graphs=tuple(args.graph or ()),
        instances=args.instances,
        seed=args.seed,
        block_prob=args.block_prob,
        v_g=args.vg,
        v_a=args.va,
        strategies=tuple(s.strip() for s in args.strategies.split(",") if s.strip()),
        out=args.out,
        jobs=args.jobs,
    )
    text = rows_to_csv(run_experiment(cfg))
    if cfg.out:
        FsPath(cfg.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_report(args) -> int:
    try:
        text = FsPath(args.csv).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {args.csv}: {exc.strerror}") from None
    table = render_report(text)
    if args.out:
        FsPath(args.out).write_text(table, encoding="utf-8")
    else:
        sys.stdout.write(table)
    return 0


def cmd_simulate(args) -> int:
    graph = read_graph(args.graph)
    scenario = read_scenario(args.scenario)
    result = simulate(graph, scenario, args.strategy)
    if args.trace:
        FsPath(args.trace).write_text(trace_to_jsonl(result.trace), encoding="utf-8")
    print(json.dumps(result.summary(), sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coopctp", description="UGV/UAV cooperative path planning under unknown blockages")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write graph.json and scenario.json")
    gen.add_argument("kind", choices=["disjoint", "random", "grid"])
    gen.add_argument("--out", required=True, help="output directory")
    gen.add_argument("--lengths", default="10,12,15", help="disjoint: comma-separated path lengths")
    gen.add_argument("--segments", type=int, default=2, help="disjoint: edges per path")
    gen.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON_FRACTION,
                     help="disjoint: blockage offset from g as a fraction of the final edge")
    gen.add_argument("--graph", help="random: graph JSON (default: synthetic grid)")
    gen.add_argument("--start")
    gen.add_argument("--goal")
    gen.add_argument("--uav-start")
    gen.add_argument("--block-prob", type=float, default=0.2)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--rows", type=int, default=10)
    gen.add_argument("--cols", type=int, default=10)
    gen.add_argument("--spacing", type=float, default=100.0)
    gen.add_argument("--jitter", type=float, default=0.2)
    gen.add_argument("--delete-prob", type=float, default=0.15)
    gen.add_argument("--name", default="graph", help="grid: output file stem, used as the map id")
    gen.add_argument("--vg", type=float, default=20.0)
    gen.add_argument("--va", type=float, default=40.0)
    gen.set_defaults(func=cmd_generate)

    run = sub.add_parser("run", help="batch-simulate strategies and write a CSV report")
    run.add_argument("--graph", action="append", help="graph JSON; repeat for several maps")
    run.add_argument("--instances", type=int, default=50)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--block-prob", type=float, default=0.2)
    run.add_argument("--vg", type=float, default=20.0)
    run.add_argument("--va", type=float, default=40.0)
    run.add_argument("--strategies", default=",".join(STRATEGY_NAMES))
    run.add_argument("--out")
    run.add_argument("--jobs", type=int, default=1)
    run.set_defaults(func=cmd_run)

    rep = sub.add_parser("report", help="render a CSV report as a Markdown table")
    rep.add_argument("csv")
    rep.add_argument("--out")
    rep.set_defaults(func=cmd_report)

    sim = sub.add_parser("simulate", help="run one strategy on one scenario")
    sim.add_argument("--graph", required=True)
    sim.add_argument("--scenario", required=True)
    sim.add_argument("--strategy", choices=STRATEGY_NAMES, default="optimal_partition")
    sim.add_argument("--trace", help="write the event trace as JSON lines")
    sim.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (CliError, ValueError, SimulationError, UnreachableGoal, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
