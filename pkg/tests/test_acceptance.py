"""End-to-end acceptance checks, one test per criterion.

Each test prints a single PASS/FAIL line (visible with ``-s``); a summary of all
criteria is also written at the end of every pytest run.
"""
import random
import statistics
import time

import pytest

from coopctp.analysis import coop_ratio_bound, max_ratio_over_first_open, ugv_only_time
from coopctp.cli import main
from coopctp.graph import motion_weight
from coopctp.inspection import (
    interior_deadhead_options,
    oracle_inspection_time,
    plan_inspection,
    two_connector_costs,
)
from coopctp.partition import optimal_split
from coopctp.scenario import gen_disjoint_adversarial, random_instance, synthetic_grid
from coopctp.simulation import simulate
from coopctp.strategies import STRATEGY_NAMES

from conftest import line_graph
from test_inspection import _random_case
from test_partition import random_split_case, rescan

GRID_SEEDS = (1, 2)
INSTANCES_PER_MAP = 50


def report(label, ok, detail=""):
    print(f"\n[{'PASS' if ok else 'FAIL'}] {label} {detail}".rstrip())
    assert ok, f"{label} {detail}"


@pytest.fixture(scope="module")
def grid_runs():
    """Every strategy on 50 random instances of each synthetic map (p=0.2, 20/40 m/s)."""
    runs = {}
    for gseed in GRID_SEEDS:
        graph = synthetic_grid(10, 10, seed=gseed)
        for i in range(INSTANCES_PER_MAP):
            scen = random_instance(graph, 0.2, i, 20.0, 40.0)
            runs[(gseed, i)] = {name: simulate(graph, scen, name) for name in STRATEGY_NAMES}
    return runs


def test_ac1_ugv_only_worst_case_ratio():
    t0 = time.perf_counter()
    worst = 0.0
    for k in range(2, 7):
        graph, scen = gen_disjoint_adversarial([1000.0] * k, epsilon_fraction=1e-6, v_g=20.0)
        ratio = simulate(graph, scen, "ugv_only").competitive_ratio
        worst = max(worst, abs(ratio - (2 * k - 1)) / (2 * k - 1))
    elapsed = time.perf_counter() - t0
    report("AC1 ugv-only ratio 2k-1", worst <= 1e-4 and elapsed < 1.0,
           f"max rel err {worst:.2e}, {elapsed:.3f}s")


def test_ac2_closed_form_agreement():
    rng = random.Random(2)
    worst = 0.0
    for _ in range(50):
        k = rng.randint(1, 6)
        lengths = sorted(rng.uniform(20, 3000) for _ in range(k))
        graph, scen = gen_disjoint_adversarial(
            lengths, rng.randint(2, 6), rng.uniform(1e-5, 0.5), v_g=rng.uniform(1, 40)
        )
        eps = [b.distance_from("g", graph.length(*b.edge)) for b in scen.blockages]
        want = ugv_only_time(lengths, k, eps + [0.0], scen.v_g)
        got = simulate(graph, scen, "ugv_only").ugv_time
        worst = max(worst, abs(got - want) / want)
    report("AC2 closed form = simulation", worst <= 1e-9, f"max rel err {worst:.2e}")


def test_ac3_inspection_planner_optimality():
    rng = random.Random(3)
    worst = 0.0
    table_ok = True
    for _ in range(200):
        graph, suffix, x_a, v_a = _random_case(rng)
        plan = plan_inspection(graph, suffix, x_a, v_a)
        worst = max(worst, abs(plan.t_total - oracle_inspection_time(graph, suffix, x_a, v_a)))
        last = suffix.n_edges
        for i in range(1, last):
            singles = [d for _, d in interior_deadhead_options(graph, suffix, i)]
            for j in range(1, last):
                if j == i:
                    continue
                pairs = two_connector_costs(graph, suffix, i, j)
                # each pairing dominates its own single connector, hence the best one
                if not all(p >= s - 1e-12 for p, s in zip(pairs, (singles[1], singles[0], singles[2]))):
                    table_ok = False
                # full time of the pruned stop choice never beats the chosen plan
                transit = motion_weight(graph, x_a, suffix.vertices[i])
                if (transit + suffix.total_length + min(pairs)) / v_a < plan.t_total - 1e-9:
                    table_ok = False
    report("AC3 planner = oracle, two-connector stops never better", worst <= 1e-9 and table_ok,
           f"max abs err {worst:.2e}")


def test_ac4_partition_optimality():
    rng = random.Random(4)
    worst = 0.0
    for _ in range(100):
        graph, ids, x_a, v_g, v_a, tau, delay = random_split_case(rng)
        got = optimal_split(graph, ids, x_a, v_g, v_a, tau_ret=tau, uav_delay=delay).objective
        worst = max(worst, abs(got - rescan(graph, ids, x_a, v_g, v_a, tau, delay)))
    line = line_graph(4)
    ex = optimal_split(line, ["v0", "v1", "v2", "v3", "v4"], "v4", 1.0, 2.0)
    ok = worst <= 1e-9 and ex.j_star == 1 and abs(ex.objective - 1.5) <= 1e-12
    report("AC4 partition = full re-scan", ok, f"max abs err {worst:.2e}, example j*={ex.j_star} obj={ex.objective}")


def test_ac5_full_observation_lower_bound(grid_runs):
    bad = []
    for key, res in grid_runs.items():
        base = res["full_obs"].ugv_time
        for name, r in res.items():
            if r.competitive_ratio < 1 - 1e-12 or r.ugv_time < base - 1e-9 * base:
                bad.append((key, name))
    report("AC5 full-observation lower bound", not bad and len(grid_runs) >= 100,
           f"{len(grid_runs)} instances, {len(bad)} violations")


def test_ac6_directional_improvement(grid_runs):
    lines = []
    ok = True
    for gseed in GRID_SEEDS:
        sel = [res for (s, _), res in grid_runs.items() if s == gseed]
        only = statistics.fmean(r["ugv_only"].ugv_time for r in sel)
        part = statistics.fmean(r["optimal_partition"].ugv_time for r in sel)
        ok &= part < only and len(sel) >= 50
        lines.append(f"grid{gseed}: {part:.3f} < {only:.3f}")
    report("AC6 optimal partition beats ugv-only on average", ok, "; ".join(lines))


def test_ac7_cooperative_bound_formulas():
    tight = all(coop_ratio_bound(k, 20.0, 0.0).derivation_bound == 2 * k - 1 for k in range(1, 11))
    rng = random.Random(7)
    exceed = 0
    for _ in range(1000):
        k = rng.randint(1, 10)
        lengths = sorted(rng.uniform(1, 1000) for _ in range(k))
        v_g, v_a = rng.uniform(1, 40), rng.uniform(0, 80)
        if max_ratio_over_first_open(lengths, v_g, v_a) > coop_ratio_bound(k, v_g, v_a).derivation_bound + 1e-9:
            exceed += 1
    gap = coop_ratio_bound(3, 1.0, 1.0)
    ok = tight and exceed == 0 and gap.derivation_bound == 3 and gap.headline_expression == 2
    report("AC7 cooperative bound formulas", ok,
           f"k=3,vG=vA: derivation {gap.derivation_bound} vs headline {gap.headline_expression}")


def test_ac8_pipeline_determinism(tmp_path, capsys):
    outputs = []
    for run in ("a", "b"):
        d = tmp_path / run
        assert main(["generate", "grid", "--rows", "6", "--cols", "6", "--seed", "8",
                     "--name", "map8", "--out", str(d)]) == 0
        csv_path = d / "out.csv"
        assert main(["run", "--graph", str(d / "map8.json"), "--instances", "5", "--seed", "3",
                     "--out", str(csv_path)]) == 0
        assert main(["report", str(csv_path), "--out", str(d / "table.md")]) == 0
        outputs.append((csv_path.read_bytes(), (d / "table.md").read_bytes()))
    capsys.readouterr()
    report("AC8 byte-identical pipeline reruns", outputs[0] == outputs[1], f"{len(outputs[0][0])} CSV bytes")
