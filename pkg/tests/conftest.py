import math
import random

import pytest

from coopctp.graph import Edge, Graph, Vertex
from coopctp.scenario import Blockage, Scenario

_acceptance: dict[str, str] = {}


def line_graph(n_edges, spacing=1.0, extra_vertices=(), extra_edges=()):
    """Vertices v0..vn on the x axis with unit-ish edges, plus optional extras."""
    verts = [Vertex(f"v{i}", i * spacing, 0.0) for i in range(n_edges + 1)]
    verts += [Vertex(vid, x, y) for vid, x, y in extra_vertices]
    edges = [Edge(f"v{i}", f"v{i + 1}", spacing) for i in range(n_edges)]
    edges += [Edge(u, v, w) for u, v, w in extra_edges]
    return Graph(verts, edges)


def random_embedded_path(rng: random.Random, n_edges: int, prefix="u", stretch=(1.0, 1.3)):
    """Random planar polyline; road lengths are Euclidean times a random stretch >= 1."""
    pts = [(rng.uniform(0, 100), rng.uniform(0, 100)) for _ in range(n_edges + 1)]
    ids = [f"{prefix}{i:02d}" for i in range(n_edges + 1)]
    verts = [Vertex(vid, x, y) for vid, (x, y) in zip(ids, pts)]
    edges = []
    for (a, pa), (b, pb) in zip(zip(ids, pts), zip(ids[1:], pts[1:])):
        d = max(math.dist(pa, pb), 1e-3)
        edges.append(Edge(a, b, d * rng.uniform(*stretch)))
    return verts, edges, ids


@pytest.fixture
def triangle():
    """s-g road of 10 blocked at its midpoint, detour s-a-g of 24."""
    graph = Graph(
        [Vertex("s", 0, 0), Vertex("g", 10, 0), Vertex("a", 5, 6)],
        [Edge("s", "g", 10), Edge("s", "a", 12), Edge("a", "g", 12)],
    )
    scenario = Scenario("s", "g", "s", (Blockage("g", "s", 0.5),), v_g=1.0, v_a=2.0)
    return graph, scenario


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        terminalreporter.write_line(f"{_acceptance[name]}  {name}")
