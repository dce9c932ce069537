import itertools
import json
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coopctp.graph import (
    Edge,
    Graph,
    GraphError,
    Vertex,
    deadhead_weight,
    load_graph,
    motion_weight,
    path_length,
    shortest_path,
)


def _doc(vertices, edges):
    return {
        "vertices": [{"id": v, "x": x, "y": y} for v, x, y in vertices],
        "edges": [dict(zip(("u", "v", "length"), e)) for e in edges],
    }


def test_missing_length_defaults_to_straight_line():
    g = load_graph(_doc([("a", 0, 0), ("b", 3, 4)], [("a", "b")]))
    assert g.length("a", "b") == pytest.approx(5.0)


def test_load_from_text_roundtrip():
    g = load_graph(_doc([("a", 0, 0), ("b", 3, 4), ("c", 0, 4)], [("a", "b", 7.0), ("b", "c", 3.5)]))
    again = load_graph(g.to_json())
    assert again.to_dict() == g.to_dict()


@pytest.mark.parametrize(
    "doc, message",
    [
        (_doc([("a", 0, 0), ("a", 1, 1)], []), "duplicate vertex id"),
        (_doc([("a", 0, 0)], [("a", "b", 1.0)]), "dangling endpoint"),
        (_doc([("a", 0, 0), ("b", 1, 0)], [("a", "b", 0.0)]), "non-positive length"),
        (_doc([("a", 0, 0), ("b", 1, 0)], [("a", "b", -2.0)]), "non-positive length"),
        ({"vertices": []}, "malformed"),
    ],
)
def test_malformed_documents(doc, message):
    with pytest.raises(GraphError, match=message):
        load_graph(doc)


def test_bad_json_text():
    with pytest.raises(GraphError, match="malformed"):
        load_graph("{not json")


def test_unknown_vertex_query(triangle):
    graph, _ = triangle
    with pytest.raises(GraphError, match="unknown vertex id"):
        shortest_path(graph, "s", "zz")


def test_triangle_shortest_paths(triangle):
    graph, _ = triangle
    p = shortest_path(graph, "s", "g")
    assert p.vertices == ("s", "g") and p.length == 10
    detour = shortest_path(graph, "s", "g", [("g", "s")])
    assert detour.vertices == ("s", "a", "g") and detour.length == 24
    assert shortest_path(graph, "s", "g", [("s", "g"), ("a", "g")]) is None


def test_tie_break_is_lexicographic():
    graph = Graph(
        [Vertex("s", 0, 0), Vertex("b", 1, 1), Vertex("a", 1, -1), Vertex("g", 2, 0)],
        [Edge("s", "b", 2), Edge("b", "g", 2), Edge("s", "a", 2), Edge("a", "g", 2)],
    )
    assert shortest_path(graph, "s", "g").vertices == ("s", "a", "g")


def _all_simple_paths(graph, src, dst, blocked):
    out = []

    def walk(u, seen, seq):
        if u == dst:
            out.append(tuple(seq))
            return
        for v, _ in graph.neighbors(u):
            if v in seen or tuple(sorted((u, v))) in blocked:
                continue
            walk(v, seen | {v}, seq + [v])

    walk(src, {src}, [src])
    return out


def _random_graph(rng, n):
    ids = [f"n{i}" for i in range(n)]
    pts = {v: (rng.uniform(0, 10), rng.uniform(0, 10)) for v in ids}
    edges = []
    for a, b in itertools.combinations(ids, 2):
        if rng.random() < 0.45:
            d = max(math.dist(pts[a], pts[b]), 0.01)
            edges.append(Edge(a, b, round(d * rng.uniform(1.0, 1.5), 1) + 0.1))
    return Graph([Vertex(v, *pts[v]) for v in ids], edges)


def test_dijkstra_matches_path_enumeration():
    rng = random.Random(7)
    for _ in range(150):
        graph = _random_graph(rng, rng.randint(3, 8))
        keys = graph.edge_keys()
        blocked = {k for k in keys if rng.random() < 0.2}
        s, g = rng.sample(graph.vertex_ids(), 2)
        paths = _all_simple_paths(graph, s, g, blocked)
        found = shortest_path(graph, s, g, blocked)
        if not paths:
            assert found is None
            continue
        best = min(path_length(graph, p) for p in paths)
        assert found.length == pytest.approx(best, rel=1e-12)
        tight = [p for p in paths if abs(path_length(graph, p) - best) <= 1e-9 * max(1.0, best)]
        assert found.vertices == min(tight)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(3, 8))
def test_motion_weight_symmetric_and_below_road(seed, n):
    rng = random.Random(seed)
    graph = _random_graph(rng, n)
    for p, q in itertools.combinations(graph.vertex_ids(), 2):
        assert motion_weight(graph, p, q) == motion_weight(graph, q, p)
        assert deadhead_weight(graph, p, q) <= motion_weight(graph, p, q)
        if graph.has_edge(p, q):
            assert motion_weight(graph, p, q) == graph.length(p, q)
        else:
            assert motion_weight(graph, p, q) == pytest.approx(graph.euclidean(p, q))


def test_blocking_never_shortens():
    rng = random.Random(3)
    for _ in range(100):
        graph = _random_graph(rng, 7)
        s, g = rng.sample(graph.vertex_ids(), 2)
        base = shortest_path(graph, s, g)
        if base is None:
            continue
        more = shortest_path(graph, s, g, base.edges[:1])
        assert more is None or more.length >= base.length - 1e-12


def test_json_is_stable(triangle):
    graph, _ = triangle
    assert json.loads(graph.to_json()) == graph.to_dict()
    assert graph.to_json() == load_graph(graph.to_json()).to_json()
