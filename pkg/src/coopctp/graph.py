"""Road-network graph with planar coordinates.

Vertex ids are strings. Edges are undirected and stored under a normalized
key ``(min(u, v), max(u, v))`` so lookups do not depend on orientation.
"""
from __future__ import annotations

import heapq
import json
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

logger = logging.getLogger(__name__)

EdgeKey = tuple[str, str]

# relative slack used when following tight edges of the shortest-path DAG
_TIGHT_RTOL = 1e-9


class GraphError(ValueError):
    """Raised for malformed graph documents or invalid graph queries."""


def edge_key(u: str, v: str) -> EdgeKey:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class Vertex:
    id: str
    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))


@dataclass(frozen=True)
class Edge:
    u: str
    v: str
    length: float

    def __post_init__(self):
        object.__setattr__(self, "length", float(self.length))

    @property
    def key(self) -> EdgeKey:
        return edge_key(self.u, self.v)


@dataclass(frozen=True)
class Path:
    vertices: tuple[str, ...]
    length: float

    @property
    def edges(self) -> list[EdgeKey]:
        return [edge_key(a, b) for a, b in zip(self.vertices, self.vertices[1:])]

    def __len__(self) -> int:
        return len(self.vertices) - 1


class Graph:
    """Immutable weighted undirected graph.

    Self-loops and parallel edges are rejected. Road lengths need not match the
    Euclidean distance between endpoints.
    """

    def __init__(self, vertices: Iterable[Vertex], edges: Iterable[Edge]):
        self._vertices: dict[str, Vertex] = {}
        for vert in vertices:
            if not isinstance(vert.id, str):
                raise GraphError(f"vertex id must be a string: {vert.id!r}")
            if vert.id in self._vertices:
                raise GraphError(f"duplicate vertex id {vert.id!r}")
            if not (math.isfinite(vert.x) and math.isfinite(vert.y)):
                raise GraphError(f"non-finite coordinates for vertex {vert.id!r}")
            self._vertices[vert.id] = vert

        self._edges: dict[EdgeKey, Edge] = {}
        adjacency: dict[str, list[tuple[str, float]]] = {vid: [] for vid in self._vertices}
        for edge in edges:
            for end in (edge.u, edge.v):
                if end not in self._vertices:
                    raise GraphError(f"dangling endpoint {end!r} on edge ({edge.u}, {edge.v})")
            if edge.u == edge.v:
                raise GraphError(f"self-loop at {edge.u!r}")
            if not (math.isfinite(edge.length) and edge.length > 0):
                raise GraphError(f"non-positive length on edge ({edge.u}, {edge.v})")
            if edge.key in self._edges:
                raise GraphError(f"parallel edge ({edge.u}, {edge.v})")
            if edge.length < self.euclidean(edge.u, edge.v) * (1 - 1e-12):
                logger.warning("edge (%s, %s) is shorter than the straight line", edge.u, edge.v)
            self._edges[edge.key] = edge
            adjacency[edge.u].append((edge.v, edge.length))
            adjacency[edge.v].append((edge.u, edge.length))
        self._adj = {vid: tuple(sorted(nbrs)) for vid, nbrs in adjacency.items()}

    # --- accessors -----------------------------------------------------
    @property
    def vertices(self) -> dict[str, Vertex]:
        return dict(self._vertices)

    @property
    def edges(self) -> dict[EdgeKey, Edge]:
        return dict(self._edges)

    def vertex_ids(self) -> list[str]:
        return sorted(self._vertices)

    def edge_keys(self) -> list[EdgeKey]:
        return sorted(self._edges)

    def __contains__(self, vid: object) -> bool:
        return vid in self._vertices

    def __len__(self) -> int:
        return len(self._vertices)

    def check_vertex(self, vid: str) -> None:
        if vid not in self._vertices:
            raise GraphError(f"unknown vertex id {vid!r}")

    def neighbors(self, vid: str) -> tuple[tuple[str, float], ...]:
        self.check_vertex(vid)
        return self._adj[vid]

    def has_edge(self, u: str, v: str) -> bool:
        return edge_key(u, v) in self._edges

    def length(self, u: str, v: str) -> float:
        try:
            return self._edges[edge_key(u, v)].length
        except KeyError:
            raise GraphError(f"({u}, {v}) is not an edge") from None

    def position(self, vid: str) -> tuple[float, float]:
        self.check_vertex(vid)
        vert = self._vertices[vid]
        return vert.x, vert.y

    def euclidean(self, p: str, q: str) -> float:
        a, b = self._vertices[p], self._vertices[q]
        return math.hypot(a.x - b.x, a.y - b.y)

    # --- serialization -------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "vertices": [
                {"id": v.id, "x": v.x, "y": v.y} for v in (self._vertices[k] for k in self.vertex_ids())
            ],
            "edges": [
                {"u": e.u, "v": e.v, "length": e.length} for e in (self._edges[k] for k in self.edge_keys())
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


def graph_from_dict(doc: dict) -> Graph:
    if not isinstance(doc, dict) or "vertices" not in doc or "edges" not in doc:
        raise GraphError("malformed graph document: expected 'vertices' and 'edges'")
    try:
        vertices = [Vertex(item["id"], float(item["x"]), float(item["y"])) for item in doc["vertices"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphError(f"malformed vertex entry: {exc}") from None
    coords = {}
    for vert in vertices:
        coords.setdefault(vert.id, (vert.x, vert.y))
    edges = []
    for item in doc["edges"]:
        try:
            u, v = item["u"], item["v"]
            length = item.get("length")
        except (KeyError, TypeError, AttributeError) as exc:
            raise GraphError(f"malformed edge entry: {exc}") from None
        if length is None:
            if u not in coords or v not in coords:
                raise GraphError(f"dangling endpoint on edge ({u}, {v})")
            (x0, y0), (x1, y1) = coords[u], coords[v]
            length = math.hypot(x1 - x0, y1 - y0)
        try:
            length = float(length)
        except (TypeError, ValueError):
            raise GraphError(f"malformed length on edge ({u}, {v})") from None
        edges.append(Edge(u, v, length))
    return Graph(vertices, edges)


def load_graph(document: str | dict) -> Graph:
    """Parse a JSON graph document (text or already-decoded dict)."""
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise GraphError(f"malformed document: {exc}") from None
    return graph_from_dict(document)


def read_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return load_graph(fh.read())


def path_length(graph: Graph, path: Path | Sequence[str]) -> float:
    vertices = path.vertices if isinstance(path, Path) else tuple(path)
    total = 0.0
    for a, b in zip(vertices, vertices[1:]):
        total += graph.length(a, b)
    return total


def make_path(graph: Graph, vertices: Sequence[str]) -> Path:
    vertices = tuple(vertices)
    for vid in vertices:
        graph.check_vertex(vid)
    return Path(vertices, path_length(graph, vertices))


def distances_to(graph: Graph, target: str, known_blocked: Iterable[EdgeKey] = ()) -> dict[str, float]:
    """Dijkstra distances from every reachable vertex to ``target``."""
    graph.check_vertex(target)
    blocked = {edge_key(*e) for e in known_blocked}
    dist = {target: 0.0}
    heap = [(0.0, target)]
    done = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v, w in graph.neighbors(u):
            if blocked and edge_key(u, v) in blocked:
                continue
            nd = d + w
            if nd < dist.get(v, math.inf):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def shortest_path(
    graph: Graph, src: str, dst: str, known_blocked: Iterable[EdgeKey] = ()
) -> Path | None:
    """Minimum-length ``src``-``dst`` path avoiding ``known_blocked``.

    Among equal-length paths the lexicographically smallest vertex sequence is
    returned: distances to ``dst`` are computed first, then the path is grown
    greedily from ``src`` along tight edges, smallest neighbour id first.
    """
    graph.check_vertex(src)
    graph.check_vertex(dst)
    blocked = {edge_key(*e) for e in known_blocked}
    dist = distances_to(graph, dst, blocked)
    if src not in dist:
        return None
    seq = [src]
    u = src
    while u != dst:
        du = dist[u]
        slack = _TIGHT_RTOL * max(1.0, du)
        nxt = None
        for v, w in graph.neighbors(u):  # sorted by id
            if v not in dist or edge_key(u, v) in blocked:
                continue
            if w + dist[v] - du <= slack and dist[v] < du:
                nxt = v
                break
        if nxt is None:  # pragma: no cover - guarded by dist[v] < du
            raise RuntimeError("shortest-path reconstruction failed")
        seq.append(nxt)
        u = nxt
    return make_path(graph, seq)


def motion_weight(graph: Graph, p: str, q: str) -> float:
    """UAV flight cost between two vertices: road length over an edge, else straight line."""
    graph.check_vertex(p)
    graph.check_vertex(q)
    if p == q:
        return 0.0
    key = edge_key(p, q)
    if key in graph._edges:
        return graph._edges[key].length
    return graph.euclidean(p, q)


def deadhead_weight(graph: Graph, p: str, q: str, strict: bool = False) -> float:
    """Cost of a non-inspecting repositioning hop.

    With ``strict`` the hop pays :func:`motion_weight` exactly. Otherwise it pays
    the cheaper of the road length (if any) and the straight line.
    """
    if strict:
        return motion_weight(graph, p, q)
    graph.check_vertex(p)
    graph.check_vertex(q)
    if p == q:
        return 0.0
    d = graph.euclidean(p, q)
    key = edge_key(p, q)
    if key in graph._edges:
        return min(graph._edges[key].length, d)
    return d


def is_connected(graph: Graph, src: str, dst: str, known_blocked: Iterable[EdgeKey] = ()) -> bool:
    return src in distances_to(graph, dst, known_blocked)
