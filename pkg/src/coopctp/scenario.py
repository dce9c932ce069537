"""Problem instances: hidden blockages, instance generators and the offline optimum."""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from typing import Sequence

from .graph import (
    Edge,
    EdgeKey,
    Graph,
    GraphError,
    Vertex,
    edge_key,
    is_connected,
    shortest_path,
)

VIABILITY_RETRIES = 1000
DEFAULT_EPSILON_FRACTION = 1e-3


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class Blockage:
    """Damage point on an edge.

    ``fraction`` is the position of the damage measured from the lower-id
    endpoint ``u`` (endpoints are stored normalized, ``u < v``).
    """

    u: str
    v: str
    fraction: float

    def __post_init__(self):
        if self.u > self.v:
            u, v = self.v, self.u
            object.__setattr__(self, "u", u)
            object.__setattr__(self, "v", v)
            object.__setattr__(self, "fraction", 1.0 - self.fraction)
        if not 0.0 < self.fraction < 1.0:
            raise ScenarioError(f"damage fraction must lie strictly inside (0, 1): {self.fraction}")

    @classmethod
    def at_distance(cls, a: str, b: str, length: float, dist_from_b: float) -> "Blockage":
        """Blockage on edge (a, b) located ``dist_from_b`` away from ``b``."""
        return cls(a, b, (length - dist_from_b) / length)

    @property
    def edge(self) -> EdgeKey:
        return (self.u, self.v)

    def distance_from(self, vertex: str, length: float) -> float:
        if vertex == self.u:
            return self.fraction * length
        if vertex == self.v:
            return (1.0 - self.fraction) * length
        raise ScenarioError(f"{vertex!r} is not an endpoint of {self.edge}")


@dataclass(frozen=True)
class Scenario:
    s: str
    g: str
    uav_start: str
    blockages: tuple[Blockage, ...] = ()
    v_g: float = 20.0
    v_a: float = 40.0
    seed: int = 0
    _by_edge: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "blockages", tuple(sorted(self.blockages, key=lambda b: b.edge)))
        by_edge = {}
        for b in self.blockages:
            if b.edge in by_edge:
                raise ScenarioError(f"edge {b.edge} blocked twice")
            by_edge[b.edge] = b
        object.__setattr__(self, "_by_edge", by_edge)
        if self.s == self.g:
            raise ScenarioError("start and goal must differ")
        if not (self.v_g > 0 and self.v_a > 0):
            raise ScenarioError("speeds must be positive")

    @property
    def blocked_edges(self) -> set[EdgeKey]:
        return set(self._by_edge)

    def blockage(self, u: str, v: str) -> Blockage | None:
        return self._by_edge.get(edge_key(u, v))

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "g": self.g,
            "uav_start": self.uav_start,
            "v_g": self.v_g,
            "v_a": self.v_a,
            "seed": self.seed,
            "blockages": [{"u": b.u, "v": b.v, "fraction": b.fraction} for b in self.blockages],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


def scenario_from_dict(doc: dict) -> Scenario:
    try:
        blockages = tuple(Blockage(b["u"], b["v"], float(b["fraction"])) for b in doc.get("blockages", []))
        return Scenario(
            s=doc["s"],
            g=doc["g"],
            uav_start=doc["uav_start"],
            blockages=blockages,
            v_g=float(doc["v_g"]),
            v_a=float(doc["v_a"]),
            seed=int(doc.get("seed", 0)),
        )
    except (KeyError, TypeError, AttributeError) as exc:
        raise ScenarioError(f"malformed scenario document: {exc}") from None


def load_scenario(document: str | dict) -> Scenario:
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"malformed scenario document: {exc}") from None
    return scenario_from_dict(document)


def read_scenario(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return load_scenario(fh.read())


def is_viable(graph: Graph, scenario: Scenario) -> bool:
    return is_connected(graph, scenario.s, scenario.g, scenario.blocked_edges)


def validate_scenario(graph: Graph, scenario: Scenario) -> None:
    for vid in (scenario.s, scenario.g, scenario.uav_start):
        if vid not in graph:
            raise ScenarioError(f"unknown vertex id {vid!r}")
    for b in scenario.blockages:
        if not graph.has_edge(b.u, b.v):
            raise ScenarioError(f"blockage on non-edge {b.edge}")
    if not is_viable(graph, scenario):
        raise ScenarioError("scenario is not viable: every s-g path is blocked")


def offline_optimum(graph: Graph, scenario: Scenario) -> float:
    """Length of the shortest s-g path that uses no blocked edge."""
    path = shortest_path(graph, scenario.s, scenario.g, scenario.blocked_edges)
    if path is None:
        raise ScenarioError("scenario is not viable: every s-g path is blocked")
    return path.length


# --- generators --------------------------------------------------------------


def _fan_offsets(k: int, span: float) -> list[float]:
    # alternate above/below the s-g axis, widening every second path; a bulge of
    # at most 0.6 * span keeps the half-ellipse shorter than 2 * span
    tiers = (k + 1) // 2
    return [(1 if i % 2 == 0 else -1) * 0.6 * span * (i // 2 + 1) / tiers for i in range(k)]


def _arc_points(span: float, bulge: float, n: int, samples: int = 720) -> list[tuple[float, float]]:
    """``n - 1`` interior points at equal arc length along a half ellipse from s to g."""
    pts = []
    for t in range(samples + 1):
        theta = math.pi * (1.0 - t / samples)
        pts.append((0.5 * span + 0.5 * span * math.cos(theta), bulge * math.sin(theta)))
    cum = [0.0]
    for a, b in zip(pts, pts[1:]):
        cum.append(cum[-1] + math.dist(a, b))
    out = []
    seg = 0
    for r in range(1, n):
        target = cum[-1] * r / n
        while cum[seg + 1] < target:
            seg += 1
        frac = (target - cum[seg]) / (cum[seg + 1] - cum[seg])
        (x0, y0), (x1, y1) = pts[seg], pts[seg + 1]
        out.append((x0 + frac * (x1 - x0), y0 + frac * (y1 - y0)))
    return out


def gen_disjoint_adversarial(
    lengths: Sequence[float],
    segments_per_path: int = 2,
    epsilon_fraction: float = DEFAULT_EPSILON_FRACTION,
    v_g: float = 20.0,
    v_a: float = 40.0,
    uav_start: str = "s",
) -> tuple[Graph, Scenario]:
    """Worst-case instance with ``k`` internally disjoint s-g paths.

    Path ``i`` has the requested length split evenly over ``segments_per_path``
    edges. Every path but the last is blocked on its final edge at distance
    ``epsilon_fraction * (final edge length)`` from ``g``. Vertices sit on a
    half-ellipse fan between s and g, evenly spaced by arc length, so no
    straight line is longer than its road; coordinates only matter for UAV hops.
    """
    lengths = [float(x) for x in lengths]
    k = len(lengths)
    if k == 0:
        raise ScenarioError("need at least one path")
    if any(x <= 0 for x in lengths):
        raise ScenarioError("path lengths must be positive")
    if any(b < a for a, b in zip(lengths, lengths[1:])):
        raise ScenarioError("path lengths must be nondecreasing")
    if segments_per_path < 2:
        raise ScenarioError("segments_per_path must be at least 2")
    if not 0.0 < epsilon_fraction < 1.0:
        raise ScenarioError("epsilon_fraction must lie in (0, 1)")

    n = segments_per_path
    span = 0.5 * lengths[0]
    vertices = [Vertex("s", 0.0, 0.0), Vertex("g", span, 0.0)]
    edges = []
    blockages = []
    width = len(str(k))
    for i, (total, offset) in enumerate(zip(lengths, _fan_offsets(k, span))):
        ids = ["s"]
        for r, (x, y) in enumerate(_arc_points(span, offset, n), start=1):
            vid = f"P{i + 1:0{width}d}_{r}"
            vertices.append(Vertex(vid, x, y))
            ids.append(vid)
        ids.append("g")
        seg = total / n
        seg_lengths = [seg] * (n - 1) + [total - seg * (n - 1)]
        for a, b, w in zip(ids, ids[1:], seg_lengths):
            edges.append(Edge(a, b, w))
        if i < k - 1:
            last = ids[-2]
            final_len = seg_lengths[-1]
            blockages.append(Blockage.at_distance(last, "g", final_len, epsilon_fraction * final_len))
    graph = Graph(vertices, edges)
    scenario = Scenario("s", "g", uav_start, tuple(blockages), v_g, v_a, 0)
    validate_scenario(graph, scenario)
    return graph, scenario


def gen_random(
    graph: Graph,
    s: str,
    g: str,
    uav_start: str,
    block_probability: float,
    seed: int,
    v_g: float = 20.0,
    v_a: float = 40.0,
    retries: int = VIABILITY_RETRIES,
) -> Scenario:
    """Block each edge independently at its midpoint, resampling until s-g stays connected."""
    for vid in (s, g, uav_start):
        graph.check_vertex(vid)
    if not 0.0 <= block_probability < 1.0:
        raise ScenarioError("block_probability must lie in [0, 1)")
    if not is_connected(graph, s, g):
        raise ScenarioError("unreachable goal")
    rng = random.Random(seed)
    keys = graph.edge_keys()
    for _ in range(retries):
        chosen = [k for k in keys if rng.random() < block_probability]
        if is_connected(graph, s, g, chosen):
            return Scenario(s, g, uav_start, tuple(Blockage(u, v, 0.5) for u, v in chosen), v_g, v_a, seed)
    raise ScenarioError(f"no viable blockage set within {retries} retries")


def synthetic_grid(
    rows: int = 10,
    cols: int = 10,
    spacing: float = 100.0,
    jitter: float = 0.2,
    deletion_probability: float = 0.15,
    seed: int = 0,
) -> Graph:
    """Perturbed grid road map; edges are deleted at random while keeping it connected."""
    if rows < 2 or cols < 2:
        raise GraphError("grid needs at least 2 rows and 2 columns")
    rng = random.Random(seed)

    def vid(r, c):
        return f"r{r:02d}c{c:02d}"

    coords = {}
    for r in range(rows):
        for c in range(cols):
            dx, dy = (rng.uniform(-jitter, jitter) * spacing for _ in range(2))
            coords[vid(r, c)] = (c * spacing + dx, r * spacing + dy)
    pairs = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                pairs.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < rows:
                pairs.append((vid(r, c), vid(r + 1, c)))

    def build(edge_pairs):
        verts = [Vertex(k, x, y) for k, (x, y) in sorted(coords.items())]
        return Graph(verts, [Edge(a, b, math.dist(coords[a], coords[b])) for a, b in edge_pairs])

    kept = list(pairs)
    order = list(pairs)
    rng.shuffle(order)
    anchor = vid(0, 0)
    for pair in order:
        if rng.random() >= deletion_probability:
            continue
        trial = [p for p in kept if p != pair]
        if _spans_all(trial, coords, anchor):
            kept = trial
    return build(kept)


def _spans_all(pairs, coords, anchor) -> bool:
    adj = {k: [] for k in coords}
    for a, b in pairs:
        adj[a].append(b)
        adj[b].append(a)
    seen = {anchor}
    stack = [anchor]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == len(coords)


def random_instance(
    graph: Graph,
    block_probability: float,
    seed: int,
    v_g: float = 20.0,
    v_a: float = 40.0,
) -> Scenario:
    """Random start, goal and UAV start on ``graph`` plus random midpoint blockages."""
    rng = random.Random(seed)
    ids = graph.vertex_ids()
    if len(ids) < 2:
        raise ScenarioError("graph needs at least two vertices")
    last_error = None
    for attempt in range(100):
        s, g = rng.sample(ids, 2)
        uav = rng.choice(ids)
        try:
            return gen_random(graph, s, g, uav, block_probability, seed * 1000 + attempt, v_g, v_a)
        except ScenarioError as exc:
            last_error = exc
    raise ScenarioError(f"could not draw a viable instance: {last_error}")
