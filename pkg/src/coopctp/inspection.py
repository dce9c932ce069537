"""Minimum-time UAV inspection of a path suffix.

The required edges form a simple path ``v0 .. vl``. Its endpoints are the only
odd-degree vertices, so an inspection walk from start ``a`` to stop ``b`` needs
deadheading that fixes parity on ``{v0, vl} ^ {a, b}``. A single connector is
enough exactly when the stop is ``v0``, ``vl`` or the start itself; any other
stop needs two connectors and is never better. The planner therefore only
scores endpoint sweeps and three connector options per interior start.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

from .graph import Graph, GraphError, deadhead_weight, make_path, motion_weight

ORACLE_MAX_EDGES = 8
_TIE_RTOL = 1e-12


@dataclass(frozen=True)
class SuffixPath:
    vertices: tuple[str, ...]
    total_length: float

    @property
    def n_edges(self) -> int:
        return len(self.vertices) - 1

    @property
    def required_edges(self) -> list[tuple[str, str]]:
        return list(zip(self.vertices, self.vertices[1:]))


def make_suffix(graph: Graph, vertices: Sequence[str]) -> SuffixPath:
    vertices = tuple(vertices)
    if not vertices:
        raise GraphError("suffix needs at least one vertex")
    if len(set(vertices)) != len(vertices):
        raise GraphError("suffix must be a simple path")
    return SuffixPath(vertices, make_path(graph, vertices).length)


@dataclass(frozen=True)
class InspectionPlan:
    start: str
    stop: str
    start_index: int
    stop_index: int
    connector: tuple[str, str] | None
    transit_length: float
    inspect_length: float
    deadhead_length: float
    t_init: float
    t_inspect: float
    t_dead: float
    t_total: float

    def to_dict(self) -> dict:
        return {
            "start": self.start,
            "stop": self.stop,
            "connector": list(self.connector) if self.connector else None,
            "t_init": self.t_init,
            "t_inspect": self.t_inspect,
            "t_dead": self.t_dead,
            "t_total": self.t_total,
        }


def _plan(graph, suffix, x_a, v_a, start_i, stop_i, connector, deadhead):
    verts = suffix.vertices
    transit = motion_weight(graph, x_a, verts[start_i])
    t_init = transit / v_a
    t_inspect = suffix.total_length / v_a
    t_dead = deadhead / v_a
    return InspectionPlan(
        start=verts[start_i],
        stop=verts[stop_i],
        start_index=start_i,
        stop_index=stop_i,
        connector=connector,
        transit_length=transit,
        inspect_length=suffix.total_length,
        deadhead_length=deadhead,
        t_init=t_init,
        t_inspect=t_inspect,
        t_dead=t_dead,
        t_total=t_init + t_inspect + t_dead,
    )


def interior_deadhead_options(
    graph: Graph, suffix: SuffixPath, i: int, strict: bool = False
) -> list[tuple[str, float]]:
    """(stop, deadhead length) for the three single-connector stops of interior start ``v_i``.

    Order: stop ``v0`` (connector v_i-v_l), stop ``v_l`` (connector v0-v_i),
    stop ``v_i`` (connector v0-v_l).
    """
    verts = suffix.vertices
    last = len(verts) - 1
    if not 0 < i < last:
        raise ValueError(f"index {i} is not interior to a suffix with {last} edges")
    v0, vi, vl = verts[0], verts[i], verts[last]
    return [
        (v0, deadhead_weight(graph, vi, vl, strict)),
        (vl, deadhead_weight(graph, v0, vi, strict)),
        (vi, deadhead_weight(graph, v0, vl, strict)),
    ]


def _candidates(graph, suffix, strict):
    """Yield (start_index, stop_index, connector, deadhead) in tie-break priority order."""
    verts = suffix.vertices
    last = len(verts) - 1
    yield 0, last, None, 0.0
    yield last, 0, None, 0.0
    for i in range(1, last):
        (_, d_stop0), (_, d_stopl), (_, d_stopi) = interior_deadhead_options(graph, suffix, i, strict)
        yield i, last, (verts[0], verts[i]), d_stopl
        yield i, 0, (verts[i], verts[last]), d_stop0
        yield i, i, (verts[0], verts[last]), d_stopi


def plan_inspection(
    graph: Graph, suffix: SuffixPath, x_a: str, v_a: float, strict: bool = False
) -> InspectionPlan:
    """Cheapest start/stop/connector choice for covering ``suffix`` from ``x_a``.

    Ties prefer the ``v0`` sweep, then the ``v_l`` sweep, then the lowest
    interior start with stops ordered ``v_l``, ``v0``, ``v_i``.
    """
    if not v_a > 0:
        raise ValueError("UAV speed must be positive")
    graph.check_vertex(x_a)
    for vid in suffix.vertices:
        graph.check_vertex(vid)
    if suffix.n_edges == 0:
        return InspectionPlan(
            start=suffix.vertices[0], stop=suffix.vertices[0], start_index=0, stop_index=0,
            connector=None, transit_length=0.0, inspect_length=0.0, deadhead_length=0.0,
            t_init=0.0, t_inspect=0.0, t_dead=0.0, t_total=0.0,
        )
    best = None
    for start_i, stop_i, connector, dead in _candidates(graph, suffix, strict):
        plan = _plan(graph, suffix, x_a, v_a, start_i, stop_i, connector, dead)
        if best is None or plan.t_total < best.t_total - _TIE_RTOL * max(1.0, best.t_total):
            best = plan
    return best


def walk_legs(suffix: SuffixPath, plan: InspectionPlan) -> list[tuple[str, str, str]]:
    """Legs ``(kind, from, to)`` of the Euler walk, kind being ``inspect`` or ``deadhead``."""
    verts = suffix.vertices
    last = len(verts) - 1
    if last == 0:
        return []
    a, b = plan.start_index, plan.stop_index
    if verts[a] != plan.start or verts[b] != plan.stop:
        raise ValueError("plan does not belong to this suffix")

    def sweep(i, j):
        step = 1 if j > i else -1
        return [("inspect", verts[r], verts[r + step]) for r in range(i, j, step)]

    if plan.connector is None:
        if {a, b} != {0, last}:
            raise ValueError("plan without connector must be an endpoint sweep")
        return sweep(a, b)
    if not 0 < a < last:
        raise ValueError("connector plans start at an interior vertex")
    if b == 0:
        return sweep(a, last) + [("deadhead", verts[last], verts[a])] + sweep(a, 0)
    if b == last:
        return sweep(a, 0) + [("deadhead", verts[0], verts[a])] + sweep(a, last)
    if b == a:
        return sweep(a, 0) + [("deadhead", verts[0], verts[last])] + sweep(last, a)
    raise ValueError("stop vertex outside {v0, v_l, start}")


def expand_euler_walk(suffix: SuffixPath, plan: InspectionPlan) -> list[str]:
    legs = walk_legs(suffix, plan)
    if not legs:
        return [plan.start]
    return [legs[0][1]] + [to for _, _, to in legs]


# --- brute-force oracle --------------------------------------------------------


def _min_perfect_matching(nodes: list[int], dist) -> float:
    if not nodes:
        return 0.0
    first, rest = nodes[0], nodes[1:]
    best = math.inf
    for k, other in enumerate(rest):
        remaining = rest[:k] + rest[k + 1:]
        best = min(best, dist[first][other] + _min_perfect_matching(remaining, dist))
    return best


def oracle_inspection_time(
    graph: Graph, suffix: SuffixPath, x_a: str, v_a: float, strict: bool = False,
    max_edges: int = ORACLE_MAX_EDGES,
) -> float:
    """Exhaustive reference: every start, every stop, minimum T-join by matching.

    Deadhead distances are closed under shortest paths in the complete motion
    graph, so multi-hop connectors are considered as well.
    """
    n = suffix.n_edges
    if n > max_edges:
        raise ValueError(f"oracle limited to {max_edges} edges")
    if n == 0:
        return 0.0
    verts = suffix.vertices
    idx = range(n + 1)
    dist = [[deadhead_weight(graph, verts[a], verts[b], strict) for b in idx] for a in idx]
    for m in idx:
        for a in idx:
            for b in idx:
                if dist[a][m] + dist[m][b] < dist[a][b]:
                    dist[a][b] = dist[a][m] + dist[m][b]
    best = math.inf
    for start, stop in itertools.product(idx, idx):
        odd = {0, n}
        if start != stop:
            odd ^= {start, stop}
        dead = _min_perfect_matching(sorted(odd), dist)
        total = motion_weight(graph, x_a, verts[start]) + suffix.total_length + dead
        best = min(best, total / v_a)
    return best


def two_connector_costs(graph: Graph, suffix: SuffixPath, i: int, j: int, strict: bool = False) -> list[float]:
    """Deadhead lengths of the three pairings of ``{v0, v_i, v_j, v_l}``."""
    verts = suffix.vertices
    last = len(verts) - 1
    v0, vi, vj, vl = verts[0], verts[i], verts[j], verts[last]
    w = lambda p, q: deadhead_weight(graph, p, q, strict)  # noqa: E731
    return [
        w(v0, vi) + w(vj, vl),
        w(v0, vj) + w(vi, vl),
        w(v0, vl) + w(vi, vj),
    ]
