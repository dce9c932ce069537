"""Prefix/suffix split of a candidate path between the UGV and the UAV."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import accumulate

from .graph import Graph, Path, make_path, path_length
from .inspection import InspectionPlan, SuffixPath, plan_inspection


@dataclass(frozen=True)
class PartitionResult:
    j_star: int
    t_ugv: float
    t_uav: float
    objective: float
    uav_plan: InspectionPlan
    suffix: SuffixPath

    def to_dict(self) -> dict:
        return {
            "j_star": self.j_star,
            "t_ugv": self.t_ugv,
            "t_uav": self.t_uav,
            "objective": self.objective,
            "uav_plan": self.uav_plan.to_dict(),
        }


def _as_path(graph: Graph, path) -> Path:
    return path if isinstance(path, Path) else make_path(graph, path)


def prefix_lengths(graph: Graph, path) -> list[float]:
    """``S(0..m)``: cumulative road length of the first ``j`` edges."""
    verts = _as_path(graph, path).vertices
    steps = [graph.length(a, b) for a, b in zip(verts, verts[1:])]
    return list(accumulate(steps, initial=0.0))


def ugv_prefix_time(graph: Graph, path, j: int, v_g: float, tau_ret: float = 0.0) -> float:
    sums = prefix_lengths(graph, path)
    if not 0 <= j < len(sums):
        raise IndexError(f"split index {j} outside [0, {len(sums) - 1}]")
    return tau_ret + sums[j] / v_g


def optimal_split(
    graph: Graph,
    path,
    x_a: str,
    v_g: float,
    v_a: float,
    tau_ret: float = 0.0,
    uav_delay: float = 0.0,
    strict: bool = False,
) -> PartitionResult:
    """Scan every split ``j`` and minimise ``max(T_ugv(j), T_uav(j))``.

    ``uav_delay`` is added to every non-empty UAV suffix time; it covers the
    remaining flight of a UAV that is mid-edge when the split is computed.
    Ties go to the smaller ``j``.
    """
    path = _as_path(graph, path)
    m = len(path)
    if m < 1:
        raise ValueError("path must contain at least one edge")
    if not (v_g > 0 and v_a > 0):
        raise ValueError("speeds must be positive")
    sums = prefix_lengths(graph, path)
    verts = path.vertices
    best = None
    for j in range(m + 1):
        t_ugv = tau_ret + sums[j] / v_g
        suffix = SuffixPath(verts[j:], path_length(graph, verts[j:]))
        plan = plan_inspection(graph, suffix, x_a, v_a, strict)
        t_uav = plan.t_total + (uav_delay if j < m else 0.0)
        objective = max(t_ugv, t_uav)
        if best is None or objective < best.objective:
            best = PartitionResult(j, t_ugv, t_uav, objective, plan, suffix)
    return best
