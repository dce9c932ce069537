"""Online policies for the UGV/UAV team.

Policies are deterministic decision functions. The engine calls
:meth:`Policy.ugv_action` / :meth:`Policy.uav_action` whenever the robot is
idle at a vertex; a policy may install a new :class:`Plan` on the UGV, which
the engine then publishes to the UAV under the vertex communication rule.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .belief import OPEN, Belief, blocked
from .graph import Graph, Path, shortest_path
from .inspection import walk_legs
from .partition import PartitionResult, optimal_split
from .scenario import Scenario, ScenarioError

STRATEGY_NAMES = ("full_obs", "ugv_only", "bidirectional", "optimal_partition")

UGV = "ugv"
UAV = "uav"


@dataclass(frozen=True)
class Action:
    robot: str
    kind: str  # traverse | inspect | deadhead | transit | wait | finish
    src: str | None = None
    dst: str | None = None


@dataclass(frozen=True)
class Plan:
    """UGV candidate path plus the UAV's share of it.

    The UGV is responsible for edges ``path[0:split]``; edges from ``split`` on
    belong to the UAV walk ``uav_legs``.
    """

    version: int
    path: tuple[str, ...]
    split: int
    uav_legs: tuple[tuple[str, str, str], ...] = ()
    partition: PartitionResult | None = None

    def to_dict(self) -> dict:
        out = {"version": self.version, "path": list(self.path), "split": self.split}
        if self.partition is not None:
            out["partition"] = self.partition.to_dict()
        return out


@dataclass
class Leg:
    kind: str  # traverse | probe | return | inspect | deadhead | transit
    src: str
    dst: str
    length: float
    start: float
    end: float


@dataclass
class RobotState:
    name: str
    speed: float
    vertex: str  # current vertex, or the origin of the leg in flight
    belief: Belief = field(default_factory=Belief)
    plan: Plan | None = None
    leg: Leg | None = None
    waiting_since: float | None = None
    finished: bool = False
    agenda: list = field(default_factory=list)
    agenda_version: int = -1
    distance: float = 0.0
    wait_time: float = 0.0
    flight_time: float = 0.0

    @property
    def mode(self) -> str:
        if self.finished:
            return "finished"
        if self.leg is not None:
            return "moving"
        return "waiting"


@dataclass
class World:
    graph: Graph
    scenario: Scenario
    ugv: RobotState
    uav: RobotState
    now: float = 0.0


class UnreachableGoal(RuntimeError):
    pass


def _path_known_blocked(path: tuple[str, ...], belief: Belief, start: int = 0) -> bool:
    return any(belief.is_blocked((a, b)) for a, b in zip(path[start:], path[start + 1:]))


def _wait(robot: str) -> Action:
    return Action(robot, "wait")


class Policy:
    name = "base"
    uses_uav = False
    ugv_waits_for_uav = False

    def initial_ugv_belief(self, graph: Graph, scenario: Scenario) -> Belief:
        return Belief()

    def make_plan(self, world: World, path: Path, version: int) -> Plan:
        return Plan(version, path.vertices, len(path))

    def ugv_action(self, world: World) -> Action:
        ugv, goal = world.ugv, world.scenario.g
        if ugv.vertex == goal:
            return Action(UGV, "finish")
        plan = ugv.plan
        if plan is None or ugv.vertex not in plan.path[:-1] or _path_known_blocked(
            plan.path, ugv.belief, plan.path.index(ugv.vertex)
        ):
            path = shortest_path(world.graph, ugv.vertex, goal, ugv.belief.blocked_edges())
            if path is None:
                raise UnreachableGoal(f"no open route from {ugv.vertex} to {goal}")
            plan = self.make_plan(world, path, 0 if plan is None else plan.version + 1)
            ugv.plan = plan
        i = plan.path.index(ugv.vertex)
        a, b = plan.path[i], plan.path[i + 1]
        if self.ugv_waits_for_uav and i >= plan.split and (a, b) not in ugv.belief:
            return _wait(UGV)
        return Action(UGV, "traverse", a, b)

    def uav_action(self, world: World) -> Action:
        return _wait(UAV)


class FullObservation(Policy):
    """UGV knows every status in advance; the UAV stays put."""

    name = "full_obs"

    def initial_ugv_belief(self, graph, scenario):
        belief = Belief()
        for key in graph.edge_keys():
            blk = scenario.blockage(*key)
            belief.record(key, OPEN if blk is None else blocked(blk.fraction))
        return belief


class UgvOnly(Policy):
    """Replan on the known-blocked graph; back off to the last vertex after a failed probe."""

    name = "ugv_only"


class Bidirectional(Policy):
    """UAV works backwards from the goal end over not-yet-known edges of the UGV's path."""

    name = "bidirectional"
    uses_uav = True

    def uav_action(self, world):
        uav = world.uav
        plan = uav.plan
        if plan is None or _path_known_blocked(plan.path, uav.belief):
            return _wait(UAV)
        path = plan.path
        for i in range(len(path) - 2, -1, -1):
            near, far = path[i], path[i + 1]
            if (near, far) in uav.belief:
                continue
            if uav.vertex == far:
                return Action(UAV, "inspect", far, near)
            return Action(UAV, "transit", uav.vertex, far)
        return _wait(UAV)


class OptimalPartition(Policy):
    """Split each new path between the robots by the min-max scan; the UGV waits at the split."""

    name = "optimal_partition"
    uses_uav = True
    ugv_waits_for_uav = True

    def __init__(self, strict_deadhead: bool = False):
        self.strict_deadhead = strict_deadhead

    def make_plan(self, world, path, version):
        uav = world.uav
        if uav.leg is not None:
            x_a, delay = uav.leg.dst, uav.leg.end - world.now
        else:
            x_a, delay = uav.vertex, 0.0
        part = optimal_split(
            world.graph, path, x_a, world.scenario.v_g, world.scenario.v_a,
            tau_ret=0.0, uav_delay=delay, strict=self.strict_deadhead,
        )
        legs = tuple(walk_legs(part.suffix, part.uav_plan))
        return Plan(version, path.vertices, part.j_star, legs, part)

    def uav_action(self, world):
        uav = world.uav
        plan = uav.plan
        if plan is None or _path_known_blocked(plan.path, uav.belief):
            return _wait(UAV)
        if uav.agenda_version != plan.version:
            agenda = []
            if plan.uav_legs:
                first = plan.uav_legs[0][1]
                if uav.vertex != first:
                    agenda.append(("transit", uav.vertex, first))
                agenda.extend(plan.uav_legs)
            uav.agenda = agenda
            uav.agenda_version = plan.version
        if not uav.agenda:
            return _wait(UAV)
        kind, src, dst = uav.agenda.pop(0)
        return Action(UAV, kind, src, dst)


_REGISTRY = {
    "full_obs": FullObservation,
    "ugv_only": UgvOnly,
    "bidirectional": Bidirectional,
    "optimal_partition": OptimalPartition,
}


def get_policy(name: str, **kwargs) -> Policy:
    try:
        cls = _REGISTRY[name]
    except KeyError:
        raise ValueError(f"unknown strategy {name!r}; choose from {', '.join(STRATEGY_NAMES)}") from None
    return cls(**kwargs)


def full_observation_policy(graph: Graph, scenario: Scenario) -> Path:
    """Route of the fully informed UGV."""
    path = shortest_path(graph, scenario.s, scenario.g, scenario.blocked_edges)
    if path is None:
        raise ScenarioError("scenario is not viable")
    return path


