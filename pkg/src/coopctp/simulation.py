"""Event-driven co-simulation of the UGV and UAV.

Motion is piecewise constant-speed, so the clock jumps from one leg end to
the next. Robots exchange knowledge only while standing at a vertex: on
arrival a robot publishes everything it knows to a shared board and pulls
everything on it; idle robots pull immediately whenever something new lands.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

from .belief import OPEN, Belief, apply_discovery, blocked
from .graph import Graph, deadhead_weight, edge_key, motion_weight
from .scenario import Scenario, offline_optimum, validate_scenario
from .strategies import UAV, UGV, Action, Leg, Plan, Policy, RobotState, World, get_policy

__all__ = ["Event", "SimulationResult", "simulate", "apply_discovery", "trace_to_jsonl"]

logger = logging.getLogger(__name__)

REACH_VERTEX = "reach-vertex"
REACH_DAMAGE = "reach-damage-point"
PUBLISH = "publish-knowledge"
RECEIVE = "receive-knowledge"
BEGIN_WAIT = "begin-wait"
FINISH = "finish"

_ROBOT_ORDER = {UGV: 0, UAV: 1}
MAX_EVENTS = 1_000_000


class SimulationError(RuntimeError):
    pass


@dataclass(frozen=True)
class Event:
    time: float
    subject: str
    kind: str
    payload: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"time": self.time, "subject": self.subject, "kind": self.kind, "payload": self.payload}


@dataclass
class SimulationResult:
    strategy: str
    ugv_time: float
    uav_time: float
    ugv_distance: float
    ugv_wait: float
    l_star: float
    competitive_ratio: float
    trace: list[Event]
    discovered: Belief
    clock: float

    def summary(self) -> dict:
        return {
            "strategy": self.strategy,
            "ugv_time": self.ugv_time,
            "uav_time": self.uav_time,
            "l_star": self.l_star,
            "ratio": self.competitive_ratio,
        }


def trace_to_jsonl(trace: list[Event]) -> str:
    return "".join(json.dumps(ev.to_dict(), sort_keys=True) + "\n" for ev in trace)


class _Engine:
    def __init__(self, graph: Graph, scenario: Scenario, policy: Policy):
        self.graph = graph
        self.scenario = scenario
        self.policy = policy
        ugv = RobotState(UGV, scenario.v_g, scenario.s, policy.initial_ugv_belief(graph, scenario))
        uav = RobotState(UAV, scenario.v_a, scenario.uav_start)
        self.world = World(graph, scenario, ugv, uav)
        self.board = Belief()
        self.board_plan: Plan | None = None
        self.trace: list[Event] = []

    @property
    def now(self) -> float:
        return self.world.now

    def _emit(self, robot: RobotState, kind: str, **payload) -> None:
        self.trace.append(Event(self.now, robot.name, kind, payload))

    # --- communication ---------------------------------------------------
    def _publish(self, robot: RobotState) -> None:
        learned = self.board.merge(robot.belief)
        if learned:
            self._emit(robot, PUBLISH, edges=[list(k) for k in learned])

    def _publish_plan(self, robot: RobotState) -> None:
        plan = robot.plan
        if plan is not None and (self.board_plan is None or plan.version > self.board_plan.version):
            self.board_plan = plan
            self._emit(robot, PUBLISH, plan=plan.to_dict())

    def _receive(self, robot: RobotState) -> None:
        learned = robot.belief.merge(self.board)
        if learned:
            self._emit(robot, RECEIVE, edges=[list(k) for k in learned])
        if robot.name == UAV and self.board_plan is not None:
            if robot.plan is None or self.board_plan.version > robot.plan.version:
                robot.plan = self.board_plan
                self._emit(robot, RECEIVE, plan_version=robot.plan.version)

    # --- motion ------------------------------------------------------------
    def _start(self, robot: RobotState, action: Action) -> None:
        if robot.waiting_since is not None:
            robot.wait_time += self.now - robot.waiting_since
            robot.waiting_since = None
        src, dst = action.src, action.dst
        if src != robot.vertex:
            raise SimulationError(f"{robot.name} at {robot.vertex} cannot start a leg from {src}")
        if robot.name == UGV:
            if action.kind != "traverse":
                raise SimulationError(f"UGV cannot {action.kind}")
            if robot.belief.is_blocked((src, dst)):
                raise SimulationError(f"UGV asked to use known-blocked edge {edge_key(src, dst)}")
            length = self.graph.length(src, dst)
            blk = self.scenario.blockage(src, dst)
            if blk is not None:
                d = blk.distance_from(src, length)
                robot.leg = Leg("probe", src, dst, d, self.now, self.now + d / robot.speed)
            else:
                robot.leg = Leg("traverse", src, dst, length, self.now, self.now + length / robot.speed)
            return
        if action.kind == "inspect":
            length = self.graph.length(src, dst)
        elif action.kind == "deadhead":
            length = deadhead_weight(self.graph, src, dst, getattr(self.policy, "strict_deadhead", False))
        elif action.kind == "transit":
            length = motion_weight(self.graph, src, dst)
        else:
            raise SimulationError(f"UAV cannot {action.kind}")
        robot.leg = Leg(action.kind, src, dst, length, self.now, self.now + length / robot.speed)

    def _complete(self, robot: RobotState) -> None:
        leg = robot.leg
        robot.leg = None
        duration = leg.end - leg.start
        info = dict(src=leg.src, dst=leg.dst, mode=leg.kind, start=leg.start, duration=duration, length=leg.length)
        if robot.name == UGV:
            robot.distance += leg.length
            if leg.kind == "probe":
                blk = self.scenario.blockage(leg.src, leg.dst)
                robot.belief.record((leg.src, leg.dst), blocked(blk.fraction))
                self._emit(robot, REACH_DAMAGE, **info)
                # reversal at the damage point; knowledge travels back with the UGV
                robot.leg = Leg("return", leg.dst, leg.src, leg.length, self.now, self.now + duration)
                return
            if leg.kind == "return":
                robot.vertex = leg.dst
                self._emit(robot, REACH_VERTEX, **info)
                return
            robot.belief.record((leg.src, leg.dst), OPEN)
            robot.vertex = leg.dst
            self._emit(robot, REACH_VERTEX, **info)
            return
        robot.flight_time += duration
        robot.vertex = leg.dst
        if leg.kind == "inspect":
            blk = self.scenario.blockage(leg.src, leg.dst)
            status = OPEN if blk is None else blocked(blk.fraction)
            robot.belief.record((leg.src, leg.dst), status)
            info["detected"] = "blocked" if status.blocked else "open"
        self._emit(robot, REACH_VERTEX, **info)

    # --- decisions -----------------------------------------------------------
    def _settle(self) -> None:
        world = self.world
        idle = [r for r in (world.ugv, world.uav) if r.leg is None and not r.finished]
        for robot in idle:
            self._publish(robot)
        for robot in idle:
            self._receive(robot)
            if robot.name == UGV:
                action = self.policy.ugv_action(world)
                self._publish_plan(robot)
            else:
                action = self.policy.uav_action(world)
            if action.kind == "finish":
                robot.finished = True
                if robot.waiting_since is not None:
                    robot.wait_time += self.now - robot.waiting_since
                    robot.waiting_since = None
                self._emit(robot, FINISH)
                return
            if action.kind == "wait":
                if robot.waiting_since is None:
                    robot.waiting_since = self.now
                    self._emit(robot, BEGIN_WAIT, vertex=robot.vertex)
                continue
            self._start(robot, action)

    def run(self) -> SimulationResult:
        validate_scenario(self.graph, self.scenario)
        l_star = offline_optimum(self.graph, self.scenario)
        world = self.world
        ugv, uav = world.ugv, world.uav
        self._settle()
        for _ in range(MAX_EVENTS):
            if ugv.finished:
                break
            moving = [r for r in (ugv, uav) if r.leg is not None]
            if not moving:
                raise SimulationError(f"deadlock at t={self.now}: nobody is moving")
            robot = min(moving, key=lambda r: (r.leg.end, _ROBOT_ORDER[r.name]))
            world.now = robot.leg.end
            self._complete(robot)
            self._settle()
        else:
            raise SimulationError("event budget exhausted")

        if uav.leg is not None:
            uav.flight_time += self.now - uav.leg.start
        ugv_time = ugv.distance / self.scenario.v_g + ugv.wait_time
        return SimulationResult(
            strategy=self.policy.name,
            ugv_time=ugv_time,
            uav_time=uav.flight_time,
            ugv_distance=ugv.distance,
            ugv_wait=ugv.wait_time,
            l_star=l_star,
            competitive_ratio=ugv_time / (l_star / self.scenario.v_g),
            trace=self.trace,
            discovered=self.board,
            clock=self.now,
        )


def simulate(graph: Graph, scenario: Scenario, policy: str | Policy, **policy_kwargs) -> SimulationResult:
    """Run one strategy on one instance until the UGV reaches the goal."""
    if isinstance(policy, str):
        policy = get_policy(policy, **policy_kwargs)
    return _Engine(graph, scenario, policy).run()
