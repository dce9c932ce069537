"""Cooperative UGV/UAV path planning on road networks with unknown blockages."""
from .analysis import (
    coop_ratio_bound,
    coop_time,
    shortest_first_order,
    ugv_only_ratio_bound,
    ugv_only_time,
    ugv_only_worst_case,
)
from .belief import Belief, EdgeStatus, apply_discovery
from .graph import Graph, GraphError, Path, load_graph, motion_weight, path_length, shortest_path
from .inspection import SuffixPath, expand_euler_walk, make_suffix, oracle_inspection_time, plan_inspection
from .partition import PartitionResult, optimal_split, ugv_prefix_time
from .scenario import (
    Blockage,
    Scenario,
    ScenarioError,
    gen_disjoint_adversarial,
    gen_random,
    load_scenario,
    offline_optimum,
    synthetic_grid,
)
from .simulation import SimulationResult, simulate
from .strategies import STRATEGY_NAMES, get_policy

__version__ = "0.1.0"
