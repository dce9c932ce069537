"""Closed-form worst-case costs and competitive-ratio bounds for k disjoint s-g paths.

Path indices ``j`` are 1-based: ``j`` is the first open path in shortest-first order.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


def _check_lengths(lengths: Sequence[float]) -> list[float]:
    lengths = [float(x) for x in lengths]
    if not lengths:
        raise ValueError("need at least one path length")
    if any(b < a for a, b in zip(lengths, lengths[1:])):
        raise ValueError("lengths must be nondecreasing")
    return lengths


def _check_index(j: int, k: int) -> None:
    if not 1 <= j <= k:
        raise IndexError(f"first open path index {j} outside [1, {k}]")


def shortest_first_order(lengths: Sequence[float]) -> list[int]:
    """Indices that visit paths by nondecreasing length (stable)."""
    return sorted(range(len(lengths)), key=lambda i: lengths[i])


def ugv_only_worst_case(lengths: Sequence[float]) -> float:
    """Worst-case UGV distance under shortest-first: twice every path but the last."""
    lengths = _check_lengths(lengths)
    return 2.0 * sum(lengths) - lengths[-1]


def ugv_only_time(
    lengths: Sequence[float], j: int, epsilons: float | Sequence[float] = 0.0, v_g: float = 1.0
) -> float:
    lengths = _check_lengths(lengths)
    _check_index(j, len(lengths))
    if isinstance(epsilons, (int, float)):
        epsilons = [float(epsilons)] * len(lengths)
    if len(epsilons) < j - 1:
        raise ValueError("need an epsilon for every blocked path")
    wasted = sum(lengths[i] - epsilons[i] for i in range(j - 1))
    return (2.0 * wasted + lengths[j - 1]) / v_g


def ugv_only_ratio_bound(k: int) -> float:
    if k < 1:
        raise ValueError("k must be at least 1")
    return 2.0 * k - 1.0


def coop_time(lengths: Sequence[float], j: int, v_g: float, v_a: float) -> float:
    """UGV time with the blocked paths shared with a UAV, ignoring transit and deadheading."""
    lengths = _check_lengths(lengths)
    _check_index(j, len(lengths))
    if not (v_g > 0 and v_a >= 0):
        raise ValueError("need v_g > 0 and v_a >= 0")
    return sum(2.0 * lengths[i] / (v_a + v_g) for i in range(j - 1)) + lengths[j - 1] / v_g


@dataclass(frozen=True)
class CoopBound:
    derivation_bound: float
    headline_expression: float


def coop_ratio_bound(k: int, v_g: float, v_a: float) -> CoopBound:
    """Cooperative competitive-ratio bound.

    ``derivation_bound`` is ``1 + 2 v_g (k - 1) / (v_a + v_g)``, which the max-over-j
    argument actually supports. ``headline_expression`` is ``2 k v_g / (v_a + v_g) - 1``;
    the two agree only at ``v_a = 0``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if not (v_g > 0 and v_a >= 0):
        raise ValueError("need v_g > 0 and v_a >= 0")
    share = v_g / (v_a + v_g)
    return CoopBound(1.0 + 2.0 * share * (k - 1), 2.0 * share * k - 1.0)


def max_ratio_over_first_open(lengths: Sequence[float], v_g: float, v_a: float | None = None) -> float:
    """Enumerate ``j`` and return the worst ``T(j) / (L_j / v_g)``.

    With ``v_a=None`` the UGV-only time (zero epsilons) is used, otherwise the
    cooperative time.
    """
    lengths = _check_lengths(lengths)
    worst = 0.0
    for j in range(1, len(lengths) + 1):
        t = ugv_only_time(lengths, j, 0.0, v_g) if v_a is None else coop_time(lengths, j, v_g, v_a)
        worst = max(worst, t / (lengths[j - 1] / v_g))
    return worst
