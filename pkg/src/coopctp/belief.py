"""Edge-status knowledge held by a robot (or by the shared message board)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .graph import EdgeKey, edge_key


class ContradictionError(ValueError):
    pass


@dataclass(frozen=True)
class EdgeStatus:
    blocked: bool
    fraction: float | None = None

    def __post_init__(self):
        if self.blocked and self.fraction is None:
            raise ValueError("a blocked status needs its damage fraction")
        if not self.blocked and self.fraction is not None:
            raise ValueError("an open edge has no damage fraction")

    def to_json(self):
        return {"status": "blocked", "fraction": self.fraction} if self.blocked else {"status": "open"}


OPEN = EdgeStatus(False)


def blocked(fraction: float) -> EdgeStatus:
    return EdgeStatus(True, fraction)


class Belief:
    """Known statuses; missing edges are unknown.

    Knowledge is monotone: an edge moves from unknown to open or to blocked and
    never changes afterwards.
    """

    def __init__(self, statuses: dict[EdgeKey, EdgeStatus] | None = None):
        self._status: dict[EdgeKey, EdgeStatus] = dict(statuses or {})

    def __contains__(self, edge) -> bool:
        return edge_key(*edge) in self._status

    def __len__(self) -> int:
        return len(self._status)

    def __iter__(self) -> Iterator[EdgeKey]:
        return iter(sorted(self._status))

    def __eq__(self, other) -> bool:
        return isinstance(other, Belief) and self._status == other._status

    def get(self, edge) -> EdgeStatus | None:
        return self._status.get(edge_key(*edge))

    def is_open(self, edge) -> bool:
        st = self.get(edge)
        return st is not None and not st.blocked

    def is_blocked(self, edge) -> bool:
        st = self.get(edge)
        return st is not None and st.blocked

    def blocked_edges(self) -> set[EdgeKey]:
        return {k for k, st in self._status.items() if st.blocked}

    def record(self, edge, status: EdgeStatus) -> bool:
        """Apply one discovery in place; returns whether anything changed."""
        key = edge_key(*edge)
        old = self._status.get(key)
        if old is None:
            self._status[key] = status
            return True
        if old != status:
            raise ContradictionError(f"contradiction on edge {key}: {old} then {status}")
        return False

    def merge(self, other: "Belief") -> list[EdgeKey]:
        """Absorb everything ``other`` knows; returns the newly learned edges in sorted order."""
        learned = []
        for key in sorted(other._status):
            if self.record(key, other._status[key]):
                learned.append(key)
        return learned

    def copy(self) -> "Belief":
        return Belief(self._status)

    def to_json(self) -> list[dict]:
        return [{"u": k[0], "v": k[1], **self._status[k].to_json()} for k in sorted(self._status)]


def apply_discovery(belief: Belief, edge, status: EdgeStatus) -> Belief:
    """Return a new belief with ``status`` recorded for ``edge``."""
    out = belief.copy()
    out.record(edge, status)
    return out
