"""Experience tuples and the replay buffer"""

from collections import deque
from typing import Deque, List, Tuple

from pydantic import BaseModel

from ..relations.graph import RelationGraph


class ExperienceTuple(BaseModel):
    """One transition (s, a, r, s', q)"""
    s: str
    a: str
    r: float
    s_next: str
    q: float = 0.0
    rejected: bool = False

    def as_prompt_line(self) -> str:
        return f"({self.s}, {self.a}, {self.r:g}, {self.s_next}, {self.q:.2f})"


class ReplayBuffer:
    """Bounded FIFO of experience with insertion order kept for recency ties"""

    def __init__(self, capacity: int = 512):
        if capacity < 1:
            raise ValueError("replay buffer capacity must be positive")
        self.capacity = capacity
        self._entries: Deque[Tuple[int, ExperienceTuple]] = deque(maxlen=capacity)
        self._counter = 0

    def append(self, t: ExperienceTuple) -> None:
        self._entries.append((self._counter, t))
        self._counter += 1

    def __len__(self) -> int:
        return len(self._entries)

    @property
    def entries(self) -> List[ExperienceTuple]:
        return [t for _, t in self._entries]

    def sequenced(self) -> List[Tuple[int, ExperienceTuple]]:
        return list(self._entries)


def retrieve_similar(buf: ReplayBuffer, graph: RelationGraph, current: str, k: int) -> List[ExperienceTuple]:
    """Top-k experiences by graph distance from current; ties by higher q, then most recent"""
    if k <= 0 or len(buf) == 0:
        return []
    dist = graph.distances_from(current)
    unreachable = len(graph.labels) + 1
    ranked = sorted(
        buf.sequenced(),
        key=lambda item: (dist.get(item[1].s, unreachable), -item[1].q, -item[0]),
    )
    return [t for _, t in ranked[:k]]
