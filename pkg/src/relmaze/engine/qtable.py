"""Tabular state-action values over relation-graph labels"""

import json
from typing import Dict, List, Optional, Tuple

from ..errors import LabelError
from ..relations.graph import RelationGraph
from ..relations.labels import decode_label, is_label


def _order(label: str) -> Tuple[int, int, str]:
    return (0, decode_label(label), "") if is_label(label) else (1, 0, label)


class QTable:
    """Q(s, a) for adjacent (s, a); attempts at non-neighbours live in a separate penalty map"""

    def __init__(self, graph: RelationGraph):
        self.graph = graph
        self.values: Dict[Tuple[str, str], float] = {}
        self.penalties: Dict[Tuple[str, str], float] = {}

    def get(self, s: str, a: str) -> float:
        if self.graph.is_edge(s, a):
            return self.values.get((s, a), 0.0)
        return self.penalties.get((s, a), 0.0)

    def set(self, s: str, a: str, value: float) -> None:
        if self.graph.is_edge(s, a):
            self.values[(s, a)] = value
        else:
            self.penalties[(s, a)] = value

    def row(self, s: str) -> Dict[str, float]:
        """Values of every available action at s (absent keys read as 0)"""
        return {a: self.values.get((s, a), 0.0) for a in self.graph.neighbors(s)}

    def max_value(self, s: str) -> float:
        row = self.row(s)
        return max(row.values()) if row else 0.0

    def best_action(self, s: str) -> Optional[str]:
        """Argmax over neighbours; ties go to the lowest label index"""
        best: Optional[str] = None
        best_value = 0.0
        # neighbours arrive sorted by index, so strict > keeps the lowest on ties
        for a, value in self.row(s).items():
            if best is None or value > best_value:
                best, best_value = a, value
        return best

    def __len__(self) -> int:
        return len(self.values)

    def to_snapshot(self) -> str:
        """Deterministic JSON of (state, action, value) triples"""
        def ordered(table: Dict[Tuple[str, str], float]) -> List[List[object]]:
            keys = sorted(table, key=lambda k: (_order(k[0]), _order(k[1])))
            return [[s, a, table[(s, a)]] for s, a in keys]

        return json.dumps(
            {
                "width": self.graph.width,
                "height": self.graph.height,
                "values": ordered(self.values),
                "penalties": ordered(self.penalties),
            },
            indent=2,
        )

    @classmethod
    def from_snapshot(cls, text: str, graph: RelationGraph) -> "QTable":
        data = json.loads(text)
        if (data.get("width"), data.get("height")) != (graph.width, graph.height):
            raise LabelError(
                f"snapshot is for a {data.get('height')}x{data.get('width')} grid, "
                f"graph is {graph.height}x{graph.width}"
            )
        q = cls(graph)
        for s, a, value in data.get("values", []):
            if not graph.is_edge(s, a):
                raise LabelError(f"snapshot pair ({s}, {a}) is not an edge of this maze")
            q.values[(s, a)] = float(value)
        for s, a, value in data.get("penalties", []):
            q.penalties[(s, a)] = float(value)
        return q
