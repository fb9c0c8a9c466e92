"""Spatial-to-relational transformation of a grid maze

Every cell gets a letter label from its row-major index (obstacles included, so
the mapping depends only on the grid width). Free 4-adjacent cells become
undirected edges; obstacle labels have no edges and are not listed as nodes.
"""

from typing import Any, Dict, List, Optional, Tuple

import networkx as nx
from pydantic import BaseModel, PrivateAttr

from ..errors import InvalidPositionError, LabelError
from ..maze.core import Coord, Maze
from .labels import decode_label, encode_label


def label_of(maze: Maze, c: Coord) -> str:
    """Label of an in-bounds cell"""
    if not maze.in_bounds(c):
        raise InvalidPositionError(f"{tuple(c)} is outside the {maze.height}x{maze.width} maze")
    return encode_label(c[0] * maze.width + c[1])


def coord_of(maze: Maze, label: str) -> Coord:
    """Cell of a label; the label must decode inside the grid"""
    return _coord_for(label, maze.width, maze.height)


def _coord_for(label: str, width: int, height: int) -> Coord:
    index = decode_label(label)
    if index >= width * height:
        raise LabelError(f"label {label} (index {index}) is outside a grid of {width * height} cells")
    return Coord(*divmod(index, width))


class RelationGraph(BaseModel):
    """Lettered node graph of a maze"""
    width: int
    height: int
    labels: List[str]
    edges: List[Tuple[str, str]]
    start_label: str
    goal_label: str

    _graph: Any = PrivateAttr(default=None)
    _adjacency: Dict[str, List[str]] = PrivateAttr(default_factory=dict)

    def model_post_init(self, __context: Any) -> None:
        graph = nx.Graph()
        graph.add_nodes_from(self.labels)
        graph.add_edges_from(self.edges)
        self._graph = graph
        self._adjacency = {
            node: sorted(graph.neighbors(node), key=decode_label) for node in self.labels
        }

    def neighbors(self, label: str) -> List[str]:
        """Neighbours sorted by label index; empty for obstacles and unknown labels"""
        return list(self._adjacency.get(label, ()))

    def has_node(self, label: str) -> bool:
        return label in self._adjacency

    def is_edge(self, a: str, b: str) -> bool:
        return self._graph.has_edge(a, b)

    def contains_label(self, label: str) -> bool:
        """True when the label decodes inside the grid (free or obstacle)"""
        try:
            _coord_for(label, self.width, self.height)
        except LabelError:
            return False
        return True

    def coord(self, label: str) -> Coord:
        return _coord_for(label, self.width, self.height)

    def label(self, c: Coord) -> str:
        if not (0 <= c[0] < self.height and 0 <= c[1] < self.width):
            raise InvalidPositionError(f"{tuple(c)} is outside the {self.height}x{self.width} grid")
        return encode_label(c[0] * self.width + c[1])

    def distances_from(self, label: str) -> Dict[str, int]:
        """BFS hop counts from label to every node reachable from it"""
        if label not in self._adjacency:
            return {}
        return dict(nx.single_source_shortest_path_length(self._graph, label))

    def distance(self, a: str, b: str) -> Optional[int]:
        if a not in self._adjacency or b not in self._adjacency:
            return None
        try:
            return nx.shortest_path_length(self._graph, a, b)
        except nx.NetworkXNoPath:
            return None

    def first_hop(self, a: str, b: str) -> Optional[str]:
        """Next node on a shortest path from a to b"""
        if a == b or a not in self._adjacency or b not in self._adjacency:
            return None
        try:
            path = nx.shortest_path(self._graph, a, b)
        except nx.NetworkXNoPath:
            return None
        return path[1]


def build_graph(maze: Maze) -> RelationGraph:
    """Relation graph whose edges are exactly the free-cell 4-adjacencies"""
    labels = []
    edges = []
    for cell in maze.free_cells():
        name = label_of(maze, cell)
        labels.append(name)
        # right and down only, so each undirected edge is emitted once
        for dr, dc in ((0, 1), (1, 0)):
            other = Coord(cell.row + dr, cell.col + dc)
            if maze.is_free(other):
                edges.append((name, label_of(maze, other)))
    return RelationGraph(
        width=maze.width,
        height=maze.height,
        labels=labels,
        edges=edges,
        start_label=label_of(maze, maze.start),
        goal_label=label_of(maze, maze.goal),
    )


def render_relations(g: RelationGraph) -> str:
    """Neighbour list per node, then the start/goal footer"""
    lines = []
    for node in sorted(g.labels, key=decode_label):
        neighbors = " ".join(g.neighbors(node))
        lines.append(f"{node}: {neighbors}".rstrip())
    lines.append(f"start={g.start_label} goal={g.goal_label}")
    return "\n".join(lines)
