"""Grid maze model and episodic environment"""

from collections import deque
from typing import Dict, FrozenSet, List, NamedTuple, Optional

from pydantic import BaseModel, ConfigDict, field_serializer, model_validator

from ..errors import InvalidPositionError, MazeValidationError

STEP_REWARD = -1.0
GOAL_REWARD = 30.0

# up, down, left, right
_DIRECTIONS = ((-1, 0), (1, 0), (0, -1), (0, 1))


class Coord(NamedTuple):
    """Grid cell as (row, col)"""
    row: int
    col: int


class Maze(BaseModel):
    """Rectangular 4-connected grid maze"""
    model_config = ConfigDict(frozen=True)

    width: int
    height: int
    start: Coord
    goal: Coord
    obstacles: FrozenSet[Coord] = frozenset()
    allow_degenerate: bool = False

    @field_serializer("obstacles")
    def _sorted_obstacles(self, obstacles: FrozenSet[Coord]) -> List[Coord]:
        return sorted(obstacles)

    @model_validator(mode="after")
    def _check_invariants(self) -> "Maze":
        if self.width < 1 or self.height < 1:
            raise MazeValidationError("size", f"must be positive, got {self.height}x{self.width}")
        for name, cell in (("start", self.start), ("goal", self.goal)):
            if not self.in_bounds(cell):
                raise MazeValidationError(name, f"{tuple(cell)} out of bounds")
            if cell in self.obstacles:
                raise MazeValidationError(name, f"{name} on obstacle")
        for cell in self.obstacles:
            if not self.in_bounds(cell):
                raise MazeValidationError("obstacles", f"{tuple(cell)} out of bounds")
        if self.start == self.goal and not self.allow_degenerate:
            raise MazeValidationError("goal", "start equals goal")
        return self

    @property
    def cell_count(self) -> int:
        return self.width * self.height

    def in_bounds(self, cell: Coord) -> bool:
        return 0 <= cell[0] < self.height and 0 <= cell[1] < self.width

    def is_free(self, cell: Coord) -> bool:
        return self.in_bounds(cell) and Coord(*cell) not in self.obstacles

    def free_cells(self) -> List[Coord]:
        """Free cells in row-major order"""
        return [
            Coord(r, c)
            for r in range(self.height)
            for c in range(self.width)
            if Coord(r, c) not in self.obstacles
        ]


class StepOutcome(BaseModel):
    """Result of attempting one move"""
    model_config = ConfigDict(frozen=True)

    next: Coord
    reward: float
    terminal: bool = False
    rejected: bool = False


class EpisodeLog(BaseModel):
    """Trajectory of a single episode"""
    maze_id: str
    visited: List[Coord]
    rewards: List[float]
    reached_goal: bool
    step_count: int
    stage_index: int = 0
    episode_index: int = 0
    rejected_moves: int = 0
    proposer_calls: int = 0
    proposer_fallbacks: int = 0

    @model_validator(mode="after")
    def _check_lengths(self) -> "EpisodeLog":
        if not (self.step_count == len(self.rewards) == len(self.visited) - 1):
            raise ValueError(
                f"inconsistent episode log: step_count={self.step_count}, "
                f"rewards={len(self.rewards)}, visited={len(self.visited)}"
            )
        return self

    @property
    def total_return(self) -> float:
        return sum(self.rewards)


def _require_free(maze: Maze, at: Coord) -> None:
    if not maze.in_bounds(at):
        raise InvalidPositionError(f"{tuple(at)} is outside the {maze.height}x{maze.width} maze")
    if Coord(*at) in maze.obstacles:
        raise InvalidPositionError(f"{tuple(at)} is an obstacle")


def legal_moves(maze: Maze, at: Coord) -> FrozenSet[Coord]:
    """4-neighbours of a free cell that are in bounds and free"""
    _require_free(maze, at)
    moves = set()
    for dr, dc in _DIRECTIONS:
        cell = Coord(at[0] + dr, at[1] + dc)
        if maze.is_free(cell):
            moves.add(cell)
    return frozenset(moves)


def step(maze: Maze, at: Coord, to: Coord) -> StepOutcome:
    """Attempt a move; illegal targets are rejected in place with the step penalty"""
    at = Coord(*at)
    if Coord(*to) not in legal_moves(maze, at):
        return StepOutcome(next=at, reward=STEP_REWARD, terminal=False, rejected=True)
    to = Coord(*to)
    if to == maze.goal:
        return StepOutcome(next=to, reward=GOAL_REWARD, terminal=True)
    return StepOutcome(next=to, reward=STEP_REWARD)


def step_cap(maze: Maze) -> int:
    """Episode step limit"""
    return 4 * maze.width * maze.height


def distances_from(maze: Maze, source: Coord) -> Dict[Coord, int]:
    """BFS move distances from source to every reachable free cell"""
    _require_free(maze, source)
    source = Coord(*source)
    dist = {source: 0}
    queue = deque([source])
    while queue:
        cur = queue.popleft()
        for nxt in legal_moves(maze, cur):
            if nxt not in dist:
                dist[nxt] = dist[cur] + 1
                queue.append(nxt)
    return dist


def shortest_path(maze: Maze, source: Optional[Coord] = None,
                  target: Optional[Coord] = None) -> Optional[List[Coord]]:
    """One shortest path (inclusive of both ends), or None if unreachable"""
    source = Coord(*(source if source is not None else maze.start))
    target = Coord(*(target if target is not None else maze.goal))
    came_from: Dict[Coord, Optional[Coord]] = {source: None}
    queue = deque([source])
    while queue:
        cur = queue.popleft()
        if cur == target:
            break
        for nxt in sorted(legal_moves(maze, cur)):
            if nxt not in came_from:
                came_from[nxt] = cur
                queue.append(nxt)
    if target not in came_from:
        return None
    path = [target]
    while came_from[path[-1]] is not None:
        path.append(came_from[path[-1]])
    return list(reversed(path))


def shortest_path_len(maze: Maze) -> Optional[int]:
    """BFS distance start to goal in moves; None when unreachable"""
    return distances_from(maze, maze.start).get(maze.goal)
