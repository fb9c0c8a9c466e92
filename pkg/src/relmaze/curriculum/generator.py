"""Reverse curriculum generation: intermediate start cells, easiest first"""

import logging
import math
import re
from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel

from ..errors import ConsistencyError, GatewayError
from ..llm_backend.interface import LLMBackend
from ..maze.core import Coord, Maze, distances_from, legal_moves
from ..relations.graph import RelationGraph, render_relations

logger = logging.getLogger(__name__)

MAX_WALK_ATTEMPTS = 20

CURRICULUM_SYSTEM = (
    "You design training curricula for a maze-solving agent. "
    "Easy courses start close to the goal, harder ones further away."
)

_STAGE_PATTERN = re.compile(r"C(\d+)\s*:\s*([A-Z]+)")


class Curriculum(BaseModel):
    """Ordered stage start cells, ending with the true start"""
    stages: List[Coord]
    mode: str = "reverse-walk"
    fallback: bool = False
    backfilled: int = 0

    def to_report(self) -> Dict[str, object]:
        return {
            "stages": [list(c) for c in self.stages],
            "mode": self.mode,
            "fallback": self.fallback,
            "backfilled": self.backfilled,
        }


def default_walk_len(maze: Maze) -> int:
    return max(1, math.ceil((maze.width + maze.height) / 4))


def validate_curriculum(maze: Maze, curriculum: Curriculum) -> None:
    """Raise ConsistencyError unless stages are reachable, ordered and end at start"""
    if not curriculum.stages or curriculum.stages[-1] != maze.start:
        raise ConsistencyError("curriculum must end with the maze start")
    dist = distances_from(maze, maze.goal)
    previous = -1
    for stage in curriculum.stages:
        if stage not in dist:
            raise ConsistencyError(f"stage {tuple(stage)} is blocked or cannot reach the goal")
        if dist[stage] < previous:
            raise ConsistencyError(f"stage {tuple(stage)} is easier than the stage before it")
        previous = dist[stage]


def _finalize(maze: Maze, candidates: List[Coord], dist: Dict[Coord, int]) -> List[Coord]:
    """Dedupe, order by distance to goal, drop stages harder than the start, append start"""
    limit = dist.get(maze.start, math.inf)
    unique: List[Coord] = []
    for c in candidates:
        if c not in unique and c in dist and c not in (maze.start, maze.goal):
            unique.append(c)
    # stable sort keeps generation order among equal distances
    ordered = sorted(unique, key=lambda c: dist[c])
    return [c for c in ordered if dist[c] <= limit] + [maze.start]


def _random_walk(maze: Maze, rng: np.random.Generator, length: int) -> Coord:
    pos = maze.goal
    for _ in range(length):
        moves = sorted(legal_moves(maze, pos))
        if not moves:
            break
        pos = moves[int(rng.integers(len(moves)))]
    return pos


def _walk_candidates(maze: Maze, stage_count: int, walk_len: int, rng: np.random.Generator) -> List[Coord]:
    found: List[Coord] = []
    for i in range(1, stage_count + 1):
        for _ in range(MAX_WALK_ATTEMPTS):
            end = _random_walk(maze, rng, i * walk_len)
            if end not in (maze.start, maze.goal):
                found.append(end)
                break
        else:
            logger.debug("no stage %d found for a %dx%d maze", i, maze.height, maze.width)
    return found


def reverse_walk_curriculum(
    maze: Maze,
    stage_count: int = 2,
    walk_len: Optional[int] = None,
    seed: int = 0,
) -> Curriculum:
    """Stage i ends a seeded random walk of i * walk_len moves from the goal"""
    walk_len = walk_len or default_walk_len(maze)
    rng = np.random.default_rng(seed)
    dist = distances_from(maze, maze.goal)
    stages = _finalize(maze, _walk_candidates(maze, stage_count, walk_len, rng), dist)
    return Curriculum(stages=stages, mode="reverse-walk")


def no_curriculum(maze: Maze) -> Curriculum:
    return Curriculum(stages=[maze.start], mode="none")


def build_curriculum_prompt(graph: RelationGraph, stage_count: int) -> str:
    names = ", ".join(f"C{i}: <label>" for i in range(1, stage_count + 1))
    return "\n".join([
        "The maze is given as a relation network. "
        'Each line "X: Y Z" means node X is directly connected to nodes Y and Z.',
        "",
        "Relation network:",
        render_relations(graph),
        "",
        f"Pick {stage_count} intermediate starting nodes between node {graph.start_label} "
        f"and goal node {graph.goal_label}. C1 must be the easiest (closest to the goal), "
        "each later course a little harder.",
        f"Answer exactly in the form: {names}",
    ])


def parse_curriculum_reply(reply: str) -> List[str]:
    """Labels in course order; repeated course numbers keep the first occurrence"""
    by_index: Dict[int, str] = {}
    for match in _STAGE_PATTERN.finditer(reply):
        by_index.setdefault(int(match.group(1)), match.group(2))
    return [by_index[i] for i in sorted(by_index)]


def llm_curriculum(
    maze: Maze,
    graph: RelationGraph,
    backend: LLMBackend,
    stage_count: int = 2,
    walk_len: Optional[int] = None,
    seed: int = 0,
) -> Curriculum:
    """Stages named by the model; invalid ones are dropped and refilled from a reverse walk"""
    walked = reverse_walk_curriculum(maze, stage_count, walk_len, seed)
    try:
        reply = backend.complete(CURRICULUM_SYSTEM, build_curriculum_prompt(graph, stage_count))
    except GatewayError as e:
        logger.warning("curriculum request failed, using reverse walk: %s", e)
        return walked.model_copy(update={"mode": "llm", "fallback": True})

    dist = distances_from(maze, maze.goal)
    chosen: List[Coord] = []
    for label in parse_curriculum_reply(reply):
        if not graph.has_node(label):
            logger.info("curriculum stage %s dropped: not a free node", label)
            continue
        cell = graph.coord(label)
        if cell in (maze.start, maze.goal) or cell not in dist or cell in chosen:
            logger.info("curriculum stage %s dropped", label)
            continue
        chosen.append(cell)
        if len(chosen) == stage_count:
            break

    backfilled = 0
    for cell in walked.stages[:-1]:
        if len(chosen) >= stage_count:
            break
        if cell not in chosen:
            chosen.append(cell)
            backfilled += 1

    return Curriculum(stages=_finalize(maze, chosen, dist), mode="llm", backfilled=backfilled)
