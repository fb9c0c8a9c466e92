"""Success rate, optimality rate and visit heatmaps"""

from typing import Iterable, Mapping, Sequence

import numpy as np

from ..errors import ConsistencyError, MetricUndefinedError
from ..maze.core import EpisodeLog, Maze


def success_rate(logs: Sequence[EpisodeLog]) -> float:
    """Successful episodes over all episodes"""
    if not logs:
        raise MetricUndefinedError("success rate of zero episodes")
    return sum(1 for log in logs if log.reached_goal) / len(logs)


def optimality_rate(logs: Sequence[EpisodeLog], oracle: Mapping[str, int]) -> float:
    """Shortest-path successes over successes (not over all episodes)

    ``oracle`` maps maze id to its BFS shortest path length.
    """
    successes = [log for log in logs if log.reached_goal]
    if not successes:
        raise MetricUndefinedError("optimality rate with zero successes")
    optimal = 0
    for log in successes:
        if log.maze_id not in oracle:
            raise ConsistencyError(f"no oracle length for maze {log.maze_id}")
        best = oracle[log.maze_id]
        if log.step_count < best:
            raise ConsistencyError(
                f"maze {log.maze_id}: episode of {log.step_count} steps beats the shortest path {best}"
            )
        optimal += int(log.step_count == best)
    return optimal / len(successes)


def heatmap(logs: Iterable[EpisodeLog], maze: Maze) -> np.ndarray:
    """Visit counts per cell, shape (height, width)"""
    counts = np.zeros((maze.height, maze.width), dtype=np.int64)
    for log in logs:
        for cell in log.visited:
            if not maze.is_free(cell):
                raise ConsistencyError(
                    f"maze {log.maze_id}: visited {tuple(cell)} is not a free cell"
                )
            counts[cell[0], cell[1]] += 1
    return counts
