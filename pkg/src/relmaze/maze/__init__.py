"""Grid maze model, environment and codecs"""

from .core import (
    GOAL_REWARD,
    STEP_REWARD,
    Coord,
    EpisodeLog,
    Maze,
    StepOutcome,
    distances_from,
    legal_moves,
    shortest_path,
    shortest_path_len,
    step,
    step_cap,
)
from .text import MazeDoc, emit_maze_doc, parse_ascii_grid, parse_maze_doc, read_maze_file

__all__ = [
    "GOAL_REWARD",
    "STEP_REWARD",
    "Coord",
    "EpisodeLog",
    "Maze",
    "StepOutcome",
    "distances_from",
    "legal_moves",
    "shortest_path",
    "shortest_path_len",
    "step",
    "step_cap",
    "MazeDoc",
    "emit_maze_doc",
    "parse_ascii_grid",
    "parse_maze_doc",
    "read_maze_file",
]
