"""Maze document (JSON) and ASCII grid codecs

Coordinates are always ``[row, col]``. The JSON document is the same shape an
LLM is asked to produce when extracting a maze from prose:

    {"size": [height, width], "start": [r, c], "goal": [r, c], "obstacles": [[r, c], ...]}
"""

import json
from pathlib import Path
from typing import List, Tuple, Union

from pydantic import BaseModel, ConfigDict, StrictInt, ValidationError

from ..errors import MazeParseError
from .core import Coord, Maze

Pair = Tuple[StrictInt, StrictInt]

ASCII_FREE = "."
ASCII_WALL = "#"
ASCII_START = "S"
ASCII_GOAL = "G"


class MazeDoc(BaseModel):
    """Structured maze document"""
    model_config = ConfigDict(extra="forbid")

    size: Pair
    start: Pair
    goal: Pair
    obstacles: List[Pair] = []
    allow_degenerate: bool = False

    def to_maze(self, allow_degenerate: bool = False) -> Maze:
        height, width = self.size
        return Maze(
            width=width,
            height=height,
            start=Coord(*self.start),
            goal=Coord(*self.goal),
            obstacles=frozenset(Coord(*o) for o in self.obstacles),
            allow_degenerate=self.allow_degenerate or allow_degenerate,
        )

    @classmethod
    def from_maze(cls, maze: Maze) -> "MazeDoc":
        return cls(
            size=(maze.height, maze.width),
            start=tuple(maze.start),
            goal=tuple(maze.goal),
            obstacles=[tuple(o) for o in sorted(maze.obstacles)],
            allow_degenerate=maze.allow_degenerate,
        )


def _byte_offset(text: str, char_pos: int) -> int:
    return len(text[:char_pos].encode("utf-8"))


def parse_maze_doc(text: str, allow_degenerate: bool = False) -> Maze:
    """Parse a structured maze document into a validated Maze"""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise MazeParseError(f"malformed maze document: {e.msg}", offset=_byte_offset(text, e.pos))
    return maze_from_dict(data, allow_degenerate=allow_degenerate)


def maze_from_dict(data: object, allow_degenerate: bool = False) -> Maze:
    """Validate an already-decoded maze document"""
    if not isinstance(data, dict):
        raise MazeParseError("maze document must be a JSON object")
    try:
        doc = MazeDoc.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"]) or "document"
        raise MazeParseError(f"invalid maze document at '{where}': {first['msg']}")
    return doc.to_maze(allow_degenerate=allow_degenerate)


def emit_maze_doc(maze: Maze) -> str:
    """Canonical compact JSON; obstacles sorted row-major"""
    return json.dumps(maze_to_dict(maze), separators=(",", ":"))


def maze_to_dict(maze: Maze) -> dict:
    doc = MazeDoc.from_maze(maze)
    data = {
        "size": list(doc.size),
        "start": list(doc.start),
        "goal": list(doc.goal),
        "obstacles": [list(o) for o in doc.obstacles],
    }
    # written only when set, so ordinary documents keep four keys
    if doc.allow_degenerate:
        data["allow_degenerate"] = True
    return data


def parse_ascii_grid(text: str) -> Maze:
    """Parse a grid of '.', '#', 'S', 'G' rows"""
    rows = [line.rstrip("\r") for line in text.strip("\n").split("\n")]
    if not rows or not rows[0]:
        raise MazeParseError("empty grid")

    width = len(rows[0])
    starts: List[Coord] = []
    goals: List[Coord] = []
    obstacles = set()
    for r, line in enumerate(rows):
        if len(line) != width:
            raise MazeParseError(f"ragged grid: row {r} has {len(line)} cells, expected {width}")
        for c, ch in enumerate(line):
            if ch == ASCII_WALL:
                obstacles.add(Coord(r, c))
            elif ch == ASCII_START:
                starts.append(Coord(r, c))
            elif ch == ASCII_GOAL:
                goals.append(Coord(r, c))
            elif ch != ASCII_FREE:
                raise MazeParseError(f"unexpected character {ch!r} at row {r}, col {c}")

    if len(starts) != 1:
        raise MazeParseError(f"grid needs exactly one '{ASCII_START}', found {len(starts)}")
    if len(goals) != 1:
        raise MazeParseError(f"grid needs exactly one '{ASCII_GOAL}', found {len(goals)}")

    return Maze(width=width, height=len(rows), start=starts[0], goal=goals[0],
                obstacles=frozenset(obstacles))


def emit_ascii_grid(maze: Maze) -> str:
    lines = []
    for r in range(maze.height):
        row = []
        for c in range(maze.width):
            cell = Coord(r, c)
            if cell == maze.start:
                row.append(ASCII_START)
            elif cell == maze.goal:
                row.append(ASCII_GOAL)
            elif cell in maze.obstacles:
                row.append(ASCII_WALL)
            else:
                row.append(ASCII_FREE)
        lines.append("".join(row))
    return "\n".join(lines)


def read_maze_file(path: Union[str, Path], fmt: str = "auto") -> Maze:
    """Load a maze from a .json document or an ASCII grid file"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise MazeParseError(f"cannot read maze file {path}: {e}")
    if fmt == "json" or (fmt == "auto" and (path.suffix == ".json" or text.lstrip().startswith("{"))):
        return parse_maze_doc(text)
    if fmt in ("auto", "ascii"):
        return parse_ascii_grid(text)
    raise MazeParseError(f"unsupported maze format '{fmt}'")
