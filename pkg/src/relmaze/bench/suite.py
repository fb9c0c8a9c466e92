"""Seeded maze-suite generation and the suite file format"""

import json
import logging
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ValidationError

from ..config.settings import SizeClass, SuiteSpec
from ..errors import GenerationError, MazeParseError
from ..maze.core import Coord, Maze, shortest_path_len
from ..maze.text import maze_from_dict, maze_to_dict

logger = logging.getLogger(__name__)


class SuiteEntry(BaseModel):
    id: str
    maze: Maze

    @property
    def size_class(self) -> str:
        return f"{self.maze.height}x{self.maze.width}"


def _endpoints(size: SizeClass, placement: str, rng: np.random.Generator) -> Tuple[Coord, Coord]:
    h, w = size.height, size.width
    if placement == "corners":
        return Coord(0, 0), Coord(h - 1, w - 1)
    a, b = rng.choice(h * w, size=2, replace=False)
    return Coord(*divmod(int(a), w)), Coord(*divmod(int(b), w))


def _sample_maze(size: SizeClass, spec: SuiteSpec, rng: np.random.Generator) -> Maze:
    """Rejection-sample one solvable maze of the given size"""
    h, w = size.height, size.width
    if h * w < 2:
        raise GenerationError(f"a {h}x{w} maze cannot hold distinct start and goal")
    n_obs = int(round(size.obstacle_fraction * (h * w - 2)))
    for _ in range(spec.max_rejections):
        start, goal = _endpoints(size, spec.placement, rng)
        candidates = [Coord(r, c) for r in range(h) for c in range(w) if Coord(r, c) not in (start, goal)]
        picks = rng.choice(len(candidates), size=n_obs, replace=False) if n_obs else []
        maze = Maze(
            width=w,
            height=h,
            start=start,
            goal=goal,
            obstacles=frozenset(candidates[int(i)] for i in picks),
        )
        if shortest_path_len(maze) is not None:
            return maze
    raise GenerationError(
        f"no solvable {h}x{w} maze with obstacle fraction {size.obstacle_fraction} "
        f"after {spec.max_rejections} consecutive rejections"
    )


def generate_suite_entries(spec: SuiteSpec) -> List[SuiteEntry]:
    """Suite mazes with ids like ``5x5-007``, in size-class order"""
    rng = np.random.default_rng(spec.seed)
    entries: List[SuiteEntry] = []
    for size in spec.sizes:
        for i in range(size.count):
            maze = _sample_maze(size, spec, rng)
            entries.append(SuiteEntry(id=f"{size.height}x{size.width}-{i:03d}", maze=maze))
        logger.info("generated %d mazes of %dx%d", size.count, size.height, size.width)
    return entries


def generate_suite(spec: SuiteSpec) -> List[Maze]:
    return [e.maze for e in generate_suite_entries(spec)]


def dump_suite(entries: List[SuiteEntry], spec: Optional[SuiteSpec] = None) -> str:
    doc = {
        "spec": spec.model_dump(mode="json") if spec is not None else None,
        "mazes": [{"id": e.id, "maze": maze_to_dict(e.maze)} for e in entries],
    }
    return json.dumps(doc, indent=2)


def write_suite(path: Union[str, Path], entries: List[SuiteEntry], spec: Optional[SuiteSpec] = None) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_suite(entries, spec) + "\n", encoding="utf-8")


def load_suite(path: Union[str, Path]) -> Tuple[Optional[SuiteSpec], List[SuiteEntry]]:
    """Read a suite file written by write_suite"""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise MazeParseError(f"cannot read suite file {path}: {e}")
    except json.JSONDecodeError as e:
        raise MazeParseError(f"malformed suite file {path}: {e.msg}", offset=e.pos)
    if not isinstance(data, dict) or not isinstance(data.get("mazes"), list):
        raise MazeParseError(f"suite file {path} has no 'mazes' list")

    spec = None
    if data.get("spec") is not None:
        try:
            spec = SuiteSpec.model_validate(data["spec"])
        except ValidationError as e:
            raise MazeParseError(f"suite file {path} has an invalid spec: {e.errors()[0]['msg']}")

    entries = []
    for i, item in enumerate(data["mazes"]):
        if not isinstance(item, dict):
            raise MazeParseError(f"suite entry {i} is not an object")
        entries.append(SuiteEntry(id=str(item.get("id", f"maze-{i:03d}")), maze=maze_from_dict(item.get("maze"))))
    return spec, entries
