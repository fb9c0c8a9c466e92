"""End-to-end runs behind ``relmaze run``: a single maze file or a whole suite"""

import logging
from pathlib import Path
from typing import Optional

from ..bench.campaign import run_campaign, run_maze
from ..bench.report import RunReport, build_report, write_run_artifacts
from ..bench.suite import load_suite
from ..config.settings import RunConfig
from ..engine.qtable import QTable
from ..errors import ConfigError, LabelError, MazeParseError, RelmazeError
from ..llm_backend.factory import create_llm_backend
from ..llm_backend.interface import LLMBackend
from ..maze.core import Maze
from ..maze.extraction import extract_maze
from ..maze.text import read_maze_file
from ..relations.graph import build_graph

logger = logging.getLogger(__name__)


def _backend_for(cfg: RunConfig) -> Optional[LLMBackend]:
    return create_llm_backend(cfg.gateway) if cfg.uses_gateway() else None


def load_maze(cfg: RunConfig, backend: Optional[LLMBackend]) -> Maze:
    if cfg.maze_path is None:
        raise ConfigError("maze_path", "no maze file given")
    if cfg.maze_format == "text":
        try:
            description = Path(cfg.maze_path).read_text(encoding="utf-8")
        except OSError as e:
            raise MazeParseError(f"cannot read maze file {cfg.maze_path}: {e}")
        return extract_maze(backend, description)
    return read_maze_file(cfg.maze_path, cfg.maze_format)


def _resume(cfg: RunConfig, maze: Maze) -> Optional[QTable]:
    if cfg.resume_qtable is None:
        return None
    try:
        text = Path(cfg.resume_qtable).read_text(encoding="utf-8")
        return QTable.from_snapshot(text, build_graph(maze))
    except (OSError, ValueError, LabelError) as e:
        raise ConfigError("resume_qtable", f"cannot resume from {cfg.resume_qtable}: {e}")


def _log_usage(backend: Optional[LLMBackend]) -> None:
    if backend is not None:
        ledger = backend.ledger
        logger.info("gateway: %d requests, %d failed, %.1fs total latency",
                    ledger.requests, ledger.failures, ledger.total_latency)


def execute(cfg: RunConfig) -> RunReport:
    """Run the configured maze or suite and write artifacts once everything finished"""
    if (cfg.maze_path is None) == (cfg.suite_path is None):
        raise ConfigError("maze_path", "give exactly one of a maze file or a suite file")
    backend = _backend_for(cfg)

    if cfg.maze_path is not None:
        maze = load_maze(cfg, backend)
        maze_id = Path(cfg.maze_path).stem
        runs = [run_maze(maze_id, maze, cfg, 0, backend, _resume(cfg, maze))]
    else:
        if cfg.resume_qtable is not None:
            raise ConfigError("resume_qtable", "resuming is only supported for a single maze")
        _, entries = load_suite(cfg.suite_path)
        if not entries:
            raise MazeParseError(f"suite file {cfg.suite_path} contains no mazes")
        runs = run_campaign(entries, cfg, backend)

    report = build_report(runs, cfg.echo())
    write_run_artifacts(cfg.out_dir, report, runs)
    _log_usage(backend)
    return report


def main_run(cfg: RunConfig) -> int:
    """Exit status: 0 on completion (planning failure included), else the error's code"""
    try:
        report = execute(cfg)
    except RelmazeError as e:
        logger.error("%s: %s", type(e).__name__, e)
        return e.exit_code
    if report.overall.success_rate < 1.0:
        logger.info("run finished with success rate %.2f", report.overall.success_rate)
    return 0
