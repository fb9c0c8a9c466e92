"""Run one method over a maze suite, one independent engine per maze"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict

from ..config.settings import PROMPT_ONLY_METHODS, ProposerConfig, RunConfig
from ..curriculum.generator import Curriculum, llm_curriculum, no_curriculum, reverse_walk_curriculum
from ..curriculum.trainer import StageResult, run_curriculum_training
from ..engine.episode import run_episode
from ..engine.qtable import QTable
from ..engine.replay import ReplayBuffer
from ..engine.sampler import ActionSampler
from ..errors import ConfigError
from ..llm_backend.interface import LLMBackend
from ..maze.core import EpisodeLog, Maze, shortest_path_len
from ..proposer.factory import create_proposer
from ..proposer.llm import LLMProposer, TranscriptEntry
from ..relations.graph import RelationGraph, build_graph
from .suite import SuiteEntry

logger = logging.getLogger(__name__)


class MazeResult(BaseModel):
    """Everything one maze produced: the evaluation episode plus its training history"""
    maze_id: str
    size_class: str
    maze: Maze
    oracle_length: Optional[int]
    evaluation: EpisodeLog
    logs: List[EpisodeLog]
    stages: List[StageResult] = []
    curriculum: Optional[Dict[str, Any]] = None
    # episode index within the true-start stage
    first_success_episode: Optional[int] = None


class MazeRun(BaseModel):
    """In-memory outcome of one maze, including artifacts that do not go in the report"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    result: MazeResult
    q_table: Optional[QTable] = None
    transcripts: List[TranscriptEntry] = []


def _curriculum_for(
    maze: Maze,
    graph: RelationGraph,
    cfg: RunConfig,
    seed: int,
    backend: Optional[LLMBackend],
) -> Curriculum:
    cc = cfg.curriculum
    if cfg.method.name != "curriculum-q" or cc.mode == "none":
        return no_curriculum(maze)
    if cc.mode == "llm":
        if backend is None:
            raise ConfigError("curriculum.mode", "llm curriculum needs a gateway backend")
        return llm_curriculum(maze, graph, backend, cc.stage_count, cc.walk_len, seed)
    return reverse_walk_curriculum(maze, cc.stage_count, cc.walk_len, seed)


def run_maze(
    maze_id: str,
    maze: Maze,
    cfg: RunConfig,
    index: int = 0,
    backend: Optional[LLMBackend] = None,
    q: Optional[QTable] = None,
) -> MazeRun:
    """Run the configured method on one maze with seed ``sampler.seed + index``"""
    seed = cfg.sampler.seed + index
    sampler_cfg = cfg.sampler.model_copy(update={"seed": seed})
    graph = build_graph(maze)
    oracle = shortest_path_len(maze)
    size_class = f"{maze.height}x{maze.width}"
    method = cfg.method.name

    proposer_cfg: ProposerConfig = cfg.proposer
    if method == "naive":
        proposer_cfg = proposer_cfg.model_copy(update={"prompt_style": "coordinate"})
    elif method == "prompt-relational":
        proposer_cfg = proposer_cfg.model_copy(update={"prompt_style": "relational"})
    proposer = create_proposer(
        proposer_cfg,
        backend=backend,
        seed=seed,
        max_exemplars=sampler_cfg.exemplar_count,
        tag=maze_id,
    )

    if method in PROMPT_ONLY_METHODS:
        # proposer on every step, nothing learned carries over
        prompt_cfg = sampler_cfg.model_copy(
            update={"epsilon": 0.0, "proposer_probability": "one_minus_epsilon",
                    "epsilon_final": None, "exemplar_count": 0}
        )
        table = QTable(graph)
        log = run_episode(
            maze, graph, table, ReplayBuffer(prompt_cfg.buffer_capacity), prompt_cfg,
            proposer, maze.start, sampler=ActionSampler(prompt_cfg), maze_id=maze_id,
        )
        result = MazeResult(
            maze_id=maze_id, size_class=size_class, maze=maze, oracle_length=oracle,
            evaluation=log, logs=[log], first_success_episode=0 if log.reached_goal else None,
        )
        run = MazeRun(result=result, q_table=table)
    else:
        curriculum = _curriculum_for(maze, graph, cfg, seed, backend)
        training = run_curriculum_training(
            maze, graph, sampler_cfg, proposer, curriculum,
            stage_budget=cfg.curriculum.stage_budget,
            total_episode_cap=cfg.curriculum.total_episode_cap,
            q=q,
            maze_id=maze_id,
        )
        result = MazeResult(
            maze_id=maze_id,
            size_class=size_class,
            maze=maze,
            oracle_length=oracle,
            evaluation=training.evaluation_log,
            logs=training.logs,
            stages=training.stages,
            first_success_episode=training.first_success_episode,
            curriculum=curriculum.to_report(),
        )
        run = MazeRun(result=result, q_table=training.q_table)

    if isinstance(proposer, LLMProposer):
        run.transcripts = list(proposer.transcripts)
    logger.info(
        "%s: %s in %d steps (oracle %s, %d episodes)",
        maze_id,
        "solved" if result.evaluation.reached_goal else "failed",
        result.evaluation.step_count,
        oracle,
        len(result.logs),
    )
    return run


def run_campaign(
    entries: List[SuiteEntry],
    cfg: RunConfig,
    backend: Optional[LLMBackend] = None,
) -> List[MazeRun]:
    """Per-maze runs on a worker pool; results come back in suite order"""
    logger.info("campaign: %d mazes, method=%s, proposer=%s, workers=%d",
                len(entries), cfg.method.name, cfg.proposer.kind, cfg.workers)
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        futures = [
            pool.submit(run_maze, e.id, e.maze, cfg, i, backend)
            for i, e in enumerate(entries)
        ]
        return [f.result() for f in futures]
