"""Staged training: run episodes from each curriculum stage until one succeeds"""

import logging
from typing import List, Optional

from pydantic import BaseModel, ConfigDict

from ..config.settings import SamplerConfig
from ..maze.core import Coord, EpisodeLog, Maze
from ..proposer.interface import Proposer
from ..relations.graph import RelationGraph
from ..engine.episode import run_episode
from ..engine.qtable import QTable
from ..engine.replay import ReplayBuffer
from ..engine.sampler import ActionSampler
from .generator import Curriculum

logger = logging.getLogger(__name__)

DEFAULT_STAGE_BUDGET = 20
DEFAULT_TOTAL_EPISODE_CAP = 30


class StageResult(BaseModel):
    coord: Coord
    episodes: int
    succeeded: bool
    budget_exhausted: bool


class TrainingResult(BaseModel):
    """Final Q-table, replay buffer and every episode log of one training run"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    q_table: QTable
    buffer: ReplayBuffer
    logs: List[EpisodeLog]
    stages: List[StageResult]

    @property
    def evaluation_log(self) -> Optional[EpisodeLog]:
        """Last episode run from the true start"""
        final = len(self.stages) - 1
        for log in reversed(self.logs):
            if log.stage_index == final:
                return log
        return None

    @property
    def first_success_episode(self) -> Optional[int]:
        """Episode index, counted within the true-start stage, of its first success"""
        return first_success_in_stage(self.logs, len(self.stages) - 1)


def first_success_in_stage(logs: List[EpisodeLog], stage_index: int) -> Optional[int]:
    for log in logs:
        if log.stage_index == stage_index and log.reached_goal:
            return log.episode_index
    return None


def run_curriculum_training(
    maze: Maze,
    graph: RelationGraph,
    cfg: SamplerConfig,
    proposer: Proposer,
    curriculum: Curriculum,
    stage_budget: int = DEFAULT_STAGE_BUDGET,
    total_episode_cap: int = DEFAULT_TOTAL_EPISODE_CAP,
    q: Optional[QTable] = None,
    buf: Optional[ReplayBuffer] = None,
    maze_id: str = "maze",
) -> TrainingResult:
    """One Q-table and replay buffer threaded through every stage

    Every stage takes at most ``stage_budget`` episodes from the shared
    ``total_episode_cap``. The final stage always gets at least one episode,
    even once the cap is spent.
    """
    q = q if q is not None else QTable(graph)
    buf = buf if buf is not None else ReplayBuffer(cfg.buffer_capacity)
    sampler = ActionSampler(cfg)
    logs: List[EpisodeLog] = []
    stages: List[StageResult] = []
    last = len(curriculum.stages) - 1

    for index, start_at in enumerate(curriculum.stages):
        remaining = total_episode_cap - len(logs)
        budget = max(min(stage_budget, remaining), 1 if index == last else 0)

        succeeded = False
        ran = 0
        while ran < budget and not succeeded:
            log = run_episode(
                maze, graph, q, buf, cfg, proposer, start_at,
                sampler=sampler,
                epsilon=cfg.epsilon_at(len(logs)),
                maze_id=maze_id,
                stage_index=index,
                episode_index=ran,
            )
            logs.append(log)
            ran += 1
            succeeded = log.reached_goal

        stages.append(StageResult(
            coord=start_at,
            episodes=ran,
            succeeded=succeeded,
            budget_exhausted=not succeeded,
        ))
        if not succeeded:
            logger.info("%s: stage %d at %s exhausted after %d episodes",
                        maze_id, index, tuple(start_at), ran)

    return TrainingResult(q_table=q, buffer=buf, logs=logs, stages=stages)
