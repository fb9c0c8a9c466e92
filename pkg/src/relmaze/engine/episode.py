"""Single-episode loop: sample, step, update, remember"""

import logging
from typing import List, Optional

from ..config.settings import SamplerConfig
from ..errors import LabelError
from ..maze.core import Coord, EpisodeLog, Maze, step, step_cap
from ..proposer.interface import ProposalContext, Proposer
from ..relations.graph import RelationGraph
from .qtable import QTable
from .replay import ExperienceTuple, ReplayBuffer, retrieve_similar
from .sampler import PROPOSER_BRANCH, ActionSampler, update_q

logger = logging.getLogger(__name__)


def _target_of(graph: RelationGraph, action: str, fallback: Coord) -> Coord:
    try:
        return graph.coord(action)
    except LabelError:
        # unknown labels become a stay-in-place attempt, which the maze rejects
        return fallback


def run_episode(
    maze: Maze,
    graph: RelationGraph,
    q: QTable,
    buf: ReplayBuffer,
    cfg: SamplerConfig,
    proposer: Proposer,
    start_at: Coord,
    *,
    sampler: Optional[ActionSampler] = None,
    epsilon: Optional[float] = None,
    maze_id: str = "maze",
    stage_index: int = 0,
    episode_index: int = 0,
) -> EpisodeLog:
    """Run until the goal or the step cap; mutates q and buf in place"""
    sampler = sampler or ActionSampler(cfg)
    position = Coord(*start_at)
    visited: List[Coord] = [position]
    rewards: List[float] = []
    rejected = calls = fallbacks = 0
    reached = position == maze.goal
    cap = step_cap(maze)

    while not reached and len(rewards) < cap:
        current = graph.label(position)
        budget_left = cap - len(rewards)

        def context() -> ProposalContext:
            exemplars = (
                retrieve_similar(buf, graph, current, cfg.exemplar_count)
                if proposer.uses_exemplars else []
            )
            return ProposalContext(
                graph=graph,
                current=current,
                goal=graph.goal_label,
                q_row=q.row(current),
                exemplars=exemplars,
                step_budget_left=budget_left,
            )

        choice = sampler.sample(q, current, proposer, context, epsilon=epsilon)
        if choice.branch == PROPOSER_BRANCH or choice.fallback:
            calls += 1
        fallbacks += int(choice.fallback)

        outcome = step(maze, position, _target_of(graph, choice.action, position))
        rejected += int(outcome.rejected)

        t = ExperienceTuple(
            s=current,
            a=choice.action,
            r=outcome.reward,
            s_next=graph.label(outcome.next),
            rejected=outcome.rejected,
        )
        t.q = update_q(cfg, q, t, outcome.terminal)
        buf.append(t)

        position = outcome.next
        visited.append(position)
        rewards.append(outcome.reward)
        reached = outcome.terminal

    logger.debug(
        "episode %s stage=%d ep=%d: %s in %d steps (%d rejected, %d fallbacks)",
        maze_id, stage_index, episode_index,
        "goal" if reached else "cap", len(rewards), rejected, fallbacks,
    )
    return EpisodeLog(
        maze_id=maze_id,
        visited=visited,
        rewards=rewards,
        reached_goal=reached,
        step_count=len(rewards),
        stage_index=stage_index,
        episode_index=episode_index,
        rejected_moves=rejected,
        proposer_calls=calls,
        proposer_fallbacks=fallbacks,
    )


def greedy_rollout(maze: Maze, graph: RelationGraph, q: QTable, start_at: Coord,
                   maze_id: str = "maze") -> EpisodeLog:
    """Follow the Q argmax without learning"""
    position = Coord(*start_at)
    visited = [position]
    rewards: List[float] = []
    reached = position == maze.goal
    cap = step_cap(maze)
    while not reached and len(rewards) < cap:
        action = q.best_action(graph.label(position))
        target = graph.coord(action) if action is not None else position
        outcome = step(maze, position, target)
        position = outcome.next
        visited.append(position)
        rewards.append(outcome.reward)
        reached = outcome.terminal
    return EpisodeLog(maze_id=maze_id, visited=visited, rewards=rewards,
                      reached_goal=reached, step_count=len(rewards))
