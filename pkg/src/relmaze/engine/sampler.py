"""Proposer-or-argmax action sampling and the one-step Q update"""

import logging
from functools import lru_cache
from typing import Callable, NamedTuple, Optional

import numpy as np

from ..config.settings import SamplerConfig
from ..errors import GatewayError, ProposerError
from ..proposer.interface import ProposalContext, Proposer
from .qtable import QTable
from .replay import ExperienceTuple

logger = logging.getLogger(__name__)

PROPOSER_BRANCH = "proposer"
ARGMAX_BRANCH = "argmax"


class SampledAction(NamedTuple):
    action: str
    branch: str
    fallback: bool = False


class ActionSampler:
    """Draws one uniform p per step from a seeded stream

    With the default orientation the proposer answers when p < 1 - epsilon and
    the Q-table argmax answers otherwise; ``proposer_probability="epsilon"``
    swaps the two.
    """

    def __init__(self, cfg: SamplerConfig, rng: Optional[np.random.Generator] = None):
        self.cfg = cfg
        self.rng = rng if rng is not None else np.random.default_rng(cfg.seed)

    def proposer_threshold(self, epsilon: float) -> float:
        if self.cfg.proposer_probability == "epsilon":
            return epsilon
        return 1.0 - epsilon

    def sample(
        self,
        q: QTable,
        current: str,
        proposer: Proposer,
        context: Callable[[], ProposalContext],
        epsilon: Optional[float] = None,
    ) -> SampledAction:
        eps = self.cfg.epsilon if epsilon is None else epsilon
        p = self.rng.random()
        if p < self.proposer_threshold(eps):
            try:
                proposal = proposer.propose(context())
                return SampledAction(proposal.action, PROPOSER_BRANCH)
            except (ProposerError, GatewayError) as e:
                logger.debug("proposer %s failed at %s, using argmax: %s", proposer.name, current, e)
                return SampledAction(_argmax(q, current), ARGMAX_BRANCH, fallback=True)
        return SampledAction(_argmax(q, current), ARGMAX_BRANCH)


def _argmax(q: QTable, current: str) -> str:
    best = q.best_action(current)
    # an isolated node has no action; staying put is rejected by the environment
    return best if best is not None else current


@lru_cache(maxsize=None)
def _stream_for(cfg_json: str) -> ActionSampler:
    return ActionSampler(SamplerConfig.model_validate_json(cfg_json))


def sample_action(
    cfg: SamplerConfig,
    q: QTable,
    ctx: ProposalContext,
    proposer: Proposer,
    rng: Optional[np.random.Generator] = None,
) -> str:
    """One draw of the proposer/argmax rule for a prepared context

    Without an explicit ``rng`` the draw continues the stream kept for ``cfg``,
    so repeated calls with one config see successive values of its seed.
    """
    sampler = ActionSampler(cfg, rng) if rng is not None else _stream_for(cfg.model_dump_json())
    return sampler.sample(q, ctx.current, proposer, lambda: ctx).action


def update_q(cfg: SamplerConfig, q: QTable, t: ExperienceTuple, terminal: bool) -> float:
    """Q(s,a) += alpha * (r + gamma * max_a' Q(s',a') * [not terminal] - Q(s,a))"""
    old = q.get(t.s, t.a)
    future = 0.0 if terminal else cfg.gamma * q.max_value(t.s_next)
    new = old + cfg.alpha * (t.r + future - old)
    q.set(t.s, t.a, new)
    return new
