"""Deterministic and seeded proposers that need no remote model"""

import threading
from typing import List, Optional, Sequence

import numpy as np

from ..errors import ProposerError, ScriptExhaustedError
from ..relations.labels import decode_label
from .interface import Proposal, ProposalContext, Proposer


class OracleProposer(Proposer):
    """First hop of a BFS shortest path on the relation graph"""

    @property
    def name(self) -> str:
        return "oracle"

    def propose(self, ctx: ProposalContext) -> Proposal:
        hop = ctx.graph.first_hop(ctx.current, ctx.goal)
        if hop is None:
            neighbors = ctx.graph.neighbors(ctx.current)
            if not neighbors:
                raise ProposerError(f"node {ctx.current} has no neighbours")
            return Proposal(action=neighbors[0], rationale="goal unreachable")
        return Proposal(action=hop, rationale="shortest path")


class GreedyBlindProposer(Proposer):
    """Steps toward the goal by Manhattan distance, blind to obstacles

    Candidates are the four geometric neighbours, obstacles included; ties go to
    the lowest label index. On a maze whose straight-line route is walled off it
    keeps walking into the wall.
    """

    @property
    def name(self) -> str:
        return "greedy-blind"

    def propose(self, ctx: ProposalContext) -> Proposal:
        g = ctx.graph
        here = g.coord(ctx.current)
        goal = g.coord(ctx.goal)
        best: Optional[str] = None
        best_key = None
        for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            r, c = here.row + dr, here.col + dc
            if not (0 <= r < g.height and 0 <= c < g.width):
                continue
            label = g.label((r, c))
            key = (abs(goal.row - r) + abs(goal.col - c), decode_label(label))
            if best_key is None or key < best_key:
                best, best_key = label, key
        if best is None:
            raise ProposerError(f"node {ctx.current} has no geometric neighbours")
        return Proposal(action=best, rationale="closest to goal in a straight line")


class ScriptedProposer(Proposer):
    """Replays a fixed list of labels, then fails"""

    def __init__(self, script: Sequence[str]):
        self.script: List[str] = list(script)
        self._cursor = 0
        self._lock = threading.Lock()

    @property
    def name(self) -> str:
        return "scripted"

    def propose(self, ctx: ProposalContext) -> Proposal:
        with self._lock:
            if self._cursor >= len(self.script):
                raise ScriptExhaustedError("script exhausted")
            action = self.script[self._cursor]
            self._cursor += 1
        return Proposal(action=action, rationale="scripted")


class UniformRandomProposer(Proposer):
    """Uniform choice among graph neighbours from a seeded stream"""

    def __init__(self, seed: int = 0):
        self._rng = np.random.default_rng(seed)

    @property
    def name(self) -> str:
        return "uniform-random"

    def propose(self, ctx: ProposalContext) -> Proposal:
        neighbors = ctx.graph.neighbors(ctx.current)
        if not neighbors:
            raise ProposerError(f"node {ctx.current} has no neighbours")
        return Proposal(action=neighbors[int(self._rng.integers(len(neighbors)))], rationale="random")
