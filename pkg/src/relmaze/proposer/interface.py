"""Action-proposal contract shared by every proposer"""

from abc import ABC, abstractmethod
from typing import Dict, List

from pydantic import BaseModel, model_validator

from ..engine.replay import ExperienceTuple
from ..relations.graph import RelationGraph


class ProposalContext(BaseModel):
    """What a proposer sees at one step"""
    graph: RelationGraph
    current: str
    goal: str
    q_row: Dict[str, float]
    exemplars: List[ExperienceTuple] = []
    step_budget_left: int = 0

    @model_validator(mode="after")
    def _q_row_keys_are_neighbors(self) -> "ProposalContext":
        neighbors = set(self.graph.neighbors(self.current))
        stray = [a for a in self.q_row if a not in neighbors]
        if stray:
            raise ValueError(f"q_row keys {stray} are not neighbours of {self.current}")
        return self


class Proposal(BaseModel):
    """Next-hop node chosen by a proposer; legality is checked by the caller"""
    action: str
    rationale: str = ""


class Proposer(ABC):
    """Abstract base class for proposers"""

    # only proposers that render exemplars pay for replay retrieval
    uses_exemplars: bool = False

    @property
    @abstractmethod
    def name(self) -> str:
        """Proposer name"""
        pass

    @abstractmethod
    def propose(self, ctx: ProposalContext) -> Proposal:
        """Return a proposal; raise ProposerError if none can be made"""
        pass
