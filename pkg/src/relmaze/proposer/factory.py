"""Factory for creating proposer instances"""

from typing import Optional

from ..config.settings import ProposerConfig
from ..errors import ConfigError
from ..llm_backend.interface import LLMBackend
from .builtin import GreedyBlindProposer, OracleProposer, ScriptedProposer, UniformRandomProposer
from .interface import Proposer
from .llm import LLMProposer

AVAILABLE_PROPOSERS = {
    "oracle": OracleProposer,
    "greedy-blind": GreedyBlindProposer,
    "scripted": ScriptedProposer,
    "uniform-random": UniformRandomProposer,
    "llm": LLMProposer,
}


def create_proposer(
    config: ProposerConfig,
    backend: Optional[LLMBackend] = None,
    seed: int = 0,
    max_exemplars: int = 4,
    tag: str = "",
) -> Proposer:
    """Create a fresh proposer; stateful kinds must not be shared between mazes"""
    if config.kind == "oracle":
        return OracleProposer()
    if config.kind == "greedy-blind":
        return GreedyBlindProposer()
    if config.kind == "scripted":
        return ScriptedProposer(config.load_script())
    if config.kind == "uniform-random":
        return UniformRandomProposer(seed)
    if config.kind == "llm":
        if backend is None:
            raise ConfigError("proposer.kind", "llm proposer needs a gateway backend")
        return LLMProposer(backend, prompt_style=config.prompt_style, max_exemplars=max_exemplars, tag=tag)
    available = ", ".join(AVAILABLE_PROPOSERS)
    raise ConfigError("proposer.kind", f"unknown proposer '{config.kind}'. Available: {available}")
