"""Reverse curricula and staged Q-learning"""

from .generator import (
    Curriculum,
    llm_curriculum,
    no_curriculum,
    reverse_walk_curriculum,
    validate_curriculum,
)
from .trainer import StageResult, TrainingResult, run_curriculum_training

__all__ = [
    "Curriculum",
    "llm_curriculum",
    "no_curriculum",
    "reverse_walk_curriculum",
    "validate_curriculum",
    "StageResult",
    "TrainingResult",
    "run_curriculum_training",
]
