"""Maze suites, campaigns, metrics and reports"""

from .metrics import heatmap, optimality_rate, success_rate
from .suite import SuiteEntry, generate_suite, generate_suite_entries, load_suite, write_suite

__all__ = [
    "heatmap",
    "optimality_rate",
    "success_rate",
    "SuiteEntry",
    "generate_suite",
    "generate_suite_entries",
    "load_suite",
    "write_suite",
]
