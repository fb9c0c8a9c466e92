"""Turn a prose maze description into a Maze through an LLM"""

import logging

from ..errors import ExtractionError, MazeParseError
from ..llm_backend.extraction import extract_json_block
from ..llm_backend.interface import LLMBackend
from .core import Maze
from .text import parse_maze_doc

logger = logging.getLogger(__name__)

EXTRACTION_SYSTEM = (
    "You convert maze descriptions into JSON. Reply with one JSON object and nothing else."
)

EXTRACTION_EXEMPLAR = """Convert the maze description into JSON with exactly these keys:
"size" as [height, width], "start" as [row, col], "goal" as [row, col],
"obstacles" as a list of [row, col]. Rows and columns count from 0.

Example description:
The maze is 3 rows by 4 columns. You start at (0,0) and must reach (2,3).
Cells (1,1) and (1,2) are blocked.
Example answer:
{"size": [3, 4], "start": [0, 0], "goal": [2, 3], "obstacles": [[1, 1], [1, 2]]}

Description:
"""


def build_extraction_prompt(description: str) -> str:
    return EXTRACTION_EXEMPLAR + description.strip() + "\nAnswer:"


def extract_maze(backend: LLMBackend, description: str) -> Maze:
    """One-shot extraction; the reply's JSON block goes through parse_maze_doc"""
    reply = backend.complete(EXTRACTION_SYSTEM, build_extraction_prompt(description))
    try:
        block = extract_json_block(reply)
    except ExtractionError as e:
        raise MazeParseError(f"extraction reply has no maze document: {e}")
    logger.debug("extracted maze document: %s", block)
    return parse_maze_doc(block)
