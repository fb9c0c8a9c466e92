"""Exception hierarchy for relmaze"""

from typing import Optional


class RelmazeError(Exception):
    """Base class for all relmaze errors"""
    exit_code: int = 1


class ConfigError(RelmazeError):
    """Invalid, unknown or conflicting configuration"""
    exit_code = 2

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


class MazeParseError(RelmazeError):
    """Maze text could not be parsed"""
    exit_code = 3

    def __init__(self, message: str, offset: Optional[int] = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)


class MazeValidationError(RelmazeError):
    """Maze fields parsed but violate a maze invariant"""
    exit_code = 3

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class GenerationError(RelmazeError):
    """Suite generation could not produce a solvable maze"""
    exit_code = 4


class GatewayError(RelmazeError):
    """Remote LLM endpoint failure"""
    exit_code = 5


class TransportError(GatewayError):
    """HTTP failure that survived every retry"""

    def __init__(self, message: str, status: Optional[int] = None, attempts: int = 0):
        self.status = status
        self.attempts = attempts
        super().__init__(message)


class ProtocolError(GatewayError):
    """Response body did not follow the chat-completion shape"""


class InvalidPositionError(RelmazeError):
    """Coordinate outside the maze or on an obstacle"""


class LabelError(RelmazeError):
    """Node label is malformed or outside the maze"""


class ExtractionError(RelmazeError):
    """No balanced JSON object found in an LLM reply"""


class ProposerError(RelmazeError):
    """A proposer could not produce an action"""


class ReplyParseError(ProposerError):
    """LLM reply names no usable node label"""


class ScriptExhaustedError(ProposerError):
    """Scripted proposer ran out of actions"""


class MetricUndefinedError(RelmazeError):
    """Metric has an empty denominator"""


class ConsistencyError(RelmazeError):
    """Logs and maze disagree"""
