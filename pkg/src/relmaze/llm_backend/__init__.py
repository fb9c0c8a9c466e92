"""LLM backend for chat-completion endpoints"""

from .interface import LLMBackend, LLMMessage, LLMResponse, UsageLedger
from .chat_backend import ChatCompletionBackend
from .extraction import extract_json_block
from .factory import create_llm_backend

__all__ = [
    "LLMBackend",
    "LLMMessage",
    "LLMResponse",
    "UsageLedger",
    "ChatCompletionBackend",
    "extract_json_block",
    "create_llm_backend",
]
