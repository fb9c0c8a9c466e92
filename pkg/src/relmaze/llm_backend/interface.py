"""Abstract interface for LLM backends"""

import threading
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, PrivateAttr


class LLMResponse(BaseModel):
    """Response from LLM backend"""
    content: str
    finish_reason: str
    usage: Optional[Dict[str, int]] = None
    model: str


class LLMMessage(BaseModel):
    """Message format for LLM communication"""
    role: str  # "system", "user", "assistant"
    content: str


class UsageLedger(BaseModel):
    """Request accounting shared by every caller of a backend"""
    requests: int = 0
    failures: int = 0
    total_latency: float = 0.0  # seconds

    _lock: Any = PrivateAttr(default_factory=threading.Lock)

    def record(self, latency: float, failed: bool) -> None:
        with self._lock:
            self.requests += 1
            self.total_latency += latency
            if failed:
                self.failures += 1


class LLMBackend(ABC):
    """Abstract base class for LLM backends"""

    def __init__(self, model: str):
        self.model = model
        self.ledger = UsageLedger()

    @abstractmethod
    def generate(
        self,
        messages: List[LLMMessage],
        max_tokens: Optional[int] = None,
        temperature: Optional[float] = None,
    ) -> LLMResponse:
        """Generate response from LLM"""
        pass

    def complete(self, system: str, user: str) -> str:
        """Send one system + user exchange and return the reply text"""
        messages = []
        if system:
            messages.append(LLMMessage(role="system", content=system))
        messages.append(LLMMessage(role="user", content=user))
        return self.generate(messages).content
