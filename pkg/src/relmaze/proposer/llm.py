"""Proposer backed by a chat-completion endpoint"""

import logging
import threading
from typing import List, Optional

from pydantic import BaseModel

from ..errors import GatewayError, ReplyParseError
from ..llm_backend.interface import LLMBackend
from .interface import Proposal, ProposalContext, Proposer
from .prompting import (
    DEFAULT_EXEMPLARS,
    SYSTEM_PROMPT,
    build_coordinate_prompt,
    build_prompt,
    parse_coordinate_reply,
    parse_reply,
)

logger = logging.getLogger(__name__)


class TranscriptEntry(BaseModel):
    """One prompt/reply exchange, kept verbatim"""
    tag: str
    call: int
    current: str
    prompt: str
    reply: Optional[str] = None
    action: Optional[str] = None
    error: Optional[str] = None


class LLMProposer(Proposer):
    """Asks the model for the next hop and parses its reply"""

    uses_exemplars = True

    def __init__(
        self,
        backend: LLMBackend,
        prompt_style: str = "relational",
        max_exemplars: int = DEFAULT_EXEMPLARS,
        tag: str = "",
    ):
        self.backend = backend
        self.prompt_style = prompt_style
        self.max_exemplars = max_exemplars
        self.tag = tag
        self.transcripts: List[TranscriptEntry] = []
        self._lock = threading.Lock()

    @property
    def name(self) -> str:
        return "llm"

    def _record(self, entry: TranscriptEntry) -> None:
        with self._lock:
            self.transcripts.append(entry)

    def propose(self, ctx: ProposalContext) -> Proposal:
        if self.prompt_style == "coordinate":
            prompt = build_coordinate_prompt(ctx)
        else:
            prompt = build_prompt(ctx, self.max_exemplars)
        entry = TranscriptEntry(tag=self.tag, call=len(self.transcripts), current=ctx.current, prompt=prompt)
        try:
            reply = self.backend.complete(SYSTEM_PROMPT, prompt)
            entry.reply = reply
            if self.prompt_style == "coordinate":
                proposal = parse_coordinate_reply(reply, ctx)
            else:
                proposal = parse_reply(reply, ctx)
        except (GatewayError, ReplyParseError) as e:
            entry.error = f"{type(e).__name__}: {e}"
            self._record(entry)
            logger.warning("llm proposer failed at %s: %s", ctx.current, entry.error)
            raise
        entry.action = proposal.action
        self._record(entry)
        return proposal
