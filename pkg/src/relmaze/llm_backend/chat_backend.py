"""OpenAI-compatible chat-completion backend over plain HTTP"""

import logging
import os
import threading
import time
from typing import List, Optional

import requests

from ..config.settings import GatewayConfig
from ..errors import ConfigError, ProtocolError, TransportError
from .interface import LLMBackend, LLMMessage, LLMResponse

logger = logging.getLogger(__name__)

BACKOFF_INITIAL = 0.5
BACKOFF_CAP = 8.0


def backoff_delays(max_retries: int) -> List[float]:
    """Sleep before each retry: 0.5, 1, 2, 4, 8, 8, ..."""
    return [min(BACKOFF_INITIAL * (2 ** i), BACKOFF_CAP) for i in range(max_retries)]


class ChatCompletionBackend(LLMBackend):
    """POSTs {"model", "messages", "temperature"} and reads choices[0].message.content"""

    def __init__(self, config: GatewayConfig):
        super().__init__(config.model_name)
        self.gateway = config
        self._slots = threading.BoundedSemaphore(config.max_in_flight)
        self._session = requests.Session()

    def _credential(self) -> str:
        value = os.getenv(self.gateway.api_key_env, "").strip()
        if not value:
            raise ConfigError(
                "gateway.api_key_env",
                f"environment variable {self.gateway.api_key_env} is not set",
            )
        return value

    def generate(
        self,
        messages: List[LLMMessage],
        max_tokens: Optional[int] = None,
        temperature: Optional[float] = None,
    ) -> LLMResponse:
        """Generate response, retrying transport failures with exponential backoff"""
        headers = {
            "Authorization": f"Bearer {self._credential()}",
            "Content-Type": "application/json",
        }
        payload = {
            "model": self.model,
            "messages": [{"role": m.role, "content": m.content} for m in messages],
            "temperature": self.gateway.temperature if temperature is None else temperature,
        }
        tokens = self.gateway.max_tokens if max_tokens is None else max_tokens
        if tokens is not None:
            payload["max_tokens"] = tokens

        delays = backoff_delays(self.gateway.max_retries)
        attempts = self.gateway.max_retries + 1
        last_status: Optional[int] = None
        last_error = "no attempt made"

        for attempt in range(attempts):
            started = time.perf_counter()
            try:
                with self._slots:
                    response = self._session.post(
                        self.gateway.endpoint_url,
                        json=payload,
                        headers=headers,
                        timeout=self.gateway.timeout,
                    )
            except requests.RequestException as e:
                last_status, last_error = None, type(e).__name__
                self.ledger.record(time.perf_counter() - started, failed=True)
            else:
                latency = time.perf_counter() - started
                if 200 <= response.status_code < 300:
                    self.ledger.record(latency, failed=False)
                    return self._parse_body(response)
                last_status, last_error = response.status_code, f"HTTP {response.status_code}"
                self.ledger.record(latency, failed=True)

            logger.warning(
                "chat completion attempt %d/%d to %s failed: %s",
                attempt + 1, attempts, self.gateway.endpoint_url, last_error,
            )
            if attempt < len(delays):
                time.sleep(delays[attempt])

        raise TransportError(
            f"chat completion failed after {attempts} attempts: {last_error}",
            status=last_status,
            attempts=attempts,
        )

    def _parse_body(self, response: requests.Response) -> LLMResponse:
        try:
            body = response.json()
            choice = body["choices"][0]
            content = choice["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as e:
            raise ProtocolError(f"malformed chat completion body: {type(e).__name__}: {e}")
        if not isinstance(content, str):
            raise ProtocolError("chat completion content is not text")
        usage = body.get("usage") if isinstance(body.get("usage"), dict) else None
        return LLMResponse(
            content=content,
            finish_reason=str(choice.get("finish_reason") or "unknown"),
            usage={k: int(v) for k, v in usage.items() if isinstance(v, int)} if usage else None,
            model=str(body.get("model") or self.model),
        )
