"""Factory for creating LLM backend instances"""

import os

from ..config.settings import GatewayConfig
from ..errors import ConfigError
from .chat_backend import ChatCompletionBackend
from .interface import LLMBackend


def create_llm_backend(config: GatewayConfig) -> LLMBackend:
    """Create LLM backend instance; fails fast when the credential is missing"""
    if not os.getenv(config.api_key_env, "").strip():
        raise ConfigError(
            "gateway.api_key_env",
            f"environment variable {config.api_key_env} is not set",
        )
    if not config.endpoint_url:
        raise ConfigError("gateway.endpoint_url", "endpoint URL is required")
    return ChatCompletionBackend(config)
