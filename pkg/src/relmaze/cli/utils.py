"""Shared utilities for the relmaze CLI"""

import logging
import os
from typing import Any, Dict, Optional

import click
from dotenv import load_dotenv

from ..config.settings import RunConfig, resolve_config

ENV_PATHS = [
    ".env",  # Current directory
    os.path.join(os.path.dirname(os.path.dirname(os.path.dirname(os.path.dirname(__file__)))), ".env"),  # Project root
]


def load_env_files() -> Optional[str]:
    """Load the first .env file found; returns its path"""
    for env_path in ENV_PATHS:
        if os.path.exists(env_path):
            load_dotenv(env_path)
            if os.getenv("RELMAZE_CLI_DEBUG"):
                click.echo(f"Loaded environment from: {env_path}")
            return env_path
    if os.getenv("RELMAZE_CLI_DEBUG"):
        click.echo("No .env file found, using system environment variables")
    return None


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def mask_secret(value: Optional[str]) -> str:
    """Show only the ends of a secret"""
    if not value:
        return "❌ NOT SET"
    return f"{value[:4]}...{value[-4:]}" if len(value) > 12 else "***masked***"


def resolve_run_config(config_path: Optional[str], flags: Dict[str, Any]) -> RunConfig:
    """Flags over config file over RELMAZE_* environment over defaults"""
    load_env_files()
    return resolve_config(config_path, flags)


def format_rate(value: Optional[float]) -> str:
    return "N/A" if value is None else f"{value:.2%}"


class CliContext:
    """CLI context object to share state between commands"""

    def __init__(self):
        self.verbose: bool = False
        self.format: str = "table"


pass_cli_context = click.make_pass_decorator(CliContext)
