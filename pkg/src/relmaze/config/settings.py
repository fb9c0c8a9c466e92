"""Global settings for relmaze runs"""

import os
from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping, Optional, Tuple, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..errors import ConfigError

Method = Literal["naive", "prompt-relational", "qlearn", "curriculum-q"]
ProposerKind = Literal["oracle", "greedy-blind", "scripted", "llm", "uniform-random"]
CurriculumMode = Literal["reverse-walk", "llm", "none"]

PROMPT_ONLY_METHODS = ("naive", "prompt-relational")
# short method names accepted on the command line and in profiles
METHOD_ALIASES = {"prompt-s2r": "prompt-relational", "s2rcql": "curriculum-q"}


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class SamplerConfig(_Strict):
    """Q-learning and action-sampling parameters"""
    epsilon: float = Field(0.3, ge=0.0, le=1.0)
    alpha: float = Field(0.1, gt=0.0, le=1.0)
    gamma: float = Field(0.9, gt=0.0, le=1.0)
    seed: int = 0
    # "one_minus_epsilon": proposer with probability 1-eps, argmax otherwise
    proposer_probability: Literal["one_minus_epsilon", "epsilon"] = "one_minus_epsilon"
    epsilon_final: Optional[float] = Field(None, ge=0.0, le=1.0)
    decay_episodes: int = Field(0, ge=0)
    exemplar_count: int = Field(4, ge=0)
    buffer_capacity: int = Field(512, ge=1)

    def epsilon_at(self, episode: int) -> float:
        """Epsilon for a training episode under the (optional) linear decay"""
        if self.epsilon_final is None or self.decay_episodes <= 0:
            return self.epsilon
        frac = min(episode / self.decay_episodes, 1.0)
        return self.epsilon + (self.epsilon_final - self.epsilon) * frac


class GatewayConfig(_Strict):
    """Chat-completion endpoint settings; the credential is only named, never stored"""
    endpoint_url: str = "http://localhost:8000/v1/chat/completions"
    model_name: str = "gpt-4o-mini"
    api_key_env: str = "RELMAZE_API_KEY"
    timeout: float = Field(30.0, gt=0.0)
    max_retries: int = Field(2, ge=0, le=5)
    temperature: float = Field(0.0, ge=0.0, le=2.0)
    max_tokens: Optional[int] = Field(256, gt=0)
    max_in_flight: int = Field(4, ge=1)


class SizeClass(_Strict):
    height: int = Field(..., gt=0)
    width: int = Field(..., gt=0)
    count: int = Field(..., ge=0)
    obstacle_fraction: float = Field(0.12, ge=0.0, le=0.35)


def _default_sizes() -> List[SizeClass]:
    return [
        SizeClass(height=5, width=5, count=30),
        SizeClass(height=7, width=7, count=20),
        SizeClass(height=10, width=10, count=10),
    ]


class SuiteSpec(_Strict):
    """Composition of a generated maze suite"""
    sizes: List[SizeClass] = Field(default_factory=_default_sizes)
    seed: int = 0
    placement: Literal["corners", "random"] = "corners"
    max_rejections: int = Field(1000, gt=0)


class CurriculumConfig(_Strict):
    mode: Optional[CurriculumMode] = None
    stage_count: int = Field(2, ge=0)
    walk_len: Optional[int] = Field(None, gt=0)
    stage_budget: int = Field(20, gt=0)
    total_episode_cap: int = Field(30, gt=0)


class MethodConfig(_Strict):
    name: Method = "curriculum-q"

    @field_validator("name", mode="before")
    @classmethod
    def _resolve_alias(cls, value: Any) -> Any:
        return METHOD_ALIASES.get(value, value) if isinstance(value, str) else value


class ProposerConfig(_Strict):
    kind: ProposerKind = "oracle"
    script: Optional[List[str]] = None
    script_path: Optional[str] = None
    prompt_style: Literal["relational", "coordinate"] = "relational"

    def load_script(self) -> List[str]:
        if self.script is not None:
            return list(self.script)
        if self.script_path is None:
            raise ConfigError("proposer.script_path", "scripted proposer needs a script")
        text = Path(self.script_path).read_text(encoding="utf-8")
        return [tok for tok in text.replace(",", " ").split() if tok]


class RunConfig(_Strict):
    """Fully resolved configuration for one CLI invocation"""
    sampler: SamplerConfig = Field(default_factory=SamplerConfig)
    gateway: GatewayConfig = Field(default_factory=GatewayConfig)
    suite: SuiteSpec = Field(default_factory=SuiteSpec)
    curriculum: CurriculumConfig = Field(default_factory=CurriculumConfig)
    method: MethodConfig = Field(default_factory=MethodConfig)
    proposer: ProposerConfig = Field(default_factory=ProposerConfig)
    out_dir: str = "runs/latest"
    workers: int = Field(4, ge=1)
    maze_path: Optional[str] = None
    maze_format: Literal["auto", "json", "ascii", "text"] = "auto"
    suite_path: Optional[str] = None
    resume_qtable: Optional[str] = None

    @model_validator(mode="after")
    def _resolve_and_check(self) -> "RunConfig":
        method = self.method.name
        if self.curriculum.mode is None:
            self.curriculum.mode = "reverse-walk" if method == "curriculum-q" else "none"
        elif method != "curriculum-q" and self.curriculum.mode != "none":
            raise ConfigError(
                "curriculum.mode",
                f"method '{method}' does not train with a curriculum (got '{self.curriculum.mode}')",
            )
        if self.proposer.kind == "scripted" and self.proposer.script is None and not self.proposer.script_path:
            raise ConfigError("proposer.script_path", "scripted proposer needs a script")
        if self.curriculum.mode == "llm" and not self.gateway.endpoint_url:
            raise ConfigError("gateway.endpoint_url", "llm curriculum needs a gateway endpoint")
        return self

    def uses_gateway(self) -> bool:
        return (
            self.proposer.kind == "llm"
            or self.curriculum.mode == "llm"
            or self.maze_format == "text"
        )

    def echo(self) -> Dict[str, Any]:
        """JSON-safe view for reports; contains no secrets"""
        return self.model_dump(mode="json")


# flag name -> dotted config keys it sets
FLAG_KEYS: Dict[str, Tuple[str, ...]] = {
    "epsilon": ("sampler.epsilon",),
    "seed": ("sampler.seed", "suite.seed"),
    "method": ("method.name",),
    "proposer": ("proposer.kind",),
    "episodes": ("curriculum.total_episode_cap",),
    "curriculum": ("curriculum.mode",),
    "stages": ("curriculum.stage_count",),
    "script": ("proposer.script_path",),
    "prompt_style": ("proposer.prompt_style",),
    "out": ("out_dir",),
    "workers": ("workers",),
    "suite": ("suite_path",),
    "maze": ("maze_path",),
    "maze_format": ("maze_format",),
    "resume_qtable": ("resume_qtable",),
}

ENV_KEYS: Dict[str, str] = {
    "RELMAZE_EPSILON": "sampler.epsilon",
    "RELMAZE_SEED": "sampler.seed",
    "RELMAZE_METHOD": "method.name",
    "RELMAZE_PROPOSER": "proposer.kind",
    "RELMAZE_ENDPOINT_URL": "gateway.endpoint_url",
    "RELMAZE_MODEL": "gateway.model_name",
    "RELMAZE_API_KEY_ENV": "gateway.api_key_env",
    "RELMAZE_OUT_DIR": "out_dir",
    "RELMAZE_WORKERS": "workers",
}


def _set_dotted(target: Dict[str, Any], dotted: str, value: Any) -> None:
    parts = dotted.split(".")
    node = target
    for part in parts[:-1]:
        child = node.setdefault(part, {})
        if not isinstance(child, dict):
            raise ConfigError(dotted, f"'{part}' is not a section")
        node = child
    node[parts[-1]] = value


def _deep_merge(base: Dict[str, Any], override: Mapping[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, Mapping) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """Read a YAML (or JSON) run profile"""
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except OSError as e:
        raise ConfigError("config", f"cannot read {path}: {e}")
    except yaml.YAMLError as e:
        raise ConfigError("config", f"invalid YAML in {path}: {e}")
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError("config", f"{path} must contain a mapping")
    return data


def env_layer(env: Mapping[str, str]) -> Dict[str, Any]:
    layer: Dict[str, Any] = {}
    for var, dotted in ENV_KEYS.items():
        value = env.get(var)
        if value:
            _set_dotted(layer, dotted, value)
    if env.get("RELMAZE_SEED"):
        _set_dotted(layer, "suite.seed", env["RELMAZE_SEED"])
    return layer


def flag_layer(flags: Mapping[str, Any]) -> Dict[str, Any]:
    layer: Dict[str, Any] = {}
    for name, value in flags.items():
        if value is None:
            continue
        if name not in FLAG_KEYS:
            raise ConfigError(name, "unknown flag")
        for dotted in FLAG_KEYS[name]:
            _set_dotted(layer, dotted, value)
    return layer


def resolve_config(
    file: Optional[Union[str, Path]] = None,
    flags: Optional[Mapping[str, Any]] = None,
    env: Optional[Mapping[str, str]] = None,
) -> RunConfig:
    """Merge defaults < env < file < flags into a validated RunConfig"""
    env = os.environ if env is None else env
    data = env_layer(env)
    if file is not None:
        data = _deep_merge(data, load_config_file(file))
    data = _deep_merge(data, flag_layer(flags or {}))
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        key = ".".join(str(p) for p in first["loc"]) or "config"
        raise ConfigError(key, first["msg"])
