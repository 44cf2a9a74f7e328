"""Run configuration: one YAML document with sections.

Relative paths inside the file are resolved against the config file's
directory, so fixture configs stay portable. Defaults mirror the pipeline's
standard hyperparameters (5 selection iterations of batch 5, top-5 metrics,
3 self-consistency draws, 50-sample train cap, 1500 new tokens).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, fields
from pathlib import Path

import yaml

from .backend import (
    API_KEY_ENV,
    DEFAULT_SYSTEM_PROMPT,
    JUDGE_API_KEY_ENV,
    ChatBackend,
    HTTPBackend,
    HTTPBackendConfig,
    MockBackend,
)
from .errors import LongGuideError

log = logging.getLogger(__name__)


@dataclass
class TaskConfig:
    name: str = "text generation"
    instruction: str = ""
    response_noun: str = "response"


@dataclass
class DataConfig:
    train: str = ""
    test: str = ""
    demos: str = ""


@dataclass
class BackendConfig:
    kind: str = "mock"  # "mock" or "http"
    mock_script: str = ""
    endpoint_url: str = ""
    model_name: str = "mock"
    request_timeout_s: float = 60.0
    max_retries: int = 3
    concurrency_limit: int = 4
    system_prompt: str = DEFAULT_SYSTEM_PROMPT
    api_key_env: str = API_KEY_ENV

    def build(self) -> ChatBackend:
        if self.kind == "mock":
            if not self.mock_script:
                raise LongGuideError("mock backend requires a mock_script path")
            return MockBackend.from_file(self.mock_script)
        if self.kind == "http":
            if not self.endpoint_url:
                raise LongGuideError("http backend requires endpoint_url")
            return HTTPBackend(
                HTTPBackendConfig(
                    endpoint_url=self.endpoint_url,
                    model_name=self.model_name,
                    request_timeout_s=self.request_timeout_s,
                    max_retries=self.max_retries,
                    concurrency_limit=self.concurrency_limit,
                    system_prompt=self.system_prompt,
                    api_key_env=self.api_key_env,
                )
            )
        raise LongGuideError(f"unknown backend kind: {self.kind}")


@dataclass
class LearnConfig:
    iterations: int = 5
    batch_size: int = 5
    top_k: int = 5
    sc_samples: int = 3
    seed: int = 0
    skip_step2: bool = False
    variants: str = "full"  # "full" or "ocg-only"
    created_at: str = ""  # pin for reproducible bundles; empty = now


@dataclass
class GenerationConfig:
    max_new_tokens: int = 1500
    top_p: float = 1.0
    temperature: float = 0.0
    sc_temperature: float = 0.7


@dataclass
class ProbeConfig:
    """Settings for the property-maintenance probe."""

    property: str = "NT"  # metric name, or NT for the token-count target
    shots: int = 5
    target_score: int = 5
    target_tokens: int = 17
    with_simple_guideline: bool = False
    self_consistency: bool = True
    demo_pool: str = ""
    eval_set: str = ""

    def __post_init__(self) -> None:
        if self.shots < 1:
            raise ValueError("shots must be >= 1")

    def token_mode(self) -> bool:
        # the field name shadows builtins.property, so this stays a method
        return self.property.upper() in ("NT", "TOKENS", "#TOKENS")


@dataclass
class RunConfig:
    task: TaskConfig = field(default_factory=TaskConfig)
    data: DataConfig = field(default_factory=DataConfig)
    backend: BackendConfig = field(default_factory=BackendConfig)
    judge: BackendConfig | None = None
    learn: LearnConfig = field(default_factory=LearnConfig)
    generation: GenerationConfig = field(default_factory=GenerationConfig)
    probe: ProbeConfig = field(default_factory=ProbeConfig)

    def build_judge(self) -> ChatBackend:
        if self.judge is None:
            raise LongGuideError("judge backend not configured")
        return self.judge.build()

    def snapshot(self) -> dict:
        """Plain-dict view of the config for report provenance."""
        def as_dict(obj):
            if obj is None:
                return None
            return {f.name: getattr(obj, f.name) for f in fields(obj)}

        return {
            "task": as_dict(self.task),
            "data": as_dict(self.data),
            "backend": as_dict(self.backend),
            "judge": as_dict(self.judge),
            "learn": as_dict(self.learn),
            "generation": as_dict(self.generation),
            "probe": as_dict(self.probe),
        }


_SECTIONS = {
    "task": TaskConfig,
    "data": DataConfig,
    "backend": BackendConfig,
    "judge": BackendConfig,
    "learn": LearnConfig,
    "generation": GenerationConfig,
    "probe": ProbeConfig,
}

_PATH_KEYS = {
    "data": ("train", "test", "demos"),
    "backend": ("mock_script",),
    "judge": ("mock_script",),
    "probe": ("demo_pool", "eval_set"),
}


def load_config(path: str | Path) -> RunConfig:
    """Parse the YAML config, resolving relative paths against its directory."""
    path = Path(path)
    if not path.exists():
        raise LongGuideError(f"config file not found: {path}")
    raw = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    if not isinstance(raw, dict):
        raise LongGuideError("config must be a mapping of sections")
    base = path.parent
    config = RunConfig()
    for section, payload in raw.items():
        cls = _SECTIONS.get(section)
        if cls is None:
            log.warning("ignoring unknown config section: %s", section)
            continue
        payload = dict(payload or {})
        known = {f.name for f in fields(cls)}
        for key in list(payload):
            if key not in known:
                log.warning("ignoring unknown key %s.%s", section, key)
                payload.pop(key)
        for key in _PATH_KEYS.get(section, ()):
            if payload.get(key):
                payload[key] = str((base / str(payload[key])).resolve())
        setattr(config, section, cls(**payload))
    if config.judge is not None and config.judge.api_key_env == API_KEY_ENV:
        config.judge.api_key_env = JUDGE_API_KEY_ENV
    return config
