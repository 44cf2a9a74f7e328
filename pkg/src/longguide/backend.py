"""Chat-completion backends: a live HTTP client and a deterministic mock.

The mock makes the whole pipeline bit-reproducible: the same script, config,
and dataset always yield identical artifacts. Self-consistency sampling is
implemented here as sequential independent completions; aggregation (e.g.
medians) belongs to the callers.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import requests

from .errors import BackendError, ScriptUnderrunError, TransportError

log = logging.getLogger(__name__)

DEFAULT_SYSTEM_PROMPT = "You are a helpful assistant!"
API_KEY_ENV = "LONGGUIDE_API_KEY"
JUDGE_API_KEY_ENV = "LONGGUIDE_JUDGE_API_KEY"


@dataclass
class GenerationParams:
    """Decoding settings for one completion request."""

    max_new_tokens: int = 1500
    top_p: float = 1.0
    temperature: float = 0.0
    n_samples: int = 1

    def __post_init__(self) -> None:
        if self.max_new_tokens <= 0:
            raise ValueError("max_new_tokens must be positive")
        if not 0 < self.top_p <= 1:
            raise ValueError("top_p must be in (0, 1]")
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")


@dataclass(frozen=True)
class ChatRequest:
    user: str
    system: str | None = None

    def __post_init__(self) -> None:
        if not self.user:
            raise ValueError("user message must be non-empty")


def fingerprint(prompt: str) -> str:
    """Stable key for a prompt, used by keyed mock scripts."""
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()[:16]


class ChatBackend:
    """Interface for completion backends."""

    def complete(self, request: ChatRequest, params: GenerationParams) -> str:
        raise NotImplementedError

    def self_consistent_complete(
        self, request: ChatRequest, params: GenerationParams
    ) -> list[str]:
        """Draw params.n_samples independent completions, order preserved."""
        if params.n_samples % 2 == 0:
            raise ValueError("n_samples must be odd")
        return [self.complete(request, params) for _ in range(params.n_samples)]


class MockBackend(ChatBackend):
    """Scripted backend replaying canned responses.

    A sequential script is consumed in order; keyed overrides match the
    request's prompt fingerprint and are never consumed. The key "*" acts as
    a default for any request not covered by the script or an exact key.
    """

    def __init__(
        self,
        script: list[str] | None = None,
        by_fingerprint: dict[str, str] | None = None,
    ) -> None:
        self._script = list(script or [])
        self._by_fingerprint = dict(by_fingerprint or {})
        self._cursor = 0
        self._lock = threading.Lock()
        self.requests: list[ChatRequest] = []

    @classmethod
    def from_file(cls, path: str | Path) -> "MockBackend":
        """Load a JSON array (sequential) or object (fingerprint-keyed)."""
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        if isinstance(data, list):
            return cls(script=[str(item) for item in data])
        if isinstance(data, dict):
            return cls(by_fingerprint={str(k): str(v) for k, v in data.items()})
        raise BackendError(f"mock script must be a JSON array or object: {path}")

    @property
    def call_count(self) -> int:
        return len(self.requests)

    def complete(self, request: ChatRequest, params: GenerationParams) -> str:
        with self._lock:
            self.requests.append(request)
            key = fingerprint(request.user)
            if key in self._by_fingerprint:
                return self._by_fingerprint[key]
            if self._cursor < len(self._script):
                response = self._script[self._cursor]
                self._cursor += 1
                return response
            if "*" in self._by_fingerprint:
                return self._by_fingerprint["*"]
            raise ScriptUnderrunError(
                f"mock script exhausted after {self._cursor} responses"
            )


@dataclass
class HTTPBackendConfig:
    """Connection settings for an OpenAI-style chat-completions endpoint."""

    endpoint_url: str
    model_name: str
    request_timeout_s: float = 60.0
    max_retries: int = 3
    concurrency_limit: int = 4
    system_prompt: str = DEFAULT_SYSTEM_PROMPT
    api_key_env: str = API_KEY_ENV


class HTTPBackend(ChatBackend):
    """Live client speaking the de-facto chat-completions wire format.

    Transient transport failures (connection errors, timeouts, 429, 5xx) are
    retried with exponential backoff up to max_retries; other HTTP errors are
    surfaced verbatim. At most concurrency_limit requests are in flight.
    """

    def __init__(
        self,
        config: HTTPBackendConfig,
        session: requests.Session | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ) -> None:
        self.config = config
        self._session = session or requests.Session()
        self._sleep = sleep
        self._semaphore = threading.BoundedSemaphore(config.concurrency_limit)

    def complete(self, request: ChatRequest, params: GenerationParams) -> str:
        payload = self._payload(request, params)
        headers = {"Content-Type": "application/json"}
        api_key = os.environ.get(self.config.api_key_env, "")
        if not api_key and self.config.api_key_env == JUDGE_API_KEY_ENV:
            api_key = os.environ.get(API_KEY_ENV, "")  # judge key may alias
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        last_error: Exception | None = None
        for attempt in range(self.config.max_retries + 1):
            if attempt:
                self._sleep(2 ** (attempt - 1))
            try:
                with self._semaphore:
                    response = self._session.post(
                        self.config.endpoint_url,
                        json=payload,
                        headers=headers,
                        timeout=self.config.request_timeout_s,
                    )
            except requests.RequestException as exc:
                last_error = exc
                log.warning("request failed (attempt %d): %s", attempt + 1, exc)
                continue
            if response.status_code == 429 or response.status_code >= 500:
                last_error = BackendError(
                    f"HTTP {response.status_code}: {response.text}"
                )
                log.warning("retryable status %d (attempt %d)", response.status_code, attempt + 1)
                continue
            if response.status_code >= 400:
                raise BackendError(f"HTTP {response.status_code}: {response.text}")
            return self._parse(response.json())
        raise TransportError(f"exhausted retries: {last_error}")

    def _payload(self, request: ChatRequest, params: GenerationParams) -> dict:
        system = request.system if request.system is not None else self.config.system_prompt
        messages = []
        if system:
            messages.append({"role": "system", "content": system})
        messages.append({"role": "user", "content": request.user})
        return {
            "model": self.config.model_name,
            "messages": messages,
            "temperature": params.temperature,
            "top_p": params.top_p,
            "max_tokens": params.max_new_tokens,
        }

    @staticmethod
    def _parse(body: dict) -> str:
        try:
            return body["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise BackendError(f"malformed completion response: {body!r}") from exc
