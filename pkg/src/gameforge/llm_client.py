"""Chat-completion sessions: a live OpenAI-compatible HTTP backend plus
deterministic record/replay backends for tests and offline evaluation.

Session files are JSON arrays of ``{request: {messages, params}, response,
sha256}``; replay returns recorded responses in order, with an opt-in
strict mode that verifies request hashes.  Credentials come only from the
``GAMEFORGE_API_KEY`` environment variable so they never end up inside
recorded sessions.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import httpx

API_KEY_ENV = "GAMEFORGE_API_KEY"


class LlmError(Exception):
    pass


class ConfigError(LlmError):
    pass


class AuthError(LlmError):
    pass


class TransportError(LlmError):
    pass


class ReplayExhaustedError(LlmError):
    pass


class ReplayMismatchError(LlmError):
    pass


@dataclass(frozen=True)
class ChatMessage:
    role: str  # system | user | assistant
    content: str

    def __post_init__(self):
        if self.role not in ("system", "user", "assistant"):
            raise ValueError(f"invalid chat role {self.role!r}")
        if not self.content:
            raise ValueError("chat message content must not be empty")


@dataclass(frozen=True)
class SamplingParams:
    model: str
    temperature: float = 0.0
    top_p: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.temperature <= 1.0:
            raise ValueError("temperature must be in [0, 1]")
        if not 0.0 <= self.top_p <= 1.0:
            raise ValueError("top_p must be in [0, 1]")


@dataclass(frozen=True)
class ClientConfig:
    """Backend configuration; see README for the meaning of each key."""

    base_url: str = "https://api.openai.com/v1"
    model: str = "gpt-4o"
    temperature: float = 0.0
    top_p: float = 1.0
    transport_retries: int = 3
    timeout_s: float = 60.0
    retry_backoff_s: float = 1.0

    def params(self) -> SamplingParams:
        return SamplingParams(
            model=self.model, temperature=self.temperature, top_p=self.top_p
        )


@dataclass(frozen=True)
class TranscriptEntry:
    messages: tuple[ChatMessage, ...]
    params: SamplingParams
    response: str
    latency_s: float
    backend: str


class Transcript:
    """Append-only log of every exchange made through a session."""

    def __init__(self):
        self._entries: list[TranscriptEntry] = []

    def _append(self, entry: TranscriptEntry):
        self._entries.append(entry)

    @property
    def entries(self) -> tuple[TranscriptEntry, ...]:
        return tuple(self._entries)

    def __len__(self):
        return len(self._entries)


def request_hash(messages: Sequence[ChatMessage], params: SamplingParams) -> str:
    """Canonical sha256 over the request; stable across processes."""
    payload = {
        "messages": [{"role": m.role, "content": m.content} for m in messages],
        "params": {
            "model": params.model,
            "temperature": params.temperature,
            "top_p": params.top_p,
        },
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


class Session:
    """Base session: subclasses implement ``_respond``."""

    backend = "base"

    def __init__(self):
        self.transcript = Transcript()
        self._lock = threading.Lock()

    def complete(self, messages: Sequence[ChatMessage], params: SamplingParams) -> str:
        if not messages:
            raise ValueError("messages must not be empty")
        messages = tuple(messages)
        start = time.monotonic()
        response = self._respond(messages, params)
        latency = time.monotonic() - start
        with self._lock:
            self.transcript._append(
                TranscriptEntry(messages, params, response, latency, self.backend)
            )
        return response

    def _respond(self, messages, params) -> str:
        raise NotImplementedError

    def close(self):
        pass

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


class LiveSession(Session):
    """OpenAI-compatible chat-completions backend over HTTP.

    Prompts are sent exactly as given; transport failures are retried up to
    ``transport_retries`` times with exponential backoff.  Safe for use from
    several threads at once.
    """

    backend = "live"

    def __init__(self, config: ClientConfig, transport: httpx.BaseTransport | None = None):
        super().__init__()
        self.config = config
        self._client = httpx.Client(
            base_url=config.base_url.rstrip("/"),
            timeout=config.timeout_s,
            transport=transport,
        )

    def _respond(self, messages, params) -> str:
        api_key = os.environ.get(API_KEY_ENV)
        if not api_key:
            raise AuthError(f"{API_KEY_ENV} is not set")
        payload = {
            "model": params.model,
            "messages": [{"role": m.role, "content": m.content} for m in messages],
            "temperature": params.temperature,
            "top_p": params.top_p,
        }
        headers = {"Authorization": f"Bearer {api_key}"}
        attempts = self.config.transport_retries + 1
        last_error = None
        for attempt in range(attempts):
            if attempt:
                time.sleep(self.config.retry_backoff_s * 2 ** (attempt - 1))
            try:
                resp = self._client.post("/chat/completions", json=payload, headers=headers)
            except httpx.TransportError as exc:
                last_error = exc
                continue
            if resp.status_code in (401, 403):
                raise AuthError(f"authentication rejected ({resp.status_code})")
            if resp.status_code == 429 or resp.status_code >= 500:
                last_error = TransportError(f"HTTP {resp.status_code}: {resp.text[:200]}")
                continue
            if resp.status_code != 200:
                raise TransportError(f"HTTP {resp.status_code}: {resp.text[:200]}")
            try:
                return resp.json()["choices"][0]["message"]["content"]
            except (KeyError, IndexError, TypeError, json.JSONDecodeError) as exc:
                raise TransportError(f"malformed completion response: {exc}") from exc
        raise TransportError(
            f"transport failed after {attempts} attempts: {last_error}"
        ) from (last_error if isinstance(last_error, Exception) else None)

    def close(self):
        self._client.close()


class RecordSession(Session):
    """Proxy to a live session that persists every exchange on close."""

    backend = "record"

    def __init__(self, config: ClientConfig, path: str | Path,
                 transport: httpx.BaseTransport | None = None):
        super().__init__()
        self.path = Path(path)
        self._live = LiveSession(config, transport=transport)
        self._exchanges: list[dict] = []

    def _respond(self, messages, params) -> str:
        response = self._live.complete(messages, params)
        self._exchanges.append(
            {
                "request": {
                    "messages": [{"role": m.role, "content": m.content} for m in messages],
                    "params": {
                        "model": params.model,
                        "temperature": params.temperature,
                        "top_p": params.top_p,
                    },
                },
                "response": response,
                "sha256": request_hash(messages, params),
            }
        )
        return response

    def close(self):
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.path.write_text(
            json.dumps(self._exchanges, indent=2, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )
        self._live.close()


class ReplaySession(Session):
    """Replays a recorded session; never touches the network.

    Matching is sequential by default.  In strict mode each request's hash
    must equal the recorded one, otherwise :class:`ReplayMismatchError`
    names the first divergent exchange.
    """

    backend = "replay"

    def __init__(self, path: str | Path, strict: bool = False):
        super().__init__()
        self.path = Path(path)
        self.strict = strict
        try:
            data = json.loads(self.path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed session file {self.path}: {exc}") from exc
        if not isinstance(data, list):
            raise ConfigError(f"session file {self.path} must contain a JSON array")
        self._exchanges = data
        self._index = 0

    def _respond(self, messages, params) -> str:
        with self._lock:
            index = self._index
            self._index += 1
        if index >= len(self._exchanges):
            raise ReplayExhaustedError(
                f"replay session {self.path} exhausted after "
                f"{len(self._exchanges)} exchanges"
            )
        entry = self._exchanges[index]
        if self.strict:
            expected = entry.get("sha256")
            actual = request_hash(messages, params)
            if expected != actual:
                raise ReplayMismatchError(
                    f"exchange {index + 1}: request hash {actual} does not match "
                    f"recorded {expected}"
                )
        try:
            return entry["response"]
        except (KeyError, TypeError) as exc:
            raise ConfigError(
                f"session file {self.path}: exchange {index + 1} has no response"
            ) from exc


def open_session(
    mode: str,
    source: str | Path | None = None,
    config: ClientConfig | None = None,
    strict: bool = False,
    transport: httpx.BaseTransport | None = None,
) -> Session:
    """Open a live, record or replay session.

    ``source`` is the session file for record/replay modes; replay fails
    with ``FileNotFoundError`` when it does not exist.
    """
    config = config or ClientConfig()
    if mode == "live":
        return LiveSession(config, transport=transport)
    if mode == "record":
        if source is None:
            raise ConfigError("record mode requires a session file path")
        return RecordSession(config, source, transport=transport)
    if mode == "replay":
        if source is None:
            raise ConfigError("replay mode requires a session file path")
        if not Path(source).exists():
            raise FileNotFoundError(f"session file not found: {source}")
        return ReplaySession(source, strict=strict)
    raise ConfigError(f"unknown session mode {mode!r}")


def parse_session_spec(spec: str) -> tuple[str, str | None]:
    """Parse ``live``, ``record:<path>`` or ``replay:<path>``."""
    if spec == "live":
        return "live", None
    for mode in ("record", "replay"):
        prefix = mode + ":"
        if spec.startswith(prefix) and len(spec) > len(prefix):
            return mode, spec[len(prefix):]
    raise ConfigError(
        f"invalid session spec {spec!r}; expected live, record:<file> or replay:<file>"
    )


def write_session_file(path: str | Path, responses: Sequence[str]) -> None:
    """Write a minimal sequential-replay session file from canned responses."""
    exchanges = [{"request": None, "response": r, "sha256": None} for r in responses]
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(exchanges, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
