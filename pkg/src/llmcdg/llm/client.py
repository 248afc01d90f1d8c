"""Chat-completion client with pluggable transports.

Transports:

* :class:`LiveTransport` posts chat-completions JSON to an HTTP endpoint.
* :class:`RecordingTransport` wraps another transport and logs every exchange.
* :class:`ReplayTransport` serves a saved transcript back in order.
* :class:`ScriptedTransport` answers with a Python callable.

Transcripts are JSON Lines, one exchange per line.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional, Sequence

import httpx

from ..errors import (
    ReplayExhaustedError,
    ReplayMismatchError,
    TranscriptFormatError,
    TransportError,
)

log = logging.getLogger(__name__)

API_KEY_ENV = "LLMCDG_API_KEY"
FALLBACK_KEY_ENV = "OPENAI_API_KEY"
DEFAULT_TEMPERATURE = 0.7
DEFAULT_TIMEOUT_S = 120.0
MAX_TRIES = 5
ROLES = ("system", "user", "assistant")


@dataclass(frozen=True)
class ChatMessage:
    role: str
    content: str

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"unknown role {self.role!r}")
        if self.role != "system" and not self.content:
            raise ValueError(f"{self.role} message must not be empty")

    def to_dict(self) -> dict:
        return {"role": self.role, "content": self.content}


def system(text: str) -> ChatMessage:
    return ChatMessage("system", text)


def user(text: str) -> ChatMessage:
    return ChatMessage("user", text)


def assistant(text: str) -> ChatMessage:
    return ChatMessage("assistant", text)


def fingerprint(messages: Sequence[ChatMessage]) -> str:
    canonical = json.dumps([m.to_dict() for m in messages], sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class ChatParams:
    model: str = "gpt-4"
    temperature: float = DEFAULT_TEMPERATURE
    max_tokens: Optional[int] = None


@dataclass
class TranscriptEntry:
    messages: list[dict]
    response: str
    fingerprint: str
    timestamp: float = 0.0
    model: str = ""


@dataclass
class Transcript:
    entries: list[TranscriptEntry] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    def save(self, path: str) -> None:
        save_transcript(self, path)

    @classmethod
    def load(cls, path: str) -> "Transcript":
        return load_transcript(path)


def save_transcript(transcript: Transcript, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for e in transcript.entries:
            fh.write(json.dumps(asdict(e), sort_keys=True) + "\n")


def load_transcript(path: str) -> Transcript:
    entries = []
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                entries.append(
                    TranscriptEntry(
                        messages=list(rec["messages"]),
                        response=str(rec["response"]),
                        fingerprint=str(rec["fingerprint"]),
                        timestamp=float(rec.get("timestamp", 0.0)),
                        model=str(rec.get("model", "")),
                    )
                )
            except (ValueError, KeyError, TypeError) as exc:
                raise TranscriptFormatError(f"bad transcript record ({exc.__class__.__name__}: {exc})", n) from None
    return Transcript(entries)


class Transport:
    def send(self, messages: Sequence[ChatMessage], params: ChatParams) -> str:
        raise NotImplementedError


class ScriptedTransport(Transport):
    """Answer every request with ``fn(messages)``."""

    def __init__(self, fn: Callable[[list[ChatMessage]], str]):
        self.fn = fn
        self.calls = 0

    def send(self, messages, params):
        self.calls += 1
        return self.fn(list(messages))


class ReplayTransport(Transport):
    def __init__(self, transcript: Transcript, strict: bool = True):
        self.transcript = transcript
        self.strict = strict
        self.cursor = 0
        self._lock = threading.Lock()

    def send(self, messages, params):
        with self._lock:
            if self.cursor >= len(self.transcript.entries):
                raise ReplayExhaustedError(
                    f"transcript exhausted after {len(self.transcript.entries)} response(s)"
                )
            entry = self.transcript.entries[self.cursor]
            if self.strict:
                fp = fingerprint(messages)
                if fp != entry.fingerprint:
                    raise ReplayMismatchError(
                        f"request {self.cursor} does not match the recorded request "
                        f"(fingerprint {fp[:12]} != {entry.fingerprint[:12]})"
                    )
            self.cursor += 1
            return entry.response


class RecordingTransport(Transport):
    def __init__(self, inner: Transport, transcript: Optional[Transcript] = None,
                 path: Optional[str] = None):
        self.inner = inner
        self.transcript = transcript if transcript is not None else Transcript()
        self.path = path
        self._lock = threading.Lock()

    def send(self, messages, params):
        response = self.inner.send(messages, params)
        entry = TranscriptEntry(
            messages=[m.to_dict() for m in messages],
            response=response,
            fingerprint=fingerprint(messages),
            timestamp=time.time(),
            model=params.model,
        )
        with self._lock:
            self.transcript.entries.append(entry)
            if self.path:
                with open(self.path, "a", encoding="utf-8") as fh:
                    fh.write(json.dumps(asdict(entry), sort_keys=True) + "\n")
        return response


class LiveTransport(Transport):
    """POST ``{"model", "messages", ...}`` and read ``choices[0].message.content``."""

    def __init__(self, endpoint_url: str, api_key: Optional[str] = None, timeout_s: float = DEFAULT_TIMEOUT_S,
                 max_tries: int = MAX_TRIES, backoff_s: float = 1.0,
                 client: Optional[httpx.Client] = None, sleep: Callable[[float], None] = time.sleep):
        self.endpoint_url = endpoint_url
        self._api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV) or os.environ.get(FALLBACK_KEY_ENV)
        self.timeout_s = timeout_s
        self.max_tries = max_tries
        self.backoff_s = backoff_s
        self.client = client or httpx.Client(timeout=timeout_s)
        self.sleep = sleep

    def __repr__(self) -> str:
        return f"LiveTransport({self.endpoint_url!r})"

    def _headers(self) -> dict:
        headers = {"Content-Type": "application/json"}
        if self._api_key:
            headers["Authorization"] = f"Bearer {self._api_key}"
        return headers

    def send(self, messages, params):
        body = {"model": params.model, "messages": [m.to_dict() for m in messages],
                "temperature": params.temperature}
        if params.max_tokens is not None:
            body["max_tokens"] = params.max_tokens
        last = ""
        for attempt in range(self.max_tries):
            try:
                resp = self.client.post(self.endpoint_url, json=body, headers=self._headers(),
                                        timeout=self.timeout_s)
            except httpx.HTTPError as exc:
                last = f"{exc.__class__.__name__}: {exc}"
            else:
                if resp.status_code == 200:
                    try:
                        return resp.json()["choices"][0]["message"]["content"]
                    except (ValueError, KeyError, IndexError, TypeError):
                        raise TransportError("malformed chat-completions response") from None
                last = f"HTTP {resp.status_code}"
                if resp.status_code != 429 and resp.status_code < 500:
                    raise TransportError(f"request rejected: {last}")
            if attempt + 1 < self.max_tries:
                delay = self.backoff_s * (2 ** attempt)
                log.warning("chat request failed (%s); retry %d/%d in %.1fs", last, attempt + 1,
                            self.max_tries - 1, delay)
                self.sleep(delay)
        raise TransportError(f"chat request failed after {self.max_tries} tries: {last}")


class ChatClient:
    def __init__(self, transport: Transport, params: ChatParams | None = None):
        self.transport = transport
        self.params = params or ChatParams()
        self.requests = 0

    def complete(self, messages: Sequence[ChatMessage], **overrides) -> str:
        if not messages:
            raise ValueError("messages must not be empty")
        if any(m.role == "system" for m in messages[1:]):
            raise ValueError("only the first message may be a system message")
        params = ChatParams(**{**asdict(self.params), **overrides}) if overrides else self.params
        self.requests += 1
        return self.transport.send(list(messages), params)


def make_client(cfg: dict, transcript_path: Optional[str] = None,
                scripted: Optional[Callable[[list[ChatMessage]], str]] = None) -> ChatClient:
    """Build a client from a transport config block.

    Keys: ``transport`` (live | record | replay | scripted), ``endpoint_url``,
    ``model``, ``temperature``, ``max_tokens``, ``timeout_s``, ``strict``.
    """
    kind = cfg.get("transport", "live")
    params = ChatParams(cfg.get("model", "gpt-4"), float(cfg.get("temperature", DEFAULT_TEMPERATURE)),
                        cfg.get("max_tokens"))
    path = transcript_path or cfg.get("transcript")
    if kind == "replay":
        if not path:
            raise TransportError("replay transport needs a transcript path")
        if not os.path.isfile(path):
            raise TransportError(f"transcript {path} does not exist")
        return ChatClient(ReplayTransport(load_transcript(path), bool(cfg.get("strict", True))), params)
    if kind == "scripted":
        if scripted is None:
            raise TransportError("scripted transport needs a response function")
        return ChatClient(ScriptedTransport(scripted), params)
    if not cfg.get("endpoint_url"):
        raise TransportError(f"{kind} transport needs endpoint_url")
    live = LiveTransport(cfg["endpoint_url"], timeout_s=float(cfg.get("timeout_s", DEFAULT_TIMEOUT_S)))
    if kind == "live":
        return ChatClient(live, params)
    if kind == "record":
        if path and os.path.exists(path):
            os.remove(path)
        return ChatClient(RecordingTransport(live, path=path), params)
    raise TransportError(f"unknown transport {kind!r}")
