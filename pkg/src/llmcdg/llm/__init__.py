from .client import (
    ChatClient,
    ChatMessage,
    ChatParams,
    LiveTransport,
    RecordingTransport,
    ReplayTransport,
    ScriptedTransport,
    Transcript,
    TranscriptEntry,
    assistant,
    fingerprint,
    load_transcript,
    make_client,
    save_transcript,
    system,
    user,
)

__all__ = [
    "ChatClient",
    "ChatMessage",
    "ChatParams",
    "LiveTransport",
    "RecordingTransport",
    "ReplayTransport",
    "ScriptedTransport",
    "Transcript",
    "TranscriptEntry",
    "assistant",
    "fingerprint",
    "load_transcript",
    "make_client",
    "save_transcript",
    "system",
    "user",
]
