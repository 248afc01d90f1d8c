import json
import logging
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from llmcdg.errors import ReplayExhaustedError, ReplayMismatchError, TranscriptFormatError, TransportError
from llmcdg.llm import (
    ChatClient,
    ChatMessage,
    LiveTransport,
    RecordingTransport,
    ReplayTransport,
    ScriptedTransport,
    Transcript,
    fingerprint,
    load_transcript,
    make_client,
    save_transcript,
    system,
    user,
)

SECRET = "sk-test-secret-value"


class StubServer:
    """Chat-completions stub; ``plan`` lists status codes to return before succeeding."""

    def __init__(self, plan=(), reply="ok"):
        self.plan = list(plan)
        self.reply = reply
        self.requests = []
        outer = self

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self):
                n = int(self.headers.get("Content-Length", 0))
                body = json.loads(self.rfile.read(n))
                outer.requests.append((dict(self.headers), body))
                code = outer.plan.pop(0) if outer.plan else 200
                payload = {"choices": [{"message": {"role": "assistant", "content": outer.reply}}]}
                data = json.dumps(payload if code == 200 else {"error": "busy"}).encode()
                self.send_response(code)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

            def log_message(self, *args):
                pass

        self.httpd = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self.url = f"http://127.0.0.1:{self.httpd.server_address[1]}/v1/chat/completions"
        self.thread = threading.Thread(target=self.httpd.serve_forever, daemon=True)

    def __enter__(self):
        self.thread.start()
        return self

    def __exit__(self, *exc):
        self.httpd.shutdown()
        self.httpd.server_close()


MSGS = [system("be brief"), user("hello")]


def test_message_validation():
    with pytest.raises(ValueError):
        ChatMessage("tool", "x")
    with pytest.raises(ValueError):
        user("")
    with pytest.raises(ValueError):
        ChatClient(ScriptedTransport(lambda m: "x")).complete([])


def test_scripted():
    client = ChatClient(ScriptedTransport(lambda msgs: msgs[-1].content.upper()))
    assert client.complete(MSGS) == "HELLO"
    assert client.requests == 1


def test_live_against_stub():
    with StubServer(reply="ok") as srv:
        client = ChatClient(LiveTransport(srv.url, api_key=SECRET))
        assert client.complete(MSGS, temperature=0.2) == "ok"
    headers, body = srv.requests[0]
    assert body["messages"] == [m.to_dict() for m in MSGS]
    assert body["temperature"] == 0.2 and body["model"] == "gpt-4"
    assert headers["Authorization"] == f"Bearer {SECRET}"


def test_live_retries_transient_failures(caplog):
    sleeps = []
    with StubServer(plan=[503, 429, 500], reply="done") as srv:
        live = LiveTransport(srv.url, api_key=SECRET, sleep=sleeps.append, backoff_s=0.5)
        with caplog.at_level(logging.DEBUG):
            assert ChatClient(live).complete(MSGS) == "done"
    assert sleeps == [0.5, 1.0, 2.0]
    assert len(srv.requests) == 4
    assert SECRET not in caplog.text


def test_live_gives_up_after_five_tries():
    with StubServer(plan=[500] * 10) as srv:
        live = LiveTransport(srv.url, sleep=lambda s: None)
        with pytest.raises(TransportError):
            ChatClient(live).complete(MSGS)
    assert len(srv.requests) == 5


def test_live_does_not_retry_client_errors():
    with StubServer(plan=[400]) as srv:
        with pytest.raises(TransportError):
            ChatClient(LiveTransport(srv.url, sleep=lambda s: None)).complete(MSGS)
    assert len(srv.requests) == 1


def test_live_connection_refused_is_transport_error():
    live = LiveTransport("http://127.0.0.1:9/none", max_tries=2, sleep=lambda s: None, timeout_s=2)
    with pytest.raises(TransportError):
        ChatClient(live).complete(MSGS)


def test_default_timeout():
    assert LiveTransport("http://x").timeout_s == 120.0


def test_record_then_replay(tmp_path):
    path = tmp_path / "t.jsonl"
    rec = RecordingTransport(ScriptedTransport(lambda m: f"r{len(m)}"), path=str(path))
    client = ChatClient(rec)
    client.complete(MSGS)
    client.complete(MSGS[1:])
    loaded = load_transcript(str(path))
    assert loaded == rec.transcript
    assert SECRET not in path.read_text()
    replay = ChatClient(ReplayTransport(loaded))
    assert replay.complete(MSGS) == "r2"
    assert replay.complete(MSGS[1:]) == "r1"
    with pytest.raises(ReplayExhaustedError):
        replay.complete(MSGS)


def test_replay_strict_mismatch_and_lenient():
    t = Transcript()
    rec = RecordingTransport(ScriptedTransport(lambda m: "a"), t)
    ChatClient(rec).complete(MSGS)
    with pytest.raises(ReplayMismatchError):
        ChatClient(ReplayTransport(t)).complete([user("different")])
    assert ChatClient(ReplayTransport(t, strict=False)).complete([user("different")]) == "a"


def test_fingerprint_is_content_hash():
    assert fingerprint(MSGS) == fingerprint([system("be brief"), user("hello")])
    assert fingerprint(MSGS) != fingerprint(MSGS[::-1])


def test_transcript_round_trip(tmp_path):
    t = Transcript()
    rec = RecordingTransport(ScriptedTransport(lambda m: "x" * len(m)), t)
    for i in range(5):
        ChatClient(rec).complete([user(f"q{i}")])
    p = tmp_path / "five.jsonl"
    save_transcript(t, str(p))
    assert load_transcript(str(p)) == t


def test_empty_transcript(tmp_path):
    p = tmp_path / "empty.jsonl"
    save_transcript(Transcript(), str(p))
    assert p.read_text() == ""
    assert len(load_transcript(str(p))) == 0


def test_truncated_line_names_line_number(tmp_path):
    t = Transcript()
    rec = RecordingTransport(ScriptedTransport(lambda m: "x"), t)
    for i in range(3):
        ChatClient(rec).complete([user(f"q{i}")])
    p = tmp_path / "cut.jsonl"
    save_transcript(t, str(p))
    p.write_text(p.read_text()[:-20])
    with pytest.raises(TranscriptFormatError) as info:
        load_transcript(str(p))
    assert info.value.line == 3


def test_make_client_configs(tmp_path):
    with pytest.raises(TransportError):
        make_client({"transport": "replay"})
    with pytest.raises(TransportError):
        make_client({"transport": "replay", "transcript": str(tmp_path / "missing.jsonl")})
    with pytest.raises(TransportError):
        make_client({"transport": "live"})
    with pytest.raises(TransportError):
        make_client({"transport": "carrier-pigeon", "endpoint_url": "http://x"})
    c = make_client({"transport": "scripted", "temperature": 0.1}, scripted=lambda m: "s")
    assert c.complete(MSGS) == "s" and c.params.temperature == 0.1
    assert make_client({"transport": "scripted"}, scripted=lambda m: "").params.temperature == 0.7


def test_concurrent_recording_is_serialized(tmp_path):
    p = tmp_path / "c.jsonl"
    rec = RecordingTransport(ScriptedTransport(lambda m: m[-1].content), path=str(p))
    client = ChatClient(rec)
    threads = [threading.Thread(target=client.complete, args=([user(f"m{i}")],)) for i in range(16)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    assert len(load_transcript(str(p))) == 16
