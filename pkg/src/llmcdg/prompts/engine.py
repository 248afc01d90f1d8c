"""DUT explainer and the two-round prompt generator.

Round 1 asks the model to reason about the uncovered code in prose. Round 2
asks it to restate that answer as stimulus JSON. :func:`extract_stimulus`
pulls the JSON out of the reply and, if decoding fails, asks for a repair.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from string import Template
from typing import Optional, Sequence

from ..errors import ConfigError, ExtractionExhaustedError, JsonMalformedError, StimulusError
from ..frontend.interface import InterfaceSpec
from ..llm.client import ChatClient, ChatMessage, assistant, system, user
from ..stimulus import SCHEMA_TEXT, StimulusSequence, decode, encode

PROMPT_VERSION = "1"
DESCRIPTION_MODES = ("none", "manual-file", "model-generated")


@lru_cache(maxsize=None)
def template(name: str) -> Template:
    text = resources.files(__package__).joinpath("templates", f"{name}.txt").read_text(encoding="utf-8")
    return Template(text.rstrip("\n"))


@dataclass(frozen=True)
class DutExplanation:
    source: str
    description: str = ""
    guidance: str = ""
    mode: str = "none"


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


def explain_dut(design, mode: str = "none", chat_client: Optional[ChatClient] = None,
                description_path: Optional[str] = None, guidance_path: Optional[str] = None) -> DutExplanation:
    """Collect the design source plus optional description and guidance text.

    ``mode="model-generated"`` spends one chat request on a functional
    description of the source.
    """
    source = design.source.text
    guidance = _read_text(guidance_path) if guidance_path else ""
    if mode == "none":
        return DutExplanation(source, "", guidance, mode)
    if mode == "manual-file":
        if not description_path:
            raise ConfigError("manual-file description mode needs a description path")
        return DutExplanation(source, _read_text(description_path), guidance, mode)
    if mode == "model-generated":
        if chat_client is None:
            raise ConfigError("model-generated description needs a chat client")
        reply = chat_client.complete([system(template("system").template),
                                      user(template("describe").substitute(source=source))])
        return DutExplanation(source, reply, guidance, mode)
    raise ConfigError(f"unknown description mode {mode!r}; choose from {', '.join(DESCRIPTION_MODES)}")


@dataclass(frozen=True)
class HistorySummary:
    count: int = 0
    total_cycles: int = 0
    last: Optional[StimulusSequence] = None

    def render(self) -> str:
        if self.count == 0:
            return "No stimuli have been tried yet."
        line = (f"Previously tried stimuli: {self.count} sequence(s), {self.total_cycles} cycle(s) in total; "
                "coverage above already includes them.")
        if self.last is not None:
            line += f" Most recent sequence: {encode(self.last)}"
        return line


def _describe_inputs(iface: InterfaceSpec) -> str:
    if not iface.inputs:
        return "(none)"
    return ", ".join(f"{n} ({w} bit{'s' if w > 1 else ''})" for n, w in iface.inputs)


def _reset_note(iface: InterfaceSpec) -> str:
    if iface.reset is None:
        return ""
    level = "high" if iface.reset.active_high else "low"
    return (f" The reset '{iface.reset.name}' (active {level}) was applied once at the start"
            " and is held inactive afterwards; state carries over between your sequences.")


def build_round1(explanation: DutExplanation, coverage_report, history: HistorySummary | None = None,
                 iface: InterfaceSpec | None = None) -> list[ChatMessage]:
    """Messages for the analysis round.

    Call only while coverage is incomplete; the loop never asks for more
    stimuli after closure.
    """
    history = history or HistorySummary()
    fmt = getattr(coverage_report, "format", "llm-readable")
    desc = template("description").substitute(text=explanation.description) if explanation.description else ""
    guide = template("guidance").substitute(text=explanation.guidance) if explanation.guidance else ""
    body = template("round1").substitute(
        reset_note=_reset_note(iface) if iface else "",
        inputs=_describe_inputs(iface) if iface else "(see the module ports)",
        source=explanation.source.rstrip("\n"),
        description=desc,
        guidance=guide,
        coverage_format=fmt,
        coverage=str(coverage_report).rstrip("\n"),
        history=history.render(),
    )
    return [system(template("system").template), user(body)]


def build_round2(round1_answer: str) -> list[ChatMessage]:
    """Messages asking to restate a round-1 answer as stimulus JSON."""
    if not round1_answer or not round1_answer.strip():
        raise ValueError("round-1 answer is empty")
    body = template("round2").substitute(answer=round1_answer.strip(), schema=SCHEMA_TEXT)
    return [system(template("system").template), user(body)]


_FENCE_RE = re.compile(r"```[^\n`]*\n(.*?)```", re.DOTALL)


def _first_balanced_object(text: str) -> Optional[str]:
    start = text.find("{")
    while start >= 0:
        depth = 0
        in_str = False
        esc = False
        for i in range(start, len(text)):
            ch = text[i]
            if in_str:
                if esc:
                    esc = False
                elif ch == "\\":
                    esc = True
                elif ch == '"':
                    in_str = False
            elif ch == '"':
                in_str = True
            elif ch == "{":
                depth += 1
            elif ch == "}":
                depth -= 1
                if depth == 0:
                    return text[start:i + 1]
        start = text.find("{", start + 1)
    return None


def find_json(answer: str) -> Optional[str]:
    """Last fenced code block, else the first balanced ``{...}``."""
    blocks = _FENCE_RE.findall(answer)
    if blocks:
        return blocks[-1].strip()
    return _first_balanced_object(answer)


def _try_decode(answer: str, iface: InterfaceSpec) -> StimulusSequence:
    payload = find_json(answer)
    if payload is None:
        raise JsonMalformedError("no JSON object found in the reply")
    seq = decode(payload, iface)
    if len(seq) == 0:
        raise StimulusError('"stimulus" is empty; give at least one cycle')
    return seq


def extract_stimulus(answer_text: str, iface: InterfaceSpec, chat_client: Optional[ChatClient] = None,
                     max_repairs: int = 3, history: Sequence[ChatMessage] = ()) -> StimulusSequence:
    """Decode the stimulus in ``answer_text``, asking for up to ``max_repairs`` fixes.

    ``history`` is the conversation that produced ``answer_text``; repair
    requests continue it.
    """
    if max_repairs < 0:
        raise ValueError("max_repairs must be >= 0")
    errors: list[str] = []
    convo = list(history)
    answer = answer_text
    for attempt in range(max_repairs + 1):
        try:
            return _try_decode(answer, iface)
        except StimulusError as exc:
            errors.append(str(exc))
            if attempt == max_repairs or chat_client is None:
                break
            convo = convo + [assistant(answer or "(empty reply)"),
                             user(template("repair").substitute(error=str(exc), schema=SCHEMA_TEXT))]
            answer = chat_client.complete(convo)
    raise ExtractionExhaustedError(errors)


def stimulus_block(seq: StimulusSequence) -> str:
    """Format a sequence the way a well-behaved round-2 answer would."""
    return "```json\n" + json.dumps({"stimulus": seq.cycles}) + "\n```"
