from __future__ import annotations

from typing import Optional

from ..coverage import render
from ..llm.client import ChatClient
from ..prompts.engine import (
    DutExplanation,
    HistorySummary,
    build_round1,
    build_round2,
    explain_dut,
    extract_stimulus,
)
from ..stimulus import StimulusSequence
from .base import Generator, GeneratorContext


class LlmGenerator(Generator):
    """Two question-and-answer rounds per iteration, then JSON extraction."""

    name = "llm"

    def __init__(self, client: ChatClient, coverage_format: str = "llm-readable",
                 description_mode: str = "none", description_path: Optional[str] = None,
                 guidance_path: Optional[str] = None, max_repairs: int = 3,
                 explanation: Optional[DutExplanation] = None):
        self.client = client
        self.coverage_format = coverage_format
        self.description_mode = description_mode
        self.description_path = description_path
        self.guidance_path = guidance_path
        self.max_repairs = max_repairs
        self.explanation = explanation
        self.history = HistorySummary()

    def describe(self) -> dict:
        return {
            "generator": self.name,
            "model": self.client.params.model,
            "temperature": self.client.params.temperature,
            "coverage_format": self.coverage_format,
            "description_mode": self.description_mode,
            "guidance": bool(self.guidance_path),
            "max_repairs": self.max_repairs,
        }

    def next_stimulus(self, ctx: GeneratorContext) -> StimulusSequence:
        design = ctx.design
        if self.explanation is None:
            self.explanation = explain_dut(design, self.description_mode, self.client,
                                           self.description_path, self.guidance_path)
        report = render(design, ctx.coverage, self.coverage_format)
        round1 = build_round1(self.explanation, report, self.history, design.iface)
        analysis = self.client.complete(round1)
        round2 = build_round2(analysis)
        answer = self.client.complete(round2)
        seq = extract_stimulus(answer, design.iface, self.client, self.max_repairs, history=round2)
        self.history = HistorySummary(self.history.count + 1, self.history.total_cycles + len(seq), seq)
        return seq
