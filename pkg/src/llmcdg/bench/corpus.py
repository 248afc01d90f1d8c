"""The shipped benchmark corpus: 10 simple, 8 medium and 6 generated designs."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Optional

from ..frontend.interface import NamingRules
from ..sim.simulator import Design, load_design
from .fsmgen import generate_fsm

LEVELS = ("simple", "medium", "complex")
COMPLEX_STATE_COUNTS = (16, 32, 48, 64, 96, 128)


@dataclass(frozen=True)
class BenchmarkSpec:
    id: str
    level: str
    category: str
    path: Optional[str] = None  # relative to the bench package
    state_count: Optional[int] = None
    seed: Optional[int] = None
    description: Optional[str] = None
    guidance: Optional[str] = None

    def __post_init__(self):
        if self.level not in LEVELS:
            raise ValueError(f"unknown level {self.level!r}")
        if self.level == "complex":
            if self.state_count not in COMPLEX_STATE_COUNTS or self.seed is None:
                raise ValueError(f"{self.id}: complex designs need state_count in {COMPLEX_STATE_COUNTS} and a seed")
        elif self.path is None:
            raise ValueError(f"{self.id}: simple and medium designs need a source path")

    @property
    def filename(self) -> str:
        return f"{self.id}.v"

    def source_text(self) -> str:
        if self.level == "complex":
            return generate_fsm(self.state_count, self.seed)
        return _asset(self.path).read_text(encoding="utf-8")

    def description_path(self) -> Optional[str]:
        return str(_asset(self.description)) if self.description else None

    def guidance_path(self) -> Optional[str]:
        return str(_asset(self.guidance)) if self.guidance else None

    def load(self, rules: Optional[NamingRules] = None) -> Design:
        return load_design(self.source_text(), self.filename, rules)


def _asset(rel: str):
    return resources.files(__package__).joinpath(rel)


def corpus() -> list[BenchmarkSpec]:
    data = json.loads(_asset("manifest.json").read_text(encoding="utf-8"))
    return [BenchmarkSpec(**entry) for entry in data["designs"]]


def get_spec(design_id: str) -> BenchmarkSpec:
    for spec in corpus():
        if spec.id == design_id:
            return spec
    raise KeyError(f"no corpus design {design_id!r}")


def select(selectors: list[str] | str) -> list[BenchmarkSpec]:
    """Resolve ids, level names or "all" to corpus specs, in corpus order."""
    if isinstance(selectors, str):
        selectors = [selectors]
    specs = corpus()
    picked = []
    for spec in specs:
        if any(sel in ("all", spec.id, spec.level) for sel in selectors):
            picked.append(spec)
    known = {s.id for s in specs} | set(LEVELS) | {"all"}
    unknown = [s for s in selectors if s not in known]
    if unknown:
        raise KeyError(f"unknown design selector(s): {', '.join(unknown)}")
    return picked
