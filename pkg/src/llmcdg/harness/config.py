"""Experiment configuration, loaded from a single JSON file.

Example::

    {
      "designs": ["simple", "m01"],
      "generator": "random",
      "generator_params": {"batch_cycles": 256},
      "budget": {"max_iterations": 1000000, "wall_clock_s": 60},
      "trials": 5,
      "seeds": [1, 2, 3, 4, 5],
      "reset_cycles": 1,
      "explainer": {"coverage_format": "llm-readable", "description_mode": "none", "guidance": false},
      "transport": {"transport": "replay", "transcript": "transcripts/{design}_t{trial}.jsonl"}
    }

Relative paths inside the file resolve against the file's directory.
Secrets (the API key) never live here; they come from the environment.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field
from typing import Any, Optional

from ..coverage import FORMATS
from ..errors import ConfigError
from ..frontend.interface import NamingRules
from ..generators import GENERATORS
from ..loop import LoopBudget
from ..prompts.engine import DESCRIPTION_MODES

DEFAULT_TRIALS = 5
TARGETS = ("line", "all")


@dataclass(frozen=True)
class ExplainerConfig:
    coverage_format: str = "llm-readable"
    description_mode: str = "none"
    guidance: bool = False

    def __post_init__(self):
        if self.coverage_format not in FORMATS:
            raise ConfigError(f"coverage_format must be one of {', '.join(FORMATS)}")
        if self.description_mode not in DESCRIPTION_MODES:
            raise ConfigError(f"description_mode must be one of {', '.join(DESCRIPTION_MODES)}")


@dataclass(frozen=True)
class ExperimentConfig:
    designs: tuple[str, ...]
    generator: str
    generator_params: dict = field(default_factory=dict)
    budget: LoopBudget = field(default_factory=LoopBudget)
    trials: int = DEFAULT_TRIALS
    seeds: tuple[int, ...] = ()
    reset_cycles: int = 1
    reset_between_iterations: bool = False
    target: str = "line"
    explainer: ExplainerConfig = field(default_factory=ExplainerConfig)
    transport: dict = field(default_factory=dict)
    naming: Optional[dict] = None
    workers: int = 1
    base_dir: str = "."

    def __post_init__(self):
        if not self.designs:
            raise ConfigError("at least one design selector is required")
        if self.generator not in GENERATORS:
            raise ConfigError(f"generator must be one of {', '.join(GENERATORS)}")
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if self.seeds and len(self.seeds) != self.trials:
            raise ConfigError(f"{len(self.seeds)} seeds given for {self.trials} trials")
        if self.generator == "random" and not self.seeds:
            raise ConfigError("the random generator needs one seed per trial")
        if self.reset_cycles < 0:
            raise ConfigError("reset_cycles must be non-negative")
        if self.target not in TARGETS:
            raise ConfigError(f"target must be one of {', '.join(TARGETS)}")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")

    def seed_for(self, trial: int) -> int:
        return self.seeds[trial] if self.seeds else trial

    def naming_rules(self) -> NamingRules:
        return NamingRules.from_dict(self.naming) if self.naming else NamingRules()

    def resolve(self, path: str) -> str:
        return path if os.path.isabs(path) else os.path.normpath(os.path.join(self.base_dir, path))

    def transcript_for(self, design_id: str, trial: int) -> Optional[str]:
        pattern = self.transport.get("transcript")
        if not pattern:
            return None
        return self.resolve(pattern.format(design=design_id, trial=trial))

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("base_dir")
        d["designs"] = list(self.designs)
        d["seeds"] = list(self.seeds)
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any], base_dir: str = ".") -> "ExperimentConfig":
        known = {"designs", "generator", "generator_params", "budget", "trials", "seeds", "reset_cycles",
                 "reset_between_iterations", "target", "explainer", "transport", "naming", "workers"}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
        try:
            designs = d["designs"]
            generator = d["generator"]
        except KeyError as exc:
            raise ConfigError(f"missing required key {exc.args[0]!r}") from None
        if isinstance(designs, str):
            designs = [designs]
        try:
            return cls(
                designs=tuple(designs),
                generator=generator,
                generator_params=dict(d.get("generator_params", {})),
                budget=LoopBudget.from_dict(d.get("budget", {})),
                trials=int(d.get("trials", DEFAULT_TRIALS)),
                seeds=tuple(int(s) for s in d.get("seeds", ())),
                reset_cycles=int(d.get("reset_cycles", 1)),
                reset_between_iterations=bool(d.get("reset_between_iterations", False)),
                target=d.get("target", "line"),
                explainer=ExplainerConfig(**d.get("explainer", {})),
                transport=dict(d.get("transport", {})),
                naming=d.get("naming"),
                workers=int(d.get("workers", 1)),
                base_dir=base_dir,
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid config: {exc}") from exc


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return ExperimentConfig.from_dict(data, os.path.dirname(os.path.abspath(path)))
