"""Repeated-trial experiments over corpus designs."""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

from ..bench.corpus import BenchmarkSpec, select
from ..errors import CdgError, ConfigError
from ..generators import Generator, LlmGenerator, OracleGenerator, RandomGenerator
from ..llm.client import ChatMessage, make_client
from ..loop import RunRecord, run_cdg
from .config import ExperimentConfig
from .stats import quartiles

log = logging.getLogger(__name__)

Scripted = Callable[[list[ChatMessage]], str]


@dataclass
class TrialResult:
    design_id: str
    trial: int
    seed: int
    record: RunRecord


@dataclass
class DesignSummary:
    design_id: str
    generator: str
    trials: int
    closures: int
    closure_rate: float
    p25: Optional[float]
    median: Optional[float]
    p75: Optional[float]
    mean_iterations: float


@dataclass
class ExperimentResult:
    config: dict
    trials: list[TrialResult] = field(default_factory=list)
    summaries: list[DesignSummary] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentResult":
        trials = [TrialResult(t["design_id"], t["trial"], t["seed"], RunRecord.from_dict(t["record"]))
                  for t in d["trials"]]
        return cls(d["config"], trials, [DesignSummary(**s) for s in d["summaries"]])


def make_generator(config: ExperimentConfig, spec: BenchmarkSpec, trial: int,
                   scripted: Optional[Scripted] = None) -> Generator:
    params = dict(config.generator_params)
    seed = config.seed_for(trial)
    try:
        if config.generator == "random":
            return RandomGenerator(seed=seed, **params)
        if config.generator == "oracle":
            return OracleGenerator(seed=seed, **params)
    except TypeError as exc:
        raise ConfigError(f"bad generator_params: {exc}") from exc
    client = make_client(config.transport, config.transcript_for(spec.id, trial), scripted)
    ex = config.explainer
    return LlmGenerator(
        client,
        coverage_format=ex.coverage_format,
        description_mode=ex.description_mode,
        description_path=spec.description_path(),
        guidance_path=spec.guidance_path() if ex.guidance else None,
        max_repairs=int(params.get("max_repairs", 3)),
    )


def summarize(design_id: str, generator: str, trials: list[TrialResult]) -> DesignSummary:
    cycles = [t.record.cycles_to_closure for t in trials if t.record.status == "closure"]
    q = quartiles(cycles)
    n = len(trials)
    return DesignSummary(
        design_id, generator, n, len(cycles), len(cycles) / n if n else 0.0,
        *(q if q is not None else (None, None, None)),
        sum(t.record.iterations for t in trials) / n if n else 0.0,
    )


def run_trial(config: ExperimentConfig, spec: BenchmarkSpec, trial: int,
              scripted: Optional[Scripted] = None) -> TrialResult:
    seed = config.seed_for(trial)
    try:
        design = spec.load(config.naming_rules())
        generator = make_generator(config, spec, trial, scripted)
    except CdgError as exc:
        # Per-trial failures are recorded, never fatal to the experiment.
        record = RunRecord(spec.id, config.generator, status="generator-error",
                           errors=[{"iteration": 0, "kind": exc.kind, "message": str(exc)}])
        return TrialResult(spec.id, trial, seed, record)
    record = run_cdg(design, generator, config.budget, config.reset_cycles,
                     config.reset_between_iterations, config.target, seed)
    record.design = spec.id
    return TrialResult(spec.id, trial, seed, record)


def run_experiment(config: ExperimentConfig, scripted: Optional[Scripted] = None,
                   progress: Optional[Callable[[TrialResult], None]] = None) -> ExperimentResult:
    """Run every (design, trial) pair; results come back in (design, trial) order."""
    try:
        specs = select(list(config.designs))
    except KeyError as exc:
        raise ConfigError(str(exc.args[0])) from None
    jobs = [(spec, t) for spec in specs for t in range(config.trials)]

    def work(job):
        res = run_trial(config, job[0], job[1], scripted)
        if progress is not None:
            progress(res)
        return res

    if config.workers == 1:
        results = [work(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(work, jobs))  # map keeps submission order
    out = ExperimentResult(config.to_dict(), results)
    for spec in specs:
        out.summaries.append(summarize(spec.id, config.generator, [r for r in results if r.design_id == spec.id]))
    return out


def result_json(result: ExperimentResult) -> str:
    return json.dumps(result.to_dict(), indent=2)
