"""The coverage-directed generation loop.

Each iteration asks the generator for a stimulus, simulates it from the
current state, accumulates coverage and records metrics. The loop ends on
line-coverage closure, on any budget, or on a generator error that retrying
cannot fix. Coverage is never reset between iterations; simulator state
carries over unless ``reset_between_iterations`` is set.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .errors import (
    CdgError,
    ConfigError,
    GeneratorError,
    ReplayExhaustedError,
    ReplayMismatchError,
    SimulationError,
    StateSpaceTooLargeError,
    UnreachableError,
)
from .generators.base import Generator, GeneratorContext
from .sim.simulator import CoverageMap, Design, SimState, coverage_summary, input_matrix, simulate
from .stimulus import StimulusSequence, materialize, validate

log = logging.getLogger(__name__)

STATUSES = ("closure", "budget-iterations", "budget-time", "budget-cycles", "generator-error")

# Retrying the same iteration cannot fix these.
FATAL_ERRORS = (UnreachableError, StateSpaceTooLargeError, ReplayExhaustedError, ReplayMismatchError,
                SimulationError, ConfigError)


@dataclass(frozen=True)
class LoopBudget:
    max_iterations: int = 20
    wall_clock_s: float = 60.0
    max_total_cycles: int = 100_000

    def __post_init__(self):
        if self.max_iterations <= 0 or self.wall_clock_s <= 0 or self.max_total_cycles <= 0:
            raise ValueError("budget limits must be positive")

    @classmethod
    def from_dict(cls, d: dict) -> "LoopBudget":
        base = cls()
        return cls(int(d.get("max_iterations", base.max_iterations)),
                   float(d.get("wall_clock_s", base.wall_clock_s)),
                   int(d.get("max_total_cycles", base.max_total_cycles)))


@dataclass
class IterationEntry:
    iteration: int
    cycles_added: int
    cumulative_cycles: int
    line_pct: float
    branch_pct: float
    latency_s: float


@dataclass
class RunRecord:
    design: str
    generator: str
    status: str = "budget-iterations"
    cycles_to_closure: Optional[int] = None
    entries: list[IterationEntry] = field(default_factory=list)
    errors: list[dict] = field(default_factory=list)
    reset_cycles: int = 0
    initial_line_pct: float = 0.0
    initial_branch_pct: float = 0.0
    iterations: int = 0  # generator calls made, including failed ones
    elapsed_s: float = 0.0

    @property
    def total_cycles(self) -> int:
        return self.entries[-1].cumulative_cycles if self.entries else 0

    @property
    def final_line_pct(self) -> float:
        return self.entries[-1].line_pct if self.entries else self.initial_line_pct

    @property
    def final_branch_pct(self) -> float:
        return self.entries[-1].branch_pct if self.entries else self.initial_branch_pct

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "RunRecord":
        d = dict(d)
        d["entries"] = [IterationEntry(**e) for e in d.get("entries", [])]
        return cls(**d)

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def curve(self) -> list[tuple[int, float]]:
        """(iteration, line%) points, starting from the post-reset coverage."""
        return [(0, self.initial_line_pct)] + [(e.iteration, e.line_pct) for e in self.entries]


def reset_state(design: Design, coverage: CoverageMap, reset_cycles: int) -> SimState:
    """Fresh state after holding reset for ``reset_cycles`` cycles with inputs at 0."""
    state = design.initial_state()
    if design.iface.reset is not None and reset_cycles > 0:
        zeros = np.zeros((reset_cycles, len(design.iface.inputs)), dtype=np.int64)
        simulate(design, zeros, state, coverage, reset_cycles=reset_cycles)
    return state


def _closure_mask(design: Design, target: str) -> np.ndarray:
    if target == "line":
        return design.is_line
    if target == "all":
        return np.ones(design.n_coverpoints, dtype=np.bool_)
    raise ValueError(f"unknown closure target {target!r}")


def run_cdg(design: Design, generator: Generator, budget: LoopBudget | None = None, reset_cycles: int = 1,
            reset_between_iterations: bool = False, target: str = "line", seed: int = 0) -> RunRecord:
    """Iterate generator and simulator until closure or a budget runs out.

    ``target="line"`` stops at 100% line coverage; ``"all"`` also requires
    every branch arm. Failures never escape: they end up in the record.
    """
    from .generators.prng import XorShift64Star

    budget = budget or LoopBudget()
    mask = _closure_mask(design, target)
    record = RunRecord(design.stem, getattr(generator, "name", type(generator).__name__))
    t0 = time.monotonic()
    coverage = design.new_coverage()
    effective_reset = reset_cycles if design.iface.reset is not None else 0
    record.reset_cycles = effective_reset
    try:
        state = reset_state(design, coverage, effective_reset)
    except CdgError as exc:
        record.status = "generator-error"
        record.errors.append({"iteration": 0, "kind": exc.kind, "message": str(exc)})
        record.elapsed_s = time.monotonic() - t0
        return record
    summary = coverage_summary(design, coverage)
    record.initial_line_pct, record.initial_branch_pct = summary.line_pct, summary.branch_pct

    def closed() -> bool:
        return not np.any(mask & (coverage.hits == 0))

    if closed():
        record.status = "closure"
        record.cycles_to_closure = 0
        record.elapsed_s = time.monotonic() - t0
        return record

    rng = XorShift64Star(seed)
    cumulative = 0
    last: Optional[StimulusSequence] = None
    record.status = "budget-iterations"
    for iteration in range(1, budget.max_iterations + 1):
        if time.monotonic() - t0 >= budget.wall_clock_s:
            record.status = "budget-time"
            break
        if cumulative >= budget.max_total_cycles:
            record.status = "budget-cycles"
            break
        if reset_between_iterations and iteration > 1:
            state = reset_state(design, coverage, effective_reset)
        record.iterations = iteration
        ctx = GeneratorContext(design, coverage, state.copy(), cumulative, iteration, rng, last)
        started = time.monotonic()
        try:
            seq = generator.next_stimulus(ctx)
            if len(seq) == 0:
                raise GeneratorError("generator returned an empty stimulus")
            validate(seq, design.iface)
        except CdgError as exc:
            record.errors.append({"iteration": iteration, "kind": exc.kind, "message": str(exc)})
            log.info("iteration %d: %s: %s", iteration, exc.kind, exc)
            if isinstance(exc, FATAL_ERRORS):
                record.status = "generator-error"
                break
            continue
        latency = time.monotonic() - started
        remaining_budget = budget.max_total_cycles - cumulative
        if len(seq) > remaining_budget:
            seq = StimulusSequence(seq.cycles[:remaining_budget])
        mat = input_matrix(design, materialize(seq, design.iface))
        try:
            result = simulate(design, mat, state, coverage, target=mask)
        except SimulationError as exc:
            record.errors.append({"iteration": iteration, "kind": exc.kind, "message": str(exc)})
            record.status = "generator-error"
            break
        before = cumulative
        cumulative += mat.shape[0]
        last = seq
        summary = coverage_summary(design, coverage)
        record.entries.append(IterationEntry(iteration, mat.shape[0], cumulative, summary.line_pct,
                                             summary.branch_pct, latency))
        if result.closed_at >= 0:
            record.status = "closure"
            record.cycles_to_closure = before + result.closed_at + 1
            break
    else:
        if record.status == "budget-iterations" and cumulative >= budget.max_total_cycles:
            record.status = "budget-cycles"
    record.elapsed_s = time.monotonic() - t0
    return record
