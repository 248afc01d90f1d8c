"""Cycle-based two-phase simulation with line and branch coverage."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from ..errors import NonConvergenceError, SimulationError
from ..frontend import ast as A
from ..frontend.interface import InterfaceSpec, NamingRules, extract_interface
from ..frontend.lexer import SourceUnit
from ..frontend.parser import parse_source
from . import kernels as K
from .elaborate import Compiler, Coverpoint, build_program, stem_of

MAX_SWEEPS = 1000


@dataclass
class CoverageMap:
    hits: np.ndarray

    @classmethod
    def zeros(cls, n: int) -> "CoverageMap":
        return cls(np.zeros(n, dtype=np.int64))

    def __len__(self) -> int:
        return int(self.hits.shape[0])

    def copy(self) -> "CoverageMap":
        return CoverageMap(self.hits.copy())

    def covered(self) -> np.ndarray:
        return self.hits > 0

    def merge(self, other: "CoverageMap") -> None:
        self.hits += other.hits

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CoverageMap) and np.array_equal(self.hits, other.hits)


@dataclass
class SimState:
    values: np.ndarray
    cycle: int = 0

    def copy(self) -> "SimState":
        return SimState(self.values.copy(), self.cycle)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SimState)
            and self.cycle == other.cycle
            and np.array_equal(self.values, other.values)
        )


@dataclass
class Design:
    module: A.Module
    iface: InterfaceSpec
    source: SourceUnit
    coverpoints: tuple[Coverpoint, ...]
    signals: tuple[str, ...]
    widths: dict[str, int]
    prog: tuple[np.ndarray, ...] = field(repr=False)
    comb_order: tuple[int, ...] = ()
    register_names: tuple[str, ...] = ()  # signals written by clocked processes

    def __post_init__(self):
        self.index = {n: i for i, n in enumerate(self.signals)}
        self.input_idx = np.array([self.index[n] for n in self.iface.input_names], dtype=np.int64)
        self.output_idx = np.array([self.index[n] for n, _ in self.iface.outputs], dtype=np.int64)
        self.reset_idx = self.index[self.iface.reset.name] if self.iface.reset else -1
        self.reset_level = self.iface.reset.active_level if self.iface.reset else 1
        self.register_idx = np.array([self.index[n] for n in self.register_names], dtype=np.int64)
        self.is_line = np.array([cp.kind == "line" for cp in self.coverpoints], dtype=np.bool_)

    @property
    def name(self) -> str:
        return self.module.name

    @property
    def stem(self) -> str:
        return stem_of(self.source.path)

    @property
    def n_coverpoints(self) -> int:
        return len(self.coverpoints)

    @property
    def register_width(self) -> int:
        return sum(self.widths[n] for n in self.register_names)

    @property
    def has_clock(self) -> bool:
        return self.prog[7].shape[0] > 0

    def initial_state(self) -> SimState:
        return SimState(np.zeros(len(self.signals), dtype=np.int64), 0)

    def new_coverage(self) -> CoverageMap:
        return CoverageMap.zeros(self.n_coverpoints)

    def value(self, state: SimState, name: str) -> int:
        return int(state.values[self.index[name]])

    def lines_with_coverpoints(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for cp in self.coverpoints:
            out.setdefault(cp.line, []).append(cp.id)
        return out


def elaborate(module: A.Module, iface: InterfaceSpec | None = None, source: SourceUnit | None = None) -> Design:
    """Compile a checked AST into an executable :class:`Design`."""
    iface = iface or extract_interface(module)
    source = source or SourceUnit.from_text("", "<source>")
    comp = Compiler(module, iface, stem_of(source.path), source.path)
    comp.compile()
    prog, order, clocked, _ = build_program(comp)
    regs: list[str] = []
    for p in comp.processes:
        if p.kind == "clocked":
            regs.extend(n for n in sorted(p.writes) if n not in regs)
    return Design(
        module=module,
        iface=iface,
        source=source,
        coverpoints=tuple(comp.coverpoints),
        signals=tuple(comp.signals),
        widths=dict(comp.widths),
        prog=prog,
        comb_order=tuple(order),
        register_names=tuple(regs),
    )


def load_design(source: SourceUnit | str, path: str | None = None, rules: NamingRules | None = None) -> Design:
    """Parse, extract the interface and elaborate in one call."""
    if isinstance(source, str):
        source = SourceUnit.from_text(source, path or "<source>")
    module = parse_source(source)
    return elaborate(module, extract_interface(module, rules), source)


def load_design_file(path: str, rules: NamingRules | None = None) -> Design:
    return load_design(SourceUnit.from_file(path), rules=rules)


# -- running -------------------------------------------------------------------


@dataclass
class RunResult:
    state: SimState
    coverage: CoverageMap
    trace: np.ndarray  # cycles x outputs
    inputs: np.ndarray  # cycles x drivable inputs, as applied
    closed_at: int = -1  # first cycle index after which every target coverpoint was hit

    def trace_csv(self, design: Design) -> str:
        return trace_to_csv(design, self.inputs, self.trace)


def input_matrix(design: Design, cycles: Sequence[Mapping[str, int]]) -> np.ndarray:
    """Pack complete per-cycle input maps into a (cycles x inputs) array."""
    names = design.iface.input_names
    mat = np.zeros((len(cycles), len(names)), dtype=np.int64)
    for t, cyc in enumerate(cycles):
        for j, n in enumerate(names):
            mat[t, j] = cyc.get(n, 0)
    return mat


def simulate(
    design: Design,
    inputs: np.ndarray,
    state: SimState,
    coverage: CoverageMap,
    reset_cycles: int = 0,
    target: Optional[np.ndarray] = None,
) -> RunResult:
    """Advance ``state`` and ``coverage`` in place over the rows of ``inputs``.

    ``target`` selects the coverpoints whose completion is reported through
    ``closed_at`` (default: line coverpoints).
    """
    inputs = np.ascontiguousarray(inputs, dtype=np.int64).reshape(-1, len(design.iface.inputs))
    if target is None:
        target = design.is_line
    remaining = np.array([int(np.count_nonzero(target & (coverage.hits == 0)))], dtype=np.int64)
    already_closed = remaining[0] == 0
    trace = np.zeros((inputs.shape[0], len(design.iface.outputs)), dtype=np.int64)
    status, where = K.run_cycles(
        design.prog, state.values, inputs, design.input_idx, design.reset_idx, design.reset_level,
        reset_cycles, coverage.hits, target, remaining, design.output_idx, trace, MAX_SWEEPS,
    )
    if status < 0:
        state.cycle += int(where)
        raise NonConvergenceError(
            f"combinational logic did not settle within {MAX_SWEEPS} sweeps at cycle {state.cycle} "
            "(combinational loop?)"
        )
    state.cycle += inputs.shape[0]
    closed_at = -1 if already_closed else int(where)
    return RunResult(state, coverage, trace, inputs, closed_at)


def _check_inputs(design: Design, cycles: Iterable[Mapping[str, int]]) -> None:
    for t, cyc in enumerate(cycles):
        for name, value in cyc.items():
            w = design.iface.width_of(name)
            if w is None:
                raise SimulationError(f"cycle {t}: '{name}' is not a drivable input")
            if not 0 <= int(value) < (1 << w):
                raise SimulationError(f"cycle {t}: value {value} does not fit {name}[{w}]")


def step(design: Design, state: SimState, inputs: Mapping[str, int], coverage: CoverageMap,
         reset: bool = False) -> SimState:
    """Simulate one clock cycle from ``state``; ``coverage`` accumulates in place."""
    _check_inputs(design, [inputs])
    new = state.copy()
    simulate(design, input_matrix(design, [inputs]), new, coverage, reset_cycles=1 if reset else 0)
    return new


def run(design: Design, stimulus, reset_cycles: int = 1) -> RunResult:
    """Run a stimulus from time zero.

    ``stimulus`` is a StimulusSequence or a list of per-cycle input maps.
    The reset input (if any) is held active during the first
    ``reset_cycles`` cycles while the stimulus is still applied; an empty or
    shorter stimulus is padded with held inputs so those cycles still run.
    """
    from ..stimulus import StimulusSequence, materialize

    if isinstance(stimulus, StimulusSequence):
        cycles = materialize(stimulus, design.iface)
    else:
        _check_inputs(design, stimulus)
        cycles = materialize(StimulusSequence([dict(c) for c in stimulus]), design.iface)
    if design.iface.reset is None:
        reset_cycles = 0
    mat = input_matrix(design, cycles)
    if mat.shape[0] < reset_cycles:
        pad = np.repeat(mat[-1:] if mat.shape[0] else np.zeros((1, mat.shape[1]), np.int64),
                        reset_cycles - mat.shape[0], axis=0)
        mat = np.vstack([mat, pad])
    state = design.initial_state()
    coverage = design.new_coverage()
    return simulate(design, mat, state, coverage, reset_cycles=reset_cycles)


# -- reporting -----------------------------------------------------------------


@dataclass(frozen=True)
class CoverageSummary:
    line_pct: float
    branch_pct: float
    uncovered: tuple[Coverpoint, ...]

    @property
    def line_closed(self) -> bool:
        return self.line_pct >= 100.0

    @property
    def closed(self) -> bool:
        return self.line_pct >= 100.0 and self.branch_pct >= 100.0


def coverage_summary(design: Design, coverage: CoverageMap) -> CoverageSummary:
    if len(coverage) != design.n_coverpoints:
        raise SimulationError(f"coverage map has {len(coverage)} entries, design has {design.n_coverpoints}")
    hit = coverage.hits > 0
    is_line = design.is_line
    n_line = int(is_line.sum())
    n_branch = design.n_coverpoints - n_line
    line_pct = 100.0 * int((hit & is_line).sum()) / n_line if n_line else 100.0
    branch_pct = 100.0 * int((hit & ~is_line).sum()) / n_branch if n_branch else 100.0
    uncovered = sorted((cp for cp in design.coverpoints if not hit[cp.id]), key=lambda cp: (cp.line, cp.id))
    return CoverageSummary(line_pct, branch_pct, tuple(uncovered))


def trace_to_csv(design: Design, inputs: np.ndarray, trace: np.ndarray) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["cycle", *design.iface.input_names, *(n for n, _ in design.iface.outputs)])
    for t in range(trace.shape[0]):
        writer.writerow([t, *(int(v) for v in inputs[t]), *(int(v) for v in trace[t])])
    return buf.getvalue()
