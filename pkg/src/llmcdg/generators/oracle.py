"""Breadth-first reachability oracle.

From the current register state, search the register-state graph for the
shortest input sequence whose last cycle hits a coverpoint that is still
uncovered, then repeat from where that sequence ends. One BFS layer is evaluated by a single kernel call over every
(frontier state, input vector) pair.
"""

from __future__ import annotations

import logging

import numpy as np

from ..errors import GeneratorError, NonConvergenceError, StateSpaceTooLargeError, UnreachableError
from ..sim import kernels as K
from ..sim.simulator import MAX_SWEEPS, Design, simulate
from ..stimulus import StimulusSequence
from .base import Generator, GeneratorContext
from .prng import XorShift64Star

log = logging.getLogger(__name__)

MAX_REGISTER_BITS = 24
DEFAULT_EXHAUSTIVE_WIDTH = 12
DEFAULT_SAMPLES = 4096
PAIRS_PER_CALL = 1 << 18


def enumerate_inputs(design: Design, exhaustive_width: int = DEFAULT_EXHAUSTIVE_WIDTH,
                     samples: int = DEFAULT_SAMPLES, seed: int = 0) -> tuple[np.ndarray, bool]:
    """Input vectors tried from every state, and whether the set is exhaustive.

    Exhaustive order counts up with the first drivable input in the least
    significant position, so the all-zero vector always comes first.
    """
    widths = [w for _, w in design.iface.inputs]
    total = sum(widths)
    if total <= exhaustive_width:
        codes = np.arange(1 << total, dtype=np.int64)
        exhaustive = True
    else:
        rng = XorShift64Star(seed)
        picked = {0, (1 << total) - 1}
        while len(picked) < samples:
            picked.add(rng.bits(total))
        codes = np.array(sorted(picked), dtype=np.int64)
        exhaustive = False
    mat = np.zeros((codes.shape[0], len(widths)), dtype=np.int64)
    offset = 0
    for j, w in enumerate(widths):
        mat[:, j] = (codes >> offset) & ((1 << w) - 1)
        offset += w
    return mat, exhaustive


class OracleGenerator(Generator):
    name = "oracle"

    def __init__(self, exhaustive_width: int = DEFAULT_EXHAUSTIVE_WIDTH, samples: int = DEFAULT_SAMPLES,
                 seed: int = 0, chain: bool = True):
        self.chain = chain
        self.exhaustive_width = exhaustive_width
        self.samples = samples
        self.seed = seed
        self._inputs_cache: dict[int, np.ndarray] = {}

    def describe(self) -> dict:
        return {"generator": self.name, "exhaustive_width": self.exhaustive_width,
                "samples": self.samples, "seed": self.seed, "chain": self.chain}

    def _inputs(self, design: Design) -> np.ndarray:
        key = id(design)
        if key not in self._inputs_cache:
            mat, exhaustive = enumerate_inputs(design, self.exhaustive_width, self.samples, self.seed)
            if not exhaustive:
                log.warning("%s: %d drivable input bits exceed %d; BFS samples %d input vectors per state, "
                            "so reachability results are approximate", design.name,
                            design.iface.input_width, self.exhaustive_width, mat.shape[0])
            self._inputs_cache[key] = mat
        return self._inputs_cache[key]

    def next_stimulus(self, ctx: GeneratorContext) -> StimulusSequence:
        """Shortest path to any uncovered coverpoint.

        With ``chain`` (the default) further legs are appended, each a BFS
        from the state the previous leg ends in, until nothing reachable is
        left; the sequence then closes coverage in one iteration.
        """
        design = ctx.design
        uncovered = ctx.coverage.hits == 0
        if not uncovered.any():
            raise GeneratorError("coverage is already complete; nothing left to target")
        if design.register_width > MAX_REGISTER_BITS:
            raise StateSpaceTooLargeError(
                f"{design.register_width} register bits exceed the {MAX_REGISTER_BITS}-bit BFS limit"
            )
        inputs = self._inputs(design)
        state = ctx.state.copy()
        coverage = ctx.coverage.copy()
        rows: list[int] = []
        while uncovered.any():
            path = shortest_covering_path(design, state.values, uncovered, inputs)
            if path is None:
                break
            simulate(design, inputs[path], state, coverage)
            rows.extend(path)
            uncovered = coverage.hits == 0
            if not self.chain:
                break
        if not rows:
            dead = [cp for cp in design.coverpoints if uncovered[cp.id]]
            raise UnreachableError(dead, f"{len(dead)} coverpoint(s) cannot be reached from the current state: "
                                         + ", ".join(cp.name for cp in dead))
        names = design.iface.input_names
        return StimulusSequence([{n: int(inputs[i, j]) for j, n in enumerate(names)} for i in rows])


def _pack(regs: np.ndarray, widths: np.ndarray) -> np.ndarray:
    keys = np.zeros(regs.shape[0], dtype=np.int64)
    offset = 0
    for k, w in enumerate(widths):
        keys |= regs[:, k] << offset
        offset += int(w)
    return keys


def shortest_covering_path(design: Design, start_values: np.ndarray, uncovered: np.ndarray,
                           inputs: np.ndarray) -> list[int] | None:
    """Input-row indices of the shortest path ending in a cycle that hits ``uncovered``."""
    reg_idx = design.register_idx
    widths = np.array([design.widths[n] for n in design.register_names], dtype=np.int64)
    base = np.zeros_like(start_values)
    frontier = start_values[reg_idx].reshape(1, -1).astype(np.int64)
    root = int(_pack(frontier, widths)[0])
    parent: dict[int, tuple[int, int]] = {root: (-1, -1)}
    frontier_keys = [root]
    n_in = inputs.shape[0]
    uncovered = np.ascontiguousarray(uncovered, dtype=np.bool_)
    chunk = max(1, PAIRS_PER_CALL // max(n_in, 1))

    while frontier.shape[0]:
        next_rows: list[np.ndarray] = []
        next_keys: list[int] = []
        for lo in range(0, frontier.shape[0], chunk):
            part = np.ascontiguousarray(frontier[lo:lo + chunk])
            pairs = part.shape[0] * n_in
            next_regs = np.zeros((pairs, reg_idx.shape[0]), dtype=np.int64)
            hits = np.zeros(pairs, dtype=np.bool_)
            status = K.expand_frontier(design.prog, base, reg_idx, part, inputs, design.input_idx,
                                       design.reset_idx, design.reset_level, uncovered, MAX_SWEEPS,
                                       next_regs, hits)
            if status < 0:
                raise NonConvergenceError("combinational logic did not settle during reachability search")
            if hits.any():
                row = int(np.argmax(hits))
                f, i = divmod(row, n_in)
                path = [i]
                key = frontier_keys[lo + f]
                while parent[key][0] != -1:
                    key, inp = parent[key]
                    path.append(inp)
                path.reverse()
                return path
            keys = _pack(next_regs, widths)
            _, first = np.unique(keys, return_index=True)
            for row in np.sort(first):
                key = int(keys[row])
                if key not in parent:
                    f, i = divmod(int(row), n_in)
                    parent[key] = (frontier_keys[lo + f], i)
                    next_keys.append(key)
                    next_rows.append(next_regs[row])
        frontier = np.array(next_rows, dtype=np.int64).reshape(-1, reg_idx.shape[0])
        frontier_keys = next_keys
    return None
