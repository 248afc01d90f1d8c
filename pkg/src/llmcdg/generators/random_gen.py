from __future__ import annotations

from ..stimulus import StimulusSequence
from .base import Generator, GeneratorContext
from .prng import XorShift64Star

DEFAULT_BATCH_CYCLES = 32


class RandomGenerator(Generator):
    """Independent uniform values for every drivable input, every cycle."""

    name = "random"

    def __init__(self, batch_cycles: int = DEFAULT_BATCH_CYCLES, seed: int = 0):
        if batch_cycles < 1:
            raise ValueError("batch_cycles must be positive")
        self.batch_cycles = batch_cycles
        self.seed = seed
        self.rng = XorShift64Star(seed)

    def next_stimulus(self, ctx: GeneratorContext) -> StimulusSequence:
        inputs = ctx.design.iface.inputs
        bits = self.rng.bits
        cycles = [{name: bits(w) for name, w in inputs} for _ in range(self.batch_cycles)]
        return StimulusSequence(cycles)

    def describe(self) -> dict:
        return {"generator": self.name, "batch_cycles": self.batch_cycles, "seed": self.seed,
                "prng": "xorshift64*", "distribution": "uniform per input per cycle"}
