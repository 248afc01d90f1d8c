from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..sim.simulator import CoverageMap, Design, SimState
from ..stimulus import StimulusSequence
from .prng import XorShift64Star


@dataclass
class GeneratorContext:
    design: Design
    coverage: CoverageMap
    state: SimState  # the state the returned stimulus will start from
    cycles_consumed: int = 0
    iteration: int = 0
    rng: XorShift64Star = field(default_factory=XorShift64Star)
    last_stimulus: Optional[StimulusSequence] = None


class Generator:
    """Stimulus generator contract.

    ``next_stimulus`` is only called while line coverage is incomplete and
    must return a non-empty sequence that validates against the design's
    interface.
    """

    name = "generator"

    def next_stimulus(self, ctx: GeneratorContext) -> StimulusSequence:
        raise NotImplementedError

    def describe(self) -> dict:
        return {"generator": self.name}
