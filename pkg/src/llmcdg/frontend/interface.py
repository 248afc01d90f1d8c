"""Testbench interface extraction: which inputs the generator drives."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .ast import Module


@dataclass(frozen=True)
class NamingRules:
    """Port-name conventions used to spot clock and reset inputs."""

    clock_names: tuple[str, ...] = ("clk", "clock")
    reset_active_high: tuple[str, ...] = ("rst", "reset")
    reset_active_low: tuple[str, ...] = ("rst_n", "resetn")

    @classmethod
    def from_dict(cls, cfg: dict) -> "NamingRules":
        base = cls()
        return cls(
            tuple(cfg.get("clock_names", base.clock_names)),
            tuple(cfg.get("reset_active_high", base.reset_active_high)),
            tuple(cfg.get("reset_active_low", base.reset_active_low)),
        )


@dataclass(frozen=True)
class ResetSpec:
    name: str
    active_high: bool

    @property
    def active_level(self) -> int:
        return 1 if self.active_high else 0


@dataclass(frozen=True)
class InterfaceSpec:
    inputs: tuple[tuple[str, int], ...]  # drivable (name, width), port order
    outputs: tuple[tuple[str, int], ...]
    clock: Optional[str] = None
    reset: Optional[ResetSpec] = None
    widths: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def input_names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.inputs)

    @property
    def input_width(self) -> int:
        return sum(w for _, w in self.inputs)

    def width_of(self, name: str) -> Optional[int]:
        for n, w in self.inputs:
            if n == name:
                return w
        return None

    @property
    def is_sequential(self) -> bool:
        return self.clock is not None


def extract_interface(module: Module, rules: NamingRules | None = None) -> InterfaceSpec:
    rules = rules or NamingRules()
    clock = None
    reset = None
    drivable = []
    for p in module.inputs:
        if clock is None and p.name in rules.clock_names and p.width == 1:
            clock = p.name
        elif reset is None and p.name in rules.reset_active_high and p.width == 1:
            reset = ResetSpec(p.name, True)
        elif reset is None and p.name in rules.reset_active_low and p.width == 1:
            reset = ResetSpec(p.name, False)
        else:
            drivable.append((p.name, p.width))
    outputs = tuple((p.name, p.width) for p in module.outputs)
    return InterfaceSpec(tuple(drivable), outputs, clock, reset, {p.name: p.width for p in module.ports})
