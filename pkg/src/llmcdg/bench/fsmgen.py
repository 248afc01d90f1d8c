"""Parametric FSM generator for the complex benchmark level.

Each state has exactly two transitions. Branch A fires when the input bus
equals a seeded nonzero constant and advances along the chain
``i -> (i + 1) mod N``; branch B fires otherwise and jumps to a seeded
pseudo-random state. The chain makes every state reachable from reset.
B is a permutation of the states, so the all-zero input walks a set of
disjoint cycles.
"""

from __future__ import annotations

from ..generators.prng import XorShift64Star

MIN_STATES = 2
MAX_STATES = 1024


def state_width(state_count: int) -> int:
    return max(1, (state_count - 1).bit_length())


def fsm_name(state_count: int, seed: int) -> str:
    return f"fsm_n{state_count}_s{seed}"


def fsm_plan(state_count: int, seed: int) -> tuple[list[int], list[int]]:
    """(match constants, branch-B targets) for every state."""
    if not MIN_STATES <= state_count <= MAX_STATES:
        raise ValueError(f"state_count must be in [{MIN_STATES}, {MAX_STATES}], got {state_count}")
    if seed < 0:
        raise ValueError("seed must be non-negative")
    w = state_width(state_count)
    rng = XorShift64Star(seed)
    keys = []
    for _ in range(state_count):
        k = 0
        while k == 0:
            k = rng.bits(w)
        keys.append(k)
    targets = list(range(state_count))
    for i in range(state_count - 1, 0, -1):  # Fisher-Yates
        j = rng.next_u64() % (i + 1)
        targets[i], targets[j] = targets[j], targets[i]
    return keys, targets


def generate_fsm(state_count: int, seed: int) -> str:
    """Verilog source text; a pure function of (state_count, seed)."""
    keys, targets = fsm_plan(state_count, seed)
    w = state_width(state_count)
    lit = lambda v: f"{w}'d{v}"  # noqa: E731
    out = [
        f"// Generated chain FSM: {state_count} states, seed {seed}.",
        "// Branch A (in matches the state's key) advances along the chain,",
        "// branch B jumps to a seeded state.",
        f"module {fsm_name(state_count, seed)} (",
        "  input clk,",
        "  input rst,",
        f"  input [{w - 1}:0] in,",
        f"  output [{w - 1}:0] out",
        ");",
        "",
        f"  reg [{w - 1}:0] state;",
        "",
        "  assign out = state;",
        "",
        "  always @(posedge clk) begin",
        "    if (rst)",
        f"      state <= {lit(0)};",
        "    else",
        "      case (state)",
    ]
    for i in range(state_count):
        out += [
            f"        {lit(i)}:",
            f"          if (in == {lit(keys[i])})",
            f"            state <= {lit((i + 1) % state_count)};",
            "          else",
            f"            state <= {lit(targets[i])};",
        ]
    out += ["      endcase", "  end", "", "endmodule", ""]
    return "\n".join(out)
