import numpy as np
import pytest

from llmcdg.errors import GeneratorError, StateSpaceTooLargeError, UnreachableError
from llmcdg.generators import (
    GeneratorContext,
    LlmGenerator,
    OracleGenerator,
    RandomGenerator,
    XorShift64Star,
    enumerate_inputs,
)
from llmcdg.generators.prng import splitmix64
from llmcdg.llm import ChatClient, ScriptedTransport
from llmcdg.loop import reset_state
from llmcdg.prompts import stimulus_block
from llmcdg.sim import simulate
from llmcdg.sim.simulator import input_matrix
from llmcdg.stimulus import StimulusSequence, materialize

BYTE = """module byte_in (input [7:0] x, output [7:0] y);
  assign y = x;
endmodule
"""

TOGGLE = """module toggle (input clk, input rst, input in, output reg q);
  always @(posedge clk) begin
    if (rst)
      q <= 1'b0;
    else if (in)
      q <= ~q;
  end
endmodule
"""

STUCK = """module stuck (input clk, input rst, input in, output reg q);
  always @(posedge clk) begin
    if (rst)
      q <= 1'b0;
    else if (q)
      q <= 1'b0;
  end
endmodule
"""

WIDE = """module wide (input clk, input [31:0] d, output reg [31:0] q);
  always @(posedge clk)
    q <= d;
endmodule
"""


def ctx_for(design, reset=1):
    cov = design.new_coverage()
    state = reset_state(design, cov, reset)
    return GeneratorContext(design, cov, state)


def test_splitmix_published_value():
    # first output of splitmix64 from state 0
    assert splitmix64(0) == 0xE220A8397B1DCDAF


def test_prng_matches_uint64_reference():
    x = np.uint64(splitmix64(9))
    expected = []
    with np.errstate(over="ignore"):
        for _ in range(5):
            x ^= x >> np.uint64(12)
            x ^= x << np.uint64(25)
            x ^= x >> np.uint64(27)
            expected.append(int(x * np.uint64(0x2545F4914F6CDD1D)))
    rng = XorShift64Star(9)
    assert [rng.next_u64() for _ in range(5)] == expected
    assert XorShift64Star(0).state != 0


def test_prng_bits_range():
    rng = XorShift64Star(7)
    assert all(0 <= rng.bits(3) < 8 for _ in range(1000))
    assert rng.bits(0) == 0


def test_random_is_deterministic(make_design):
    d = make_design(BYTE)
    one = RandomGenerator(batch_cycles=16, seed=5).next_stimulus(ctx_for(d))
    two = RandomGenerator(batch_cycles=16, seed=5).next_stimulus(ctx_for(d))
    other = RandomGenerator(batch_cycles=16, seed=6).next_stimulus(ctx_for(d))
    assert one.cycles == two.cycles
    assert one.cycles != other.cycles
    assert len(one) == 16


def test_random_uniform_mean(make_design):
    d = make_design(BYTE)
    gen = RandomGenerator(batch_cycles=10_000, seed=3)
    vals = np.array([c["x"] for c in gen.next_stimulus(ctx_for(d)).cycles])
    assert 117 <= vals.mean() <= 138
    assert vals.min() >= 0 and vals.max() <= 255
    assert len(np.unique(vals)) == 256


def test_random_rejects_bad_batch():
    with pytest.raises(ValueError):
        RandomGenerator(batch_cycles=0)


def test_enumerate_inputs_exhaustive_and_sampled(make_design):
    mat, exhaustive = enumerate_inputs(make_design(BYTE))
    assert exhaustive and mat.shape == (256, 1) and mat[0, 0] == 0
    mat, exhaustive = enumerate_inputs(make_design(BYTE), exhaustive_width=4, samples=20)
    assert not exhaustive and mat.shape == (20, 1)
    assert 0 in mat and 255 in mat


def drive(ctx, rows):
    d = ctx.design
    simulate(d, np.array(rows, dtype=np.int64).reshape(-1, len(d.iface.inputs)), ctx.state, ctx.coverage)


def test_oracle_single_leg_is_shortest(make_design):
    d = make_design(TOGGLE)
    ctx = ctx_for(d)
    # the implicit else arm is the nearest target straight after reset
    assert OracleGenerator(chain=False).next_stimulus(ctx).cycles == [{"in": 0}]
    drive(ctx, [0])
    assert OracleGenerator(chain=False).next_stimulus(ctx).cycles == [{"in": 1}]


def test_oracle_chain_closes_everything(make_design):
    d = make_design(TOGGLE)
    ctx = ctx_for(d)
    seq = OracleGenerator().next_stimulus(ctx)
    simulate(d, input_matrix(d, materialize(seq, d.iface)), ctx.state, ctx.coverage)
    assert (ctx.coverage.hits > 0).all()


def test_oracle_fully_covered_raises(make_design):
    d = make_design(TOGGLE)
    ctx = ctx_for(d)
    ctx.coverage.hits[:] = 1
    with pytest.raises(GeneratorError):
        OracleGenerator().next_stimulus(ctx)


def test_oracle_unreachable(make_design):
    d = make_design(STUCK)
    ctx = ctx_for(d)
    drive(ctx, [0])
    with pytest.raises(UnreachableError) as info:
        OracleGenerator().next_stimulus(ctx)
    assert info.value.coverpoints
    assert all(cp.line == 6 for cp in info.value.coverpoints)


def test_oracle_state_space_limit(make_design):
    d = make_design(WIDE)
    with pytest.raises(StateSpaceTooLargeError):
        OracleGenerator().next_stimulus(ctx_for(d, reset=0))


def test_oracle_does_not_mutate_context(make_design):
    d = make_design(TOGGLE)
    ctx = ctx_for(d)
    hits, values = ctx.coverage.hits.copy(), ctx.state.values.copy()
    OracleGenerator().next_stimulus(ctx)
    assert np.array_equal(hits, ctx.coverage.hits)
    assert np.array_equal(values, ctx.state.values)


def test_llm_generator_scripted(designs):
    d = designs["m01"]
    answer = stimulus_block(StimulusSequence([{"cmd": 1}, {"cmd": 2}]))
    replies = iter(["Analysis.", answer])
    client = ChatClient(ScriptedTransport(lambda m: next(replies)))
    gen = LlmGenerator(client)
    seq = gen.next_stimulus(ctx_for(d))
    assert seq.cycles == [{"cmd": 1}, {"cmd": 2}]
    assert client.requests == 2
    assert gen.history.count == 1 and gen.history.total_cycles == 2
    assert gen.describe()["temperature"] == 0.7
