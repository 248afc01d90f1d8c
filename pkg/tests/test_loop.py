import json

import pytest

from llmcdg.errors import ExtractionExhaustedError, UnreachableError
from llmcdg.generators import Generator, OracleGenerator, RandomGenerator
from llmcdg.loop import LoopBudget, RunRecord, run_cdg
from llmcdg.stimulus import StimulusSequence

CHAIN = """module chain (input clk, input rst, input go, output reg [2:0] s, output reg hit);
  always @(posedge clk) begin
    if (rst) begin
      s <= 3'd0;
      hit <= 1'b0;
    end else if (go) begin
      s <= s + 3'd1;
      if (s == 3'd7)
        hit <= 1'b1;
    end
  end
endmodule
"""

COMB = """module comb (input a, output reg y);
  always @(*) begin
    if (a)
      y = 1'b1;
    else
      y = 1'b0;
  end
endmodule
"""


class Fixed(Generator):
    """Same sequence every iteration; raises any exception handed in ``fail``."""

    name = "fixed"

    def __init__(self, cycles, fail=()):
        self.cycles = cycles
        self.fail = list(fail)
        self.contexts = []

    def next_stimulus(self, ctx):
        self.contexts.append(ctx)
        if self.fail:
            raise self.fail.pop(0)
        return StimulusSequence([dict(c) for c in self.cycles])


@pytest.fixture
def chain(make_design):
    return make_design(CHAIN, "chain.v")


def test_state_carries_over(chain):
    # 4 go-cycles per call: s reaches 7 only on the second call and the hit line on the fourth cycle of it
    gen = Fixed([{"go": 1}] * 4)
    rec = run_cdg(chain, gen, LoopBudget(max_iterations=5))
    assert rec.status == "closure"
    assert rec.iterations == 2
    assert rec.cycles_to_closure == 8
    assert [e.cumulative_cycles for e in rec.entries] == [4, 8]


def test_reset_between_iterations_blocks_progress(chain):
    rec = run_cdg(chain, Fixed([{"go": 1}] * 4), LoopBudget(max_iterations=5), reset_between_iterations=True)
    assert rec.status == "budget-iterations"
    assert rec.iterations == 5
    assert rec.cycles_to_closure is None


def test_generator_sees_coverage_and_iteration(chain):
    gen = Fixed([{"go": 1}] * 4)
    run_cdg(chain, gen, LoopBudget(max_iterations=2))
    assert [c.iteration for c in gen.contexts] == [1, 2]
    assert [c.cycles_consumed for c in gen.contexts] == [0, 4]
    assert gen.contexts[1].last_stimulus is not None


def test_comb_design_closure_counts_cycles(make_design):
    d = make_design(COMB, "comb.v")
    rec = run_cdg(d, Fixed([{"a": 0}, {"a": 1}, {"a": 0}]))
    assert rec.status == "closure"
    assert rec.cycles_to_closure == 2
    assert rec.reset_cycles == 0
    assert rec.initial_line_pct == 0.0


def test_budget_cycles(chain):
    rec = run_cdg(chain, Fixed([{"go": 0}] * 30), LoopBudget(max_iterations=100, max_total_cycles=50))
    assert rec.status == "budget-cycles"
    assert rec.total_cycles == 50
    assert [e.cycles_added for e in rec.entries] == [30, 20]


def test_budget_time(chain):
    class Slow(Fixed):
        def next_stimulus(self, ctx):
            import time
            time.sleep(0.05)
            return super().next_stimulus(ctx)

    rec = run_cdg(chain, Slow([{"go": 0}]), LoopBudget(max_iterations=10 ** 6, wall_clock_s=0.2))
    assert rec.status == "budget-time"
    assert 1 <= rec.iterations < 20


def test_recoverable_error_is_recorded_and_loop_continues(chain):
    gen = Fixed([{"go": 1}] * 8, fail=[ExtractionExhaustedError(["bad json"])])
    rec = run_cdg(chain, gen, LoopBudget(max_iterations=5))
    assert rec.status == "closure"
    assert rec.errors[0]["iteration"] == 1
    assert rec.errors[0]["kind"] == "extraction-exhausted"
    assert rec.entries[0].iteration == 2


def test_fatal_error_stops(chain):
    gen = Fixed([{"go": 1}], fail=[UnreachableError([])])
    rec = run_cdg(chain, gen)
    assert rec.status == "generator-error"
    assert rec.iterations == 1 and not rec.entries


def test_invalid_stimulus_is_recorded(chain):
    rec = run_cdg(chain, Fixed([{"rst": 1}]), LoopBudget(max_iterations=3))
    assert rec.status == "budget-iterations"
    assert len(rec.errors) == 3


def test_monotone_and_deterministic(designs):
    d = designs["m03"]
    budget = LoopBudget(max_iterations=20)
    a = run_cdg(d, RandomGenerator(8, seed=4), budget)
    b = run_cdg(d, RandomGenerator(8, seed=4), budget)
    pcts = [p for _, p in a.curve()]
    assert pcts == sorted(pcts)
    cycles = [e.cumulative_cycles for e in a.entries]
    assert cycles == sorted(cycles)
    strip = lambda r: [(e.iteration, e.cycles_added, e.line_pct, e.branch_pct) for e in r.entries]
    assert strip(a) == strip(b) and a.cycles_to_closure == b.cycles_to_closure


def test_oracle_closes_m01_in_one_iteration(designs):
    rec = run_cdg(designs["m01"], OracleGenerator(), target="all")
    assert rec.status == "closure" and rec.iterations == 1
    assert rec.final_branch_pct == 100.0


def test_record_json_round_trip(chain):
    rec = run_cdg(chain, Fixed([{"go": 1}] * 4), LoopBudget(max_iterations=3))
    again = RunRecord.from_dict(json.loads(rec.to_json()))
    assert again == rec


def test_budget_validation():
    with pytest.raises(ValueError):
        LoopBudget(max_iterations=0)
    assert LoopBudget.from_dict({"wall_clock_s": 5}).wall_clock_s == 5.0
    assert LoopBudget() == LoopBudget(20, 60.0, 100_000)
