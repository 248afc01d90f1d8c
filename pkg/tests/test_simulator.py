import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from llmcdg.errors import ElaborationError, NonConvergenceError, SimulationError
from llmcdg.sim import coverage_summary, run, step
from llmcdg.sim.simulator import trace_to_csv
from refeval import RefModel

COUNTER = """
module counter (input clk, input rst, input en, output reg [7:0] count);
  always @(posedge clk) begin
    if (rst)
      count <= 8'd0;
    else if (en)
      count <= count + 8'd1;
  end
endmodule
"""

TOGGLE = """
module toggle (input clk, input in, output reg state);
  always @(posedge clk)
    case (state)
      1'b0:
        if (in)
          state <= 1'b1;
      1'b1:
        if (in)
          state <= 1'b0;
    endcase
endmodule
"""

SWAP = """
module swap (input clk, input rst, input load, input [3:0] x, output reg [3:0] a, output reg [3:0] b);
  always @(posedge clk) begin
    if (rst) begin
      a <= 4'd1;
      b <= 4'd2;
    end else if (load)
      a <= x;
    else begin
      a <= b;
      b <= a;
    end
  end
endmodule
"""


def cov_by_name(design, coverage):
    return {cp.name: int(coverage.hits[cp.id]) for cp in design.coverpoints}


def cp_id(design, line, kind, arm=None):
    for cp in design.coverpoints:
        if cp.line == line and cp.kind == kind and (arm is None or cp.arm == arm):
            return cp.id
    raise KeyError((line, kind, arm))


def test_mux_truth_table(designs):
    d = designs["s01"]
    res = run(d, [{"s": 0, "a": 1, "b": 0}])
    assert dict(zip([n for n, _ in d.iface.outputs], res.trace[0])) == {"y": 1, "z": 1}
    assert res.coverage.hits[cp_id(d, 7, "line")] == 1


def test_s01_coverpoint_table(designs):
    d = designs["s01"]
    kinds = [(cp.line, cp.kind, cp.arm) for cp in d.coverpoints]
    assert kinds == [(7, "line", ""), (10, "line", ""), (11, "branch", "then"), (11, "line", ""),
                     (13, "branch", "else"), (13, "line", "")]
    assert [cp.name for cp in d.coverpoints][:3] == ["Cs01_L7_line0", "Cs01_L10_line0", "Cs01_L11_branch0"]


def test_counter_enable(make_design):
    d = make_design(COUNTER)
    cycles = [{"en": 0}] + [{"en": 1}] * 3
    res = run(d, cycles, reset_cycles=1)
    assert d.value(res.state, "count") == 3
    inc = cp_id(d, 7, "line")
    assert res.coverage.hits[inc] == 3
    res = run(d, cycles + [{"en": 0}], reset_cycles=1)
    assert all(res.coverage.hits[cp.id] > 0 for cp in d.coverpoints if cp.kind == "branch")


def test_counter_held_disabled(make_design):
    d = make_design(COUNTER)
    res = run(d, [{"en": 0}] * 10, reset_cycles=1)
    assert res.coverage.hits[cp_id(d, 7, "line")] == 0


def test_two_state_fsm_transitions(make_design):
    d = make_design(TOGGLE)
    res = run(d, [{"in": 1}, {"in": 1}], reset_cycles=0)
    assert d.value(res.state, "state") == 0
    taken = [cp for cp in d.coverpoints if cp.kind == "branch" and cp.arm in ("1'b0", "1'b1", "then")]
    assert len(taken) == 4 and all(res.coverage.hits[cp.id] == 1 for cp in taken)


def test_empty_stimulus_runs_reset_cycles(designs):
    d = designs["m03"]
    res = run(d, [], reset_cycles=2)
    assert res.trace.shape[0] == 2
    hit_lines = {cp.line for cp in d.coverpoints if res.coverage.hits[cp.id]}
    assert hit_lines == {13, 14, 15}


def test_exhaustive_mux_closes(designs):
    d = designs["s01"]
    cycles = [{"a": a, "b": b, "s": s} for a in (0, 1) for b in (0, 1) for s in (0, 1)]
    s = coverage_summary(d, run(d, cycles).coverage)
    assert (s.line_pct, s.branch_pct, s.uncovered) == (100.0, 100.0, ())


def test_one_sided_mux_reports_arm(designs):
    d = designs["s01"]
    s = coverage_summary(d, run(d, [{"s": 0, "a": 1}] * 4).coverage)
    assert s.line_pct < 100.0
    assert [(cp.line, cp.arm) for cp in s.uncovered] == [(11, "then"), (11, "")]


def test_summary_of_zero_map(designs):
    d = designs["s05"]
    s = coverage_summary(d, d.new_coverage())
    assert (s.line_pct, s.branch_pct) == (0.0, 0.0)
    assert len(s.uncovered) == d.n_coverpoints
    assert [cp.line for cp in s.uncovered] == sorted(cp.line for cp in s.uncovered)


def test_nonblocking_swap(make_design):
    d = make_design(SWAP)
    res = run(d, [{"load": 0}, {"load": 0}], reset_cycles=1)
    assert (d.value(res.state, "a"), d.value(res.state, "b")) == (2, 1)


def test_blocking_assignments_are_sequential(make_design):
    d = make_design("""
module m (input [3:0] x, output reg [3:0] y);
  reg [3:0] t;
  always @(*) begin
    t = x + 4'd1;
    y = t + t;
  end
endmodule
""")
    assert run(d, [{"x": 3}]).trace[0].tolist() == [8]


def test_width_rules(make_design):
    d = make_design("""
module m (input [3:0] a, input [3:0] b, output [3:0] sum4, output [4:0] carry5, output [7:0] cat,
          output lt, output [7:0] rep, output [3:0] neg);
  assign sum4 = a + b;
  assign carry5 = {1'b0, a} + {1'b0, b};
  assign cat = {a, b};
  assign lt = a < b;
  assign rep = {2{a[1:0], 2'b01}};
  assign neg = -a;
endmodule
""")
    out = run(d, [{"a": 12, "b": 9}]).trace[0].tolist()
    assert out == [(12 + 9) & 15, 21, 0xC9, 0, 0b00010001, (-12) & 15]


def test_combinational_loop_reports_nonconvergence(make_design):
    d = make_design("module m (input a, output y); wire w; assign w = ~w ^ a; assign y = w; endmodule")
    with pytest.raises(NonConvergenceError):
        run(d, [{"a": 0}])


def test_reg_driven_twice_rejected(make_design):
    with pytest.raises(ElaborationError):
        make_design("module m (input clk, input a, output reg y); assign y = a; "
                    "always @(posedge clk) y <= a; endmodule")


def test_empty_module():
    from llmcdg.sim import load_design
    d = load_design("module m (input a, output y); endmodule")
    assert d.n_coverpoints == 0
    s = coverage_summary(d, run(d, [{"a": 1}]).coverage)
    assert (s.line_pct, s.branch_pct) == (100.0, 100.0)


def test_four_arm_case_without_default_gets_implicit_default(make_design):
    d = make_design("""
module m (input [2:0] sel, output reg [1:0] y);
  always @(*)
    case (sel)
      3'd0: y = 2'd0;
      3'd1: y = 2'd1;
      3'd2: y = 2'd2;
      3'd3: y = 2'd3;
    endcase
endmodule
""")
    arms = [cp for cp in d.coverpoints if cp.kind == "branch"]
    assert len(arms) == 5 and arms[-1].arm == "default"


def test_full_case_has_no_implicit_default(make_design):
    d = make_design("""
module m (input [1:0] sel, output reg y);
  always @(*)
    case (sel)
      2'd0: y = 1'b0;
      2'd1: y = 1'b1;
      2'd2: y = 1'b0;
      2'd3: y = 1'b1;
    endcase
endmodule
""")
    assert [cp.arm for cp in d.coverpoints if cp.kind == "branch"] == ["2'd0", "2'd1", "2'd2", "2'd3"]


def test_input_range_checked(designs):
    with pytest.raises(SimulationError):
        run(designs["s01"], [{"a": 2}])
    with pytest.raises(SimulationError):
        run(designs["s01"], [{"nope": 0}])


def test_step_matches_run(designs):
    d = designs["m04"]
    cycles = [{"en": 1, "clr": 0}] * 12
    res = run(d, cycles, reset_cycles=0)
    state, cov = d.initial_state(), d.new_coverage()
    for c in cycles:
        state = step(d, state, c, cov)
    assert state == res.state and cov == res.coverage


def test_trace_csv(designs):
    d = designs["s01"]
    res = run(d, [{"a": 1}, {"s": 1}])
    assert trace_to_csv(d, res.inputs, res.trace) == "cycle,a,b,s,y,z\n0,1,0,0,1,1\n1,1,0,1,0,0\n"


# -- properties ----------------------------------------------------------------

from llmcdg.bench import get_spec

_CACHE = {}


def design(design_id):
    if design_id not in _CACHE:
        _CACHE[design_id] = get_spec(design_id).load()
    return _CACHE[design_id]


SEQ_IDS = ["m01", "m02", "m03", "m04", "m05", "m06", "m07", "m08", "c01"]


def _stim(design, data, n):
    return [{name: data.draw(st.integers(0, (1 << w) - 1)) for name, w in design.iface.inputs} for _ in range(n)]


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_determinism_and_monotonicity(data):
    d = design(data.draw(st.sampled_from(SEQ_IDS)))
    cycles = _stim(d, data, data.draw(st.integers(1, 30)))
    a, b = run(d, cycles), run(d, cycles)
    assert np.array_equal(a.trace, b.trace) and a.coverage == b.coverage
    longer = run(d, cycles + _stim(d, data, data.draw(st.integers(1, 10))))
    assert np.all(longer.coverage.hits >= a.coverage.hits)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_if_branch_conservation(data):
    d = design(data.draw(st.sampled_from(SEQ_IDS + ["s03", "s10"])))
    res = run(d, _stim(d, data, data.draw(st.integers(0, 40))))
    # arms nest like brackets in emission order; an if's own line coverpoint
    # comes right before its then arm
    cps, hits, stack = d.coverpoints, res.coverage.hits, []
    for i, cp in enumerate(cps):
        if cp.arm == "then":
            stack.append((next(c for c in reversed(cps[:i]) if c.kind == "line"), cp))
        elif cp.arm == "else":
            line_cp, then_cp = stack.pop()
            assert hits[then_cp.id] + hits[cp.id] == hits[line_cp.id]
    assert not stack


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_values_fit_widths(data):
    d = design(data.draw(st.sampled_from(SEQ_IDS)))
    res = run(d, _stim(d, data, 20))
    for name, idx in d.index.items():
        assert 0 <= res.state.values[idx] < (1 << d.widths[name])


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_matches_reference_on_sequential_designs(data):
    d = design(data.draw(st.sampled_from(SEQ_IDS)))
    cycles = _stim(d, data, data.draw(st.integers(1, 40)))
    res = run(d, cycles, reset_cycles=1)
    ref = RefModel(d.module)
    outs = [n for n, _ in d.iface.outputs]
    for t, c in enumerate(cycles):
        level = d.iface.reset.active_level
        got = ref.cycle(c, (d.iface.reset.name, level if t == 0 else 1 - level))
        assert [got[n] for n in outs] == res.trace[t].tolist()
