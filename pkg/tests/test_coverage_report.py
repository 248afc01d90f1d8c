import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from llmcdg.bench import get_spec
from llmcdg.coverage import (
    ALL_COVERED,
    FLAG,
    flagged_lines,
    render,
    render_annotated,
    render_llm_readable,
    render_original,
    strip_annotations,
)
from llmcdg.sim import coverage_summary, load_design, run

EXHAUSTIVE_S01 = [{"a": a, "b": b, "s": s} for a in (0, 1) for b in (0, 1) for s in (0, 1)]


def test_original_format(designs):
    d = designs["s01"]
    text = render_original(d, run(d, EXHAUSTIVE_S01).coverage).text
    assert text.splitlines()[0] == "Cs01_L7_line0 8"
    assert len(text.splitlines()) == d.n_coverpoints


def test_original_zero_coverage(designs):
    d = designs["s02"]
    assert all(line.endswith(" 0") for line in render_original(d, d.new_coverage()).text.splitlines())


def test_original_empty_design():
    d = load_design("module m (input a, output y); endmodule")
    assert render_original(d, d.new_coverage()).text == ""


def test_annotated_gutter(designs):
    d = designs["s01"]
    cov = run(d, [{"a": 1, "s": 0}] * 5).coverage
    lines = render_annotated(d, cov).text.splitlines()
    assert lines[6] == "      5\t  assign y = s ? b : a;"
    assert lines[0] == " " * 7 + "\t// s01: 2:1 multiplexer."
    assert lines[10] == "      0\t      z = b;"


def test_llm_readable_m01_avoiding_two_arms(designs):
    d = designs["m01"]
    cov = run(d, [{"cmd": 0}, {"cmd": 3}, {"cmd": 0}]).coverage
    report = render_llm_readable(d, cov)
    assert report.text.splitlines()[-1] == "UNCOVERED LINES: 12, 18, 19"
    assert flagged_lines(report) == [12, 18, 19]
    assert "        {state, done} <= 2'b10; // TO BE COVERED" in report.text


def test_llm_readable_closed(designs):
    d = designs["s01"]
    report = render_llm_readable(d, run(d, EXHAUSTIVE_S01).coverage)
    assert FLAG not in report.text
    assert report.text.endswith(ALL_COVERED + "\n")


def test_unknown_format(designs):
    with pytest.raises(ValueError):
        render(designs["s01"], designs["s01"].new_coverage(), "xml")


def test_crlf_and_no_trailing_newline_survive_stripping():
    text = "module m (input a, output y);\r\n  assign y = a;\r\nendmodule"
    d = load_design(text, "crlf.v")
    cov = run(d, [{"a": 1}]).coverage
    for fmt in ("annotated", "llm-readable"):
        assert strip_annotations(render(d, cov, fmt)) == text


IDS = ["s01", "s03", "s07", "m01", "m02", "m05", "c01"]
_CACHE = {}


def _design(i):
    if i not in _CACHE:
        _CACHE[i] = get_spec(i).load()
    return _CACHE[i]


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_flag_iff_zero_hit_and_strip_roundtrip(data):
    d = _design(data.draw(st.sampled_from(IDS)))
    n = data.draw(st.integers(0, 12))
    cycles = [{k: data.draw(st.integers(0, (1 << w) - 1)) for k, w in d.iface.inputs} for _ in range(n)]
    cov = run(d, cycles).coverage
    report = render_llm_readable(d, cov)
    zero_lines = {cp.line for cp in d.coverpoints if cov.hits[cp.id] == 0}
    assert set(flagged_lines(report)) == zero_lines
    for fmt in ("annotated", "llm-readable"):
        assert strip_annotations(render(d, cov, fmt)) == d.source.text
    s = coverage_summary(d, cov)
    assert (FLAG not in report.text) == (s.line_pct == 100.0 and s.branch_pct == 100.0)
    assert np.all(cov.hits >= 0)
