import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from llmcdg.errors import (
    JsonMalformedError,
    StimulusError,
    UnknownSignalError,
    ValueOutOfRangeError,
    WrongShapeError,
)
from llmcdg.frontend import extract_interface, parse_source
from llmcdg.stimulus import StimulusSequence, concat, decode, encode, materialize, validate

S01 = extract_interface(parse_source("module s01 (input a, input b, input s, output y); endmodule"))
SEQ = extract_interface(parse_source(
    "module m (input clk, input rst, input en, input [7:0] d, input [11:0] w, output y); endmodule"))


def test_direct_mapping():
    seq = decode('{"stimulus":[{"a":1,"b":0,"s":1}]}', S01)
    assert seq.cycles == [{"a": 1, "b": 0, "s": 1}]


@pytest.mark.parametrize("raw,value", [('"0xFF"', 255), ('"0b101"', 5), ('"17"', 17), ("3", 3), ('"0x1_0"', 16)])
def test_value_forms(raw, value):
    assert decode('{"stimulus":[{"d":%s}]}' % raw, SEQ).cycles[0]["d"] == value


def test_out_of_range():
    with pytest.raises(ValueOutOfRangeError) as info:
        decode('{"stimulus":[{"en":2}]}', SEQ)
    assert (info.value.name, info.value.width) == ("en", 1)
    assert "1-bit" in str(info.value)


@pytest.mark.parametrize("text,err", [
    ("{", JsonMalformedError),
    (b"\xff\xfe", JsonMalformedError),
    ("[]", WrongShapeError),
    ('{"stim": []}', WrongShapeError),
    ('{"stimulus": {"a": 1}}', WrongShapeError),
    ('{"stimulus": [1]}', WrongShapeError),
    ('{"stimulus": [{"a": true}]}', WrongShapeError),
    ('{"stimulus": [{"a": 0.5}]}', WrongShapeError),
    ('{"stimulus": [{"a": "one"}]}', WrongShapeError),
    ('{"stimulus": [{"a": -1}]}', ValueOutOfRangeError),
    ('{"stimulus": [{"q": 1}]}', UnknownSignalError),
    ('{"stimulus": [{"A": 1}]}', UnknownSignalError),
])
def test_typed_errors(text, err):
    with pytest.raises(err) as info:
        decode(text, S01)
    assert str(info.value)


def test_clock_and_reset_are_not_drivable():
    for name in ("clk", "rst"):
        with pytest.raises(UnknownSignalError) as info:
            decode('{"stimulus":[{"%s":1}]}' % name, SEQ)
        assert "testbench" in str(info.value)


def test_materialize_hold_last():
    assert materialize(StimulusSequence([{"a": 1}, {}]), S01) == [{"a": 1, "b": 0, "s": 0}] * 2
    assert materialize(StimulusSequence([]), S01) == []
    assert materialize(StimulusSequence([{"s": 1}, {"s": 0, "a": 1}]), S01) == [
        {"a": 0, "b": 0, "s": 1}, {"a": 1, "b": 0, "s": 0}]


def test_concat():
    x = StimulusSequence([{"a": 1}, {"b": 1}, {}])
    y = StimulusSequence([{"s": 1}, {}])
    assert len(concat(x, y)) == 5
    assert concat(x, StimulusSequence()) == x


def test_validate():
    validate(StimulusSequence([{"d": 255}]), SEQ)
    with pytest.raises(ValueOutOfRangeError):
        validate(StimulusSequence([{"d": 256}]), SEQ)


def sequences(iface):
    cycle = st.fixed_dictionaries({}, optional={n: st.integers(0, (1 << w) - 1) for n, w in iface.inputs})
    return st.lists(cycle, max_size=20).map(StimulusSequence)


@settings(max_examples=200)
@given(sequences(SEQ))
def test_round_trip(seq):
    assert decode(encode(seq), SEQ) == seq


@settings(max_examples=300)
@given(st.binary(max_size=200))
def test_arbitrary_bytes_fail_typed(data):
    try:
        decode(data, SEQ)
    except StimulusError:
        pass


json_values = st.recursive(
    st.none() | st.booleans() | st.integers() | st.floats(allow_nan=False) | st.text(max_size=8),
    lambda ch: st.lists(ch, max_size=4) | st.dictionaries(st.sampled_from(["en", "d", "w", "x", "clk"]), ch,
                                                          max_size=4),
    max_leaves=12,
)


@settings(max_examples=300)
@given(st.lists(json_values, max_size=5))
def test_structured_garbage_fails_typed(cycles):
    import json
    try:
        seq = decode(json.dumps({"stimulus": cycles}), SEQ)
    except StimulusError:
        return
    validate(seq, SEQ)
