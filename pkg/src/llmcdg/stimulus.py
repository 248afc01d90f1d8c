"""Multi-cycle stimulus model and its JSON wire format.

Wire format::

    {"stimulus": [{"a": 1, "b": "0x3"}, {"s": "0b1"}, {}]}

Each list element is one clock cycle. Values are non-negative integers or
strings in decimal, ``0x`` hex or ``0b`` binary. A signal left out of a cycle
keeps its previous value; before the first assignment every input is 0.
Clock and reset are driven by the harness and must not appear.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import (
    JsonMalformedError,
    UnknownSignalError,
    ValueOutOfRangeError,
    WrongShapeError,
)
from .frontend.interface import InterfaceSpec

SCHEMA_TEXT = (
    '{"stimulus": [ {"<input name>": <value>, ...}, ... ]}\n'
    "- one object per clock cycle, in order\n"
    "- values: non-negative integers, or strings such as \"0x1f\" or \"0b101\"\n"
    "- an input omitted from a cycle keeps its previous value (0 before first use)\n"
    "- do not drive the clock or reset"
)


@dataclass
class StimulusSequence:
    cycles: list[dict[str, int]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.cycles)


def _parse_value(name: str, raw, width: int, cycle: int) -> int:
    where = f"cycle {cycle}, signal '{name}'"
    if isinstance(raw, bool) or not isinstance(raw, (int, str)):
        raise WrongShapeError(
            f"{where}: value {json.dumps(raw) if _jsonable(raw) else raw!r} must be a non-negative "
            "integer or a string like \"0x1f\" / \"0b101\""
        )
    if isinstance(raw, str):
        text = raw.strip().lower().replace("_", "")
        try:
            if text.startswith("0x"):
                value = int(text[2:], 16)
            elif text.startswith("0b"):
                value = int(text[2:], 2)
            elif text.isdigit():
                value = int(text, 10)
            else:
                raise ValueError
        except ValueError:
            raise WrongShapeError(f"{where}: cannot read {raw!r} as a number (use decimal, 0x.. or 0b..)") from None
    else:
        value = raw
    if value < 0 or value >= 1 << width:
        raise ValueOutOfRangeError(
            name, raw, width,
            f"{where}: value {raw} is out of range for a {width}-bit input (allowed 0..{(1 << width) - 1})",
        )
    return value


def _jsonable(v) -> bool:
    try:
        json.dumps(v)
        return True
    except (TypeError, ValueError):
        return False


def decode(json_text: str | bytes, iface: InterfaceSpec) -> StimulusSequence:
    """Parse and validate wire-format text against ``iface``."""
    if isinstance(json_text, (bytes, bytearray)):
        try:
            json_text = bytes(json_text).decode("utf-8")
        except UnicodeDecodeError:
            raise JsonMalformedError("stimulus text is not valid UTF-8") from None
    try:
        doc = json.loads(json_text)
    except (ValueError, RecursionError) as exc:
        raise JsonMalformedError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or "stimulus" not in doc:
        raise WrongShapeError('expected a JSON object with a top-level "stimulus" key')
    cycles = doc["stimulus"]
    if not isinstance(cycles, list):
        raise WrongShapeError('"stimulus" must be a list with one object per clock cycle')
    harness_driven = {iface.clock, iface.reset.name if iface.reset else None} - {None}
    out: list[dict[str, int]] = []
    for t, cyc in enumerate(cycles):
        if not isinstance(cyc, dict):
            raise WrongShapeError(f"cycle {t} must be an object mapping input names to values")
        assigned: dict[str, int] = {}
        for name, raw in cyc.items():
            width = iface.width_of(name)
            if width is None:
                if name in harness_driven:
                    msg = f"cycle {t}: '{name}' is the clock or reset; it is driven by the testbench, remove it"
                else:
                    allowed = ", ".join(iface.input_names) or "(none)"
                    msg = f"cycle {t}: unknown input '{name}'; drivable inputs are: {allowed}"
                raise UnknownSignalError(name, msg)
            assigned[name] = _parse_value(name, raw, width, t)
        out.append(assigned)
    return StimulusSequence(out)


def encode(seq: StimulusSequence) -> str:
    return json.dumps({"stimulus": [dict(c) for c in seq.cycles]})


def concat(first: StimulusSequence, second: StimulusSequence) -> StimulusSequence:
    return StimulusSequence([dict(c) for c in first.cycles] + [dict(c) for c in second.cycles])


def validate(seq: StimulusSequence, iface: InterfaceSpec) -> None:
    """Raise the decoder's typed errors if ``seq`` is not valid for ``iface``."""
    decode(encode(seq), iface)


def materialize(seq: StimulusSequence, iface: InterfaceSpec) -> list[dict[str, int]]:
    """Expand to one complete input map per cycle using hold-last semantics."""
    current = {name: 0 for name in iface.input_names}
    out = []
    for cyc in seq.cycles:
        current.update((k, v) for k, v in cyc.items() if k in current)
        out.append(dict(current))
    return out
