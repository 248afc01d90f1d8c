"""Re-author the m01 replay transcript with a scripted model.

Run from the repository root:  python3 tests/fixtures/author_m01_transcript.py

The scripted answers cover m01 in two iterations: the first reaches the
start arm and the hold arm, the second answers in prose first (forcing one
repair round) and then reaches the stop arm on its last cycle.
"""

import os
import sys

from llmcdg.bench import get_spec
from llmcdg.generators import LlmGenerator
from llmcdg.llm.client import ChatClient, RecordingTransport, ScriptedTransport
from llmcdg.loop import LoopBudget, run_cdg

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "m01_replay.jsonl")

ANALYSIS_1 = (
    "Lines 12, 18 and 19 are not covered. Line 12 runs when cmd is 1 and lines 18-19 run when cmd is 2. "
    "Cycle 1: cmd = 1 to start. Cycle 2: cmd = 3 to hold."
)
ANSWER_1 = 'Here is the sequence:\n```json\n{"stimulus": [{"cmd": 1}, {"cmd": 3}]}\n```\n'
ANALYSIS_2 = (
    "Only the stop arm is left (lines 18 and 19). Hold for one cycle with cmd = 0, then send cmd = 2."
)
ANSWER_2_PROSE = "First cmd is 0 for one cycle, then cmd is 2 for one cycle."
ANSWER_2_JSON = '```json\n{"stimulus": [{"cmd": 0}, {"cmd": 2}]}\n```'


def script():
    replies = iter([ANALYSIS_1, ANSWER_1, ANALYSIS_2, ANSWER_2_PROSE, ANSWER_2_JSON])
    return lambda messages: next(replies)


def main() -> int:
    if os.path.exists(OUT):
        os.remove(OUT)
    design = get_spec("m01").load()
    client = ChatClient(RecordingTransport(ScriptedTransport(script()), path=OUT))
    record = run_cdg(design, LlmGenerator(client), LoopBudget())
    print(record.to_json())
    return 0 if record.status == "closure" else 1


if __name__ == "__main__":
    sys.exit(main())
