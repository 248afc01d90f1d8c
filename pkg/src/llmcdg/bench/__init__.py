from .corpus import COMPLEX_STATE_COUNTS, LEVELS, BenchmarkSpec, corpus, get_spec, select
from .fsmgen import MAX_STATES, MIN_STATES, fsm_plan, generate_fsm, state_width

__all__ = [
    "COMPLEX_STATE_COUNTS",
    "LEVELS",
    "MAX_STATES",
    "MIN_STATES",
    "BenchmarkSpec",
    "corpus",
    "fsm_plan",
    "generate_fsm",
    "get_spec",
    "select",
    "state_width",
]
