from .engine import (
    DESCRIPTION_MODES,
    PROMPT_VERSION,
    DutExplanation,
    HistorySummary,
    build_round1,
    build_round2,
    explain_dut,
    extract_stimulus,
    find_json,
    stimulus_block,
)

__all__ = [
    "DESCRIPTION_MODES",
    "PROMPT_VERSION",
    "DutExplanation",
    "HistorySummary",
    "build_round1",
    "build_round2",
    "explain_dut",
    "extract_stimulus",
    "find_json",
    "stimulus_block",
]
