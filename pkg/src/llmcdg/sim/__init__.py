from .elaborate import Coverpoint
from .simulator import (
    CoverageMap,
    CoverageSummary,
    Design,
    RunResult,
    SimState,
    coverage_summary,
    elaborate,
    input_matrix,
    load_design,
    load_design_file,
    run,
    simulate,
    step,
)

__all__ = [
    "CoverageMap",
    "CoverageSummary",
    "Coverpoint",
    "Design",
    "RunResult",
    "SimState",
    "coverage_summary",
    "elaborate",
    "input_matrix",
    "load_design",
    "load_design_file",
    "run",
    "simulate",
    "step",
]
