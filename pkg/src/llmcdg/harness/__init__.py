from .config import ExperimentConfig, ExplainerConfig, load_config
from .experiment import DesignSummary, ExperimentResult, TrialResult, run_experiment, run_trial, summarize
from .export import curves_csv, export, from_json, summary_csv, to_json, trials_csv
from .stats import percentile, quartiles

__all__ = [
    "DesignSummary",
    "ExperimentConfig",
    "ExperimentResult",
    "ExplainerConfig",
    "TrialResult",
    "curves_csv",
    "export",
    "from_json",
    "load_config",
    "percentile",
    "quartiles",
    "run_experiment",
    "run_trial",
    "summarize",
    "summary_csv",
    "to_json",
    "trials_csv",
]
