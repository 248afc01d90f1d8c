"""CSV and JSON exports of experiment results."""

from __future__ import annotations

import csv
import io
import json

from .experiment import ExperimentResult

TRIAL_COLUMNS = ("design_id", "generator", "trial", "status", "cycles_to_closure", "iterations", "final_line_pct")
CURVE_COLUMNS = ("design_id", "trial", "iteration", "cumulative_cycles", "line_pct", "branch_pct")
SUMMARY_COLUMNS = ("design_id", "generator", "trials", "closures", "closure_rate", "p25", "median", "p75",
                   "mean_iterations")


def _blank(v):
    return "" if v is None else v


def trials_csv(result: ExperimentResult) -> str:
    """One row per trial. Timing is left out so reruns are byte-identical."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRIAL_COLUMNS)
    for t in result.trials:
        r = t.record
        w.writerow([t.design_id, r.generator, t.trial, r.status, _blank(r.cycles_to_closure), r.iterations,
                    repr(float(r.final_line_pct))])
    return buf.getvalue()


def curves_csv(result: ExperimentResult) -> str:
    """Per-trial coverage curves; iteration 0 is the post-reset coverage."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CURVE_COLUMNS)
    for t in result.trials:
        r = t.record
        w.writerow([t.design_id, t.trial, 0, 0, repr(r.initial_line_pct), repr(r.initial_branch_pct)])
        for e in r.entries:
            w.writerow([t.design_id, t.trial, e.iteration, e.cumulative_cycles, repr(e.line_pct),
                        repr(e.branch_pct)])
    return buf.getvalue()


def summary_csv(result: ExperimentResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_COLUMNS)
    for s in result.summaries:
        w.writerow([_blank(getattr(s, c)) for c in SUMMARY_COLUMNS])
    return buf.getvalue()


def to_json(result: ExperimentResult) -> str:
    return json.dumps(result.to_dict(), indent=2)


def from_json(text: str) -> ExperimentResult:
    return ExperimentResult.from_dict(json.loads(text))


def export(result: ExperimentResult, fmt: str, path: str) -> None:
    if fmt == "csv":
        text = trials_csv(result)
    elif fmt == "json":
        text = to_json(result)
    elif fmt == "curves":
        text = curves_csv(result)
    elif fmt == "summary":
        text = summary_csv(result)
    else:
        raise ValueError(f"unknown export format {fmt!r}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
