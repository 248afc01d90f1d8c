"""Coverage report renderers.

Three formats are produced from a design and its coverage map:

``original``
    one ``<identifier> <hits>`` record per coverpoint, like a raw simulator dump.
``annotated``
    the full source listing with a 7-character hit-count gutter.
``llm-readable``
    the source listing with ``// TO BE COVERED`` on every line that still has
    an unhit coverpoint, ``// covered, hits=<n>`` on the others, and a
    closing ``UNCOVERED LINES: ...`` summary.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .sim.simulator import CoverageMap, Design, coverage_summary

FORMATS = ("original", "annotated", "llm-readable")

GUTTER = 7
FLAG = "// TO BE COVERED"
ALL_COVERED = "ALL LINES COVERED"
SUMMARY_PREFIX = "UNCOVERED LINES: "


@dataclass(frozen=True)
class CoverageReport:
    format: str
    text: str
    line_map: dict[int, tuple[int, ...]] = field(default_factory=dict)  # report line -> coverpoint ids
    source_ends_with_newline: bool = True

    def __str__(self) -> str:
        return self.text


def _source_lines(design: Design) -> list[str]:
    text = design.source.text
    if not text:
        return []
    parts = text.split("\n")
    if parts and parts[-1] == "":
        parts.pop()
    return parts


def _line_hits(design: Design, coverage: CoverageMap) -> dict[int, tuple[int, ...]]:
    return {line: tuple(ids) for line, ids in design.lines_with_coverpoints().items()}


def render_original(design: Design, coverage: CoverageMap) -> CoverageReport:
    rows = [f"{cp.name} {int(coverage.hits[cp.id])}" for cp in design.coverpoints]
    text = "".join(r + "\n" for r in rows)
    line_map = {i + 1: (cp.id,) for i, cp in enumerate(design.coverpoints)}
    return CoverageReport("original", text, line_map)


def _split_eol(line: str) -> tuple[str, str]:
    return (line[:-1], "\r") if line.endswith("\r") else (line, "")


def render_annotated(design: Design, coverage: CoverageMap) -> CoverageReport:
    per_line = _line_hits(design, coverage)
    out = []
    for n, line in enumerate(_source_lines(design), start=1):
        ids = per_line.get(n)
        if ids:
            hits = min(int(coverage.hits[i]) for i in ids)
            out.append(f"{hits:>{GUTTER}}\t{line}")
        else:
            out.append(" " * GUTTER + "\t" + line)
    text = "\n".join(out)
    ends = design.source.text.endswith("\n")
    if out and ends:
        text += "\n"
    return CoverageReport("annotated", text, per_line, ends)


def render_llm_readable(design: Design, coverage: CoverageMap) -> CoverageReport:
    per_line = _line_hits(design, coverage)
    out = []
    uncovered_lines = []
    for n, line in enumerate(_source_lines(design), start=1):
        ids = per_line.get(n)
        if not ids:
            out.append(line)
            continue
        body, eol = _split_eol(line)
        hits = [int(coverage.hits[i]) for i in ids]
        if min(hits) == 0:
            uncovered_lines.append(n)
            out.append(f"{body} {FLAG}{eol}")
        else:
            out.append(f"{body} // covered, hits={min(hits)}{eol}")
    listing = "".join(line + "\n" for line in out)
    summary = SUMMARY_PREFIX + ", ".join(map(str, uncovered_lines)) if uncovered_lines else ALL_COVERED
    return CoverageReport("llm-readable", listing + summary + "\n", per_line, design.source.text.endswith("\n"))


def render(design: Design, coverage: CoverageMap, fmt: str) -> CoverageReport:
    if fmt == "original":
        return render_original(design, coverage)
    if fmt == "annotated":
        return render_annotated(design, coverage)
    if fmt in ("llm-readable", "llm"):
        return render_llm_readable(design, coverage)
    raise ValueError(f"unknown coverage format {fmt!r}; choose from {', '.join(FORMATS)}")


def strip_annotations(report: CoverageReport) -> str:
    """Recover the source text from an annotated or llm-readable report."""
    if report.format == "annotated":
        lines = report.text.split("\n")
        trailing = lines and lines[-1] == ""
        if trailing:
            lines.pop()
        body = "\n".join(line[GUTTER + 1:] for line in lines)
        return body + ("\n" if trailing else "")
    if report.format == "llm-readable":
        lines = report.text.split("\n")[:-2]  # drop summary line and final empty element
        out = []
        for n, line in enumerate(lines, start=1):
            if n in report.line_map:
                body, eol = _split_eol(line)
                cut = body.rfind(" //")
                line = body[:cut] + eol
            out.append(line)
        text = "\n".join(out)
        if out and report.source_ends_with_newline:
            text += "\n"
        return text
    raise ValueError("only annotated and llm-readable reports carry the source")


def flagged_lines(report: CoverageReport) -> list[int]:
    """Line numbers carrying the TO BE COVERED flag in an llm-readable report."""
    return [n for n, line in enumerate(report.text.split("\n"), start=1)
            if n in report.line_map and line.rstrip("\r").endswith(FLAG)]


def is_fully_covered(design: Design, coverage: CoverageMap) -> bool:
    return coverage_summary(design, coverage).closed
