"""Command-line entry point: ``llmcdg <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Optional, Sequence

from ..bench.corpus import corpus, get_spec
from ..bench.fsmgen import generate_fsm
from ..coverage import FORMATS, render
from ..errors import CdgError, ConfigError
from ..generators import GENERATORS, LlmGenerator, OracleGenerator, RandomGenerator
from ..llm.client import make_client
from ..loop import LoopBudget, run_cdg
from ..prompts.engine import DESCRIPTION_MODES
from ..sim.simulator import Design, coverage_summary, load_design, load_design_file, run, trace_to_csv
from ..stimulus import decode
from .config import load_config
from .experiment import run_experiment
from .export import curves_csv, summary_csv, to_json, trials_csv

EXIT_ERROR = 1


def _design(arg: str) -> Design:
    """A file path, or a corpus id such as ``m01`` / ``m01.v`` when no such file exists."""
    if os.path.exists(arg):
        return load_design_file(arg)
    stem = arg[:-2] if arg.endswith(".v") else arg
    try:
        spec = get_spec(os.path.basename(stem))
    except KeyError:
        raise ConfigError(f"{arg}: no such file or corpus design") from None
    return load_design(spec.source_text(), spec.filename)


def _stimulus(design: Design, path: str):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read stimulus {path}: {exc}") from exc
    return decode(raw, design.iface)


def cmd_parse(args) -> int:
    d = _design(args.file)
    iface = d.iface
    info = {
        "module": d.name,
        "inputs": [{"name": n, "width": w} for n, w in iface.inputs],
        "outputs": [{"name": n, "width": w} for n, w in iface.outputs],
        "clock": iface.clock,
        "reset": None if iface.reset is None else {"name": iface.reset.name, "active_high": iface.reset.active_high},
        "coverpoints": {"line": sum(cp.kind == "line" for cp in d.coverpoints),
                        "branch": sum(cp.kind == "branch" for cp in d.coverpoints)},
    }
    if args.coverpoints:
        info["coverpoint_list"] = [{"name": cp.name, "kind": cp.kind, "line": cp.line, "arm": cp.arm}
                                   for cp in d.coverpoints]
    print(json.dumps(info, indent=2))
    return 0


def cmd_simulate(args) -> int:
    d = _design(args.file)
    result = run(d, _stimulus(d, args.stimulus), reset_cycles=args.reset_cycles)
    text = trace_to_csv(d, result.inputs, result.trace)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    s = coverage_summary(d, result.coverage)
    print(f"line {s.line_pct:.2f}% branch {s.branch_pct:.2f}% over {result.inputs.shape[0]} cycles",
          file=sys.stderr)
    return 0


def cmd_coverage(args) -> int:
    d = _design(args.file)
    result = run(d, _stimulus(d, args.stimulus), reset_cycles=args.reset_cycles)
    sys.stdout.write(render(d, result.coverage, args.format).text)
    return 0


def _budget(args) -> LoopBudget:
    try:
        return LoopBudget(args.max_iterations, args.wall_clock, args.max_cycles)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def cmd_cdg(args) -> int:
    d = _design(args.file)
    if args.generator == "random":
        gen = RandomGenerator(batch_cycles=args.batch_cycles, seed=args.seed)
    elif args.generator == "oracle":
        gen = OracleGenerator(seed=args.seed)
    else:
        cfg = {"transport": args.transport, "endpoint_url": args.endpoint, "model": args.model,
               "temperature": args.temperature, "strict": not args.lenient}
        client = make_client(cfg, args.transcript)
        gen = LlmGenerator(client, coverage_format=args.coverage_format, description_mode=args.description_mode,
                           description_path=args.description, guidance_path=args.guidance,
                           max_repairs=args.max_repairs)
    record = run_cdg(d, gen, _budget(args), args.reset_cycles, args.reset_between_iterations, args.target,
                     args.seed)
    print(record.to_json())
    return 0


def cmd_experiment(args) -> int:
    cfg = load_config(args.config)

    def progress(res):
        r = res.record
        print(f"{res.design_id} trial {res.trial}: {r.status} cycles={r.cycles_to_closure}", file=sys.stderr)

    result = run_experiment(cfg, progress=None if args.quiet else progress)
    out = args.out
    os.makedirs(out, exist_ok=True)
    for name, text in (("trials.csv", trials_csv(result)), ("curves.csv", curves_csv(result)),
                       ("summary.csv", summary_csv(result)), ("result.json", to_json(result))):
        with open(os.path.join(out, name), "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    sys.stdout.write(summary_csv(result))
    return 0


def cmd_bench_fsm(args) -> int:
    try:
        text = generate_fsm(args.states, args.seed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_bench_list(args) -> int:
    for spec in corpus():
        extra = f"states={spec.state_count} seed={spec.seed}" if spec.level == "complex" else spec.path
        print(f"{spec.id}\t{spec.level}\t{spec.category}\t{extra}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="llmcdg", description="Coverage-directed test generation for Verilog.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("parse", help="parse and elaborate a design, print its interface")
    sp.add_argument("file")
    sp.add_argument("--coverpoints", action="store_true", help="also list every coverpoint")
    sp.set_defaults(fn=cmd_parse)

    for name, fn, help_ in (("simulate", cmd_simulate, "run a stimulus and print the output trace as CSV"),
                            ("coverage", cmd_coverage, "run a stimulus and print a coverage report")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file")
        sp.add_argument("--stimulus", required=True, help="stimulus JSON file")
        sp.add_argument("--reset-cycles", type=int, default=1)
        if name == "simulate":
            sp.add_argument("--trace", help="write the trace CSV here instead of stdout")
        else:
            sp.add_argument("--format", choices=FORMATS, default="llm-readable")
        sp.set_defaults(fn=fn)

    sp = sub.add_parser("cdg", help="run the generation loop on one design, print the RunRecord JSON")
    sp.add_argument("file")
    sp.add_argument("--generator", choices=GENERATORS, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-iterations", type=int, default=LoopBudget.max_iterations)
    sp.add_argument("--wall-clock", type=float, default=LoopBudget.wall_clock_s, help="seconds")
    sp.add_argument("--max-cycles", type=int, default=LoopBudget.max_total_cycles)
    sp.add_argument("--reset-cycles", type=int, default=1)
    sp.add_argument("--reset-between-iterations", action="store_true")
    sp.add_argument("--target", choices=("line", "all"), default="line")
    sp.add_argument("--batch-cycles", type=int, default=32, help="random generator cycles per iteration")
    sp.add_argument("--transport", choices=("live", "record", "replay"), default="live")
    sp.add_argument("--transcript", help="JSONL transcript to record to or replay from")
    sp.add_argument("--lenient", action="store_true", help="replay in order without checking prompts")
    sp.add_argument("--endpoint", help="chat-completions URL for live/record transports")
    sp.add_argument("--model", default="gpt-4")
    sp.add_argument("--temperature", type=float, default=0.7)
    sp.add_argument("--coverage-format", choices=FORMATS, default="llm-readable")
    sp.add_argument("--description-mode", choices=DESCRIPTION_MODES, default="none")
    sp.add_argument("--description", help="description file for manual-file mode")
    sp.add_argument("--guidance", help="guidance file appended to the prompt")
    sp.add_argument("--max-repairs", type=int, default=3)
    sp.set_defaults(fn=cmd_cdg)

    sp = sub.add_parser("experiment", help="run an experiment config, write CSV/JSON results")
    sp.add_argument("config")
    sp.add_argument("--out", default="results", help="output directory")
    sp.add_argument("-q", "--quiet", action="store_true")
    sp.set_defaults(fn=cmd_experiment)

    sp = sub.add_parser("bench", help="benchmark corpus utilities")
    bsub = sp.add_subparsers(dest="bench_command", required=True)
    bp = bsub.add_parser("generate-fsm", help="print a generated chain FSM")
    bp.add_argument("--states", type=int, required=True)
    bp.add_argument("--seed", type=int, required=True)
    bp.add_argument("-o", "--output")
    bp.set_defaults(fn=cmd_bench_fsm)
    bp = bsub.add_parser("list", help="list the corpus")
    bp.set_defaults(fn=cmd_bench_list)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.fn(args)
    except CdgError as exc:
        print(f"error[{exc.kind}]: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except BrokenPipeError:
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
