"""Compare the numba kernels against the plain-numpy fallback.

Each backend runs in its own interpreter because the backend is fixed at
import time by the LLMCDG_DISABLE_JIT environment flag.

    python3 benchmarks/bench_kernels.py            # both backends, table
    python3 benchmarks/bench_kernels.py --cycles 20000 --repeat 5
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

CASES = (("s02", "simulate"), ("m03", "simulate"), ("m05", "simulate"), ("c02", "oracle"))


def _best(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def child(cycles: int, repeat: int) -> dict:
    from llmcdg import _accel
    from llmcdg.bench import get_spec
    from llmcdg.generators import OracleGenerator, XorShift64Star
    from llmcdg.generators.base import GeneratorContext
    from llmcdg.loop import reset_state
    from llmcdg.sim import simulate

    out = {"backend": _accel.backend_name(), "cases": []}
    for design_id, kind in CASES:
        d = get_spec(design_id).load()
        if kind == "simulate":
            rng = XorShift64Star(1)
            mat = np.array([[rng.bits(w) for _, w in d.iface.inputs] for _ in range(cycles)], dtype=np.int64)

            def work():
                simulate(d, mat, d.initial_state(), d.new_coverage())

            work()  # compile, or warm caches for the fallback
            dt = _best(work, repeat)
            out["cases"].append({"design": design_id, "kind": kind, "seconds": dt, "rate": cycles / dt,
                                 "unit": "cycles/s"})
        else:
            def work():
                cov = d.new_coverage()
                state = reset_state(d, cov, 1)
                OracleGenerator().next_stimulus(GeneratorContext(d, cov, state))

            work()
            dt = _best(work, repeat)
            out["cases"].append({"design": design_id, "kind": kind, "seconds": dt, "rate": 1 / dt,
                                 "unit": "searches/s"})
    return out


def spawn(disable: bool, cycles: int, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("LLMCDG_DISABLE_JIT", None)
    if disable:
        env["LLMCDG_DISABLE_JIT"] = "1"
    proc = subprocess.run([sys.executable, __file__, "--child", "--cycles", str(cycles), "--repeat", str(repeat)],
                          env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--cycles", type=int, default=5000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.child:
        print(json.dumps(child(args.cycles, args.repeat)))
        return

    jit = spawn(False, args.cycles, args.repeat)
    ref = spawn(True, args.cycles, args.repeat)
    print(f"{'design':<8}{'kernel':<10}{'unit':<12}{jit['backend']:>12}{ref['backend']:>12}{'speedup':>10}")
    for a, b in zip(jit["cases"], ref["cases"]):
        print(f"{a['design']:<8}{a['kind']:<10}{a['unit']:<12}{a['rate']:>12.1f}{b['rate']:>12.1f}"
              f"{b['seconds'] / a['seconds']:>9.1f}x")


if __name__ == "__main__":
    main()
