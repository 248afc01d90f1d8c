"""Bytecode interpreter kernels for compiled designs.

A compiled design is a flat instruction stream (``op``, ``a``, ``b``, ``c``
int64 arrays) plus process tables. Values are held in an int64 vector indexed
by signal number; every stored value is masked to its declared width, and
widths never exceed 63 bits, so all arithmetic stays within int64 and
wraparound followed by masking gives the right low bits.

The ``prog`` argument is a tuple of int64 arrays, see ``PROG_FIELDS``.
"""

from __future__ import annotations

import numpy as np

from .._accel import njit

PROG_FIELDS = ("op", "a", "b", "c", "proc_start", "proc_end", "comb", "clocked", "nb_targets")

# stack ops
OP_CONST = 0
OP_LOAD = 1
OP_NOT = 2
OP_LNOT = 3
OP_NEG = 4
OP_RAND = 5
OP_ROR = 6
OP_RXOR = 7
OP_ADD = 8
OP_SUB = 9
OP_MUL = 10
OP_AND = 11
OP_OR = 12
OP_XOR = 13
OP_SHL = 14
OP_SHR = 15
OP_EQ = 16
OP_NE = 17
OP_LT = 18
OP_LE = 19
OP_GT = 20
OP_GE = 21
OP_LAND = 22
OP_LOR = 23
OP_SELECT = 24
OP_BITSEL = 25
OP_PART = 26
OP_CAT = 27
OP_REPL = 28
OP_DUP = 29
OP_POP = 30
# stores
OP_STORE = 40
OP_STORE_NB = 41
OP_STORE_PART = 42
OP_STORE_PART_NB = 43
# control
OP_JZ = 50
OP_JMP = 51
OP_JEQ = 52
OP_COV = 53

OP_NAMES = {v: k for k, v in dict(globals()).items() if k.startswith("OP_")}


@njit
def exec_code(op, arg_a, arg_b, arg_c, start, end, vals, nxt, cov, stack):
    """Run instructions ``[start, end)``. Coverage hits are added to ``cov``."""
    pc = start
    sp = 0
    while pc < end:
        o = op[pc]
        a = arg_a[pc]
        if o == OP_LOAD:
            stack[sp] = vals[a]
            sp += 1
        elif o == OP_CONST:
            stack[sp] = a
            sp += 1
        elif o == OP_COV:
            cov[a] += 1
        elif o < OP_ADD:
            x = stack[sp - 1]
            if o == OP_NOT:
                x = ~x & arg_c[pc]
            elif o == OP_LNOT:
                x = 1 if x == 0 else 0
            elif o == OP_NEG:
                x = (0 - x) & arg_c[pc]
            elif o == OP_RAND:
                x = 1 if x == a else 0
            elif o == OP_ROR:
                x = 1 if x != 0 else 0
            else:
                p = 0
                while x != 0:
                    p ^= x & 1
                    x >>= 1
                x = p
            stack[sp - 1] = x
        elif o <= OP_LOR:
            r = stack[sp - 1]
            x = stack[sp - 2]
            sp -= 1
            m = arg_c[pc]
            if o == OP_ADD:
                x = (x + r) & m
            elif o == OP_SUB:
                x = (x - r) & m
            elif o == OP_MUL:
                x = (x * r) & m
            elif o == OP_AND:
                x = x & r
            elif o == OP_OR:
                x = x | r
            elif o == OP_XOR:
                x = x ^ r
            elif o == OP_SHL:
                x = 0 if r >= 63 else (x << r) & m
            elif o == OP_SHR:
                x = 0 if r >= 63 else x >> r
            elif o == OP_EQ:
                x = 1 if x == r else 0
            elif o == OP_NE:
                x = 1 if x != r else 0
            elif o == OP_LT:
                x = 1 if x < r else 0
            elif o == OP_LE:
                x = 1 if x <= r else 0
            elif o == OP_GT:
                x = 1 if x > r else 0
            elif o == OP_GE:
                x = 1 if x >= r else 0
            elif o == OP_LAND:
                x = 1 if (x != 0 and r != 0) else 0
            else:
                x = 1 if (x != 0 or r != 0) else 0
            stack[sp - 1] = x
        elif o == OP_SELECT:
            e = stack[sp - 1]
            t = stack[sp - 2]
            cnd = stack[sp - 3]
            sp -= 2
            stack[sp - 1] = t if cnd != 0 else e
        elif o == OP_BITSEL:
            idx = stack[sp - 1]
            x = stack[sp - 2]
            sp -= 1
            stack[sp - 1] = 0 if idx >= 63 else (x >> idx) & 1
        elif o == OP_PART:
            stack[sp - 1] = (stack[sp - 1] >> a) & arg_c[pc]
        elif o == OP_CAT:
            r = stack[sp - 1]
            sp -= 1
            stack[sp - 1] = (stack[sp - 1] << a) | r
        elif o == OP_REPL:
            x = stack[sp - 1]
            out = 0
            for _ in range(a):
                out = (out << arg_b[pc]) | x
            stack[sp - 1] = out
        elif o == OP_DUP:
            stack[sp] = stack[sp - 1]
            sp += 1
        elif o == OP_POP:
            sp -= 1
        elif o == OP_STORE:
            sp -= 1
            vals[a] = stack[sp] & arg_c[pc]
        elif o == OP_STORE_NB:
            sp -= 1
            nxt[a] = stack[sp] & arg_c[pc]
        elif o == OP_STORE_PART:
            sp -= 1
            m = arg_c[pc]
            lo = arg_b[pc]
            vals[a] = (vals[a] & ~(m << lo)) | ((stack[sp] & m) << lo)
        elif o == OP_STORE_PART_NB:
            sp -= 1
            m = arg_c[pc]
            lo = arg_b[pc]
            nxt[a] = (nxt[a] & ~(m << lo)) | ((stack[sp] & m) << lo)
        elif o == OP_JZ:
            sp -= 1
            if stack[sp] == 0:
                pc = a
                continue
        elif o == OP_JMP:
            pc = a
            continue
        elif o == OP_JEQ:
            if stack[sp - 1] == a:
                pc = arg_b[pc]
                continue
        pc += 1


@njit
def commit_coverage(scratch, cov, target, remaining):
    """Add ``scratch`` hits into ``cov``; decrement ``remaining[0]`` for newly hit targets."""
    for i in range(scratch.shape[0]):
        h = scratch[i]
        if h != 0:
            if cov[i] == 0 and target[i]:
                remaining[0] -= 1
            cov[i] += h


@njit
def settle(prog, vals, nxt, prev, scratch, stack, max_sweeps):
    """Evaluate combinational processes to a fixed point.

    On return ``scratch`` holds the hits of the final, non-changing sweep,
    i.e. exactly one evaluation of every combinational process. Returns the
    number of sweeps, or -1 if the bound was hit.
    """
    op, arg_a, arg_b, arg_c, pstart, pend, comb = prog[0], prog[1], prog[2], prog[3], prog[4], prog[5], prog[6]
    n = vals.shape[0]
    for sweep in range(max_sweeps):
        for i in range(n):
            prev[i] = vals[i]
        scratch[:] = 0
        for k in range(comb.shape[0]):
            p = comb[k]
            exec_code(op, arg_a, arg_b, arg_c, pstart[p], pend[p], vals, nxt, scratch, stack)
        same = True
        for i in range(n):
            if prev[i] != vals[i]:
                same = False
                break
        if same:
            return sweep + 1
    return -1


@njit
def clock_edge(prog, vals, nxt, scratch, stack):
    """Run clocked processes once and commit nonblocking updates together."""
    op, arg_a, arg_b, arg_c, pstart, pend = prog[0], prog[1], prog[2], prog[3], prog[4], prog[5]
    clocked, nb_targets = prog[7], prog[8]
    for i in range(vals.shape[0]):
        nxt[i] = vals[i]
    scratch[:] = 0
    for k in range(clocked.shape[0]):
        p = clocked[k]
        exec_code(op, arg_a, arg_b, arg_c, pstart[p], pend[p], vals, nxt, scratch, stack)
    for k in range(nb_targets.shape[0]):
        s = nb_targets[k]
        vals[s] = nxt[s]


@njit
def run_cycles(prog, vals, inputs, input_idx, reset_sig, reset_level, reset_cycles,
               cov, target, remaining, out_idx, trace, max_sweeps):
    """Simulate ``inputs.shape[0]`` cycles in place.

    Returns ``(status, where)``: status 0 with ``where`` = first cycle after
    which ``remaining[0]`` reached zero (-1 if it did not happen during this
    call), or status -1 with ``where`` = the cycle that failed to converge.
    """
    n = vals.shape[0]
    nxt = np.zeros(n, np.int64)
    prev = np.zeros(n, np.int64)
    scratch = np.zeros(cov.shape[0], np.int64)
    stack = np.zeros(prog[0].shape[0] + 4, np.int64)
    has_clock = prog[7].shape[0] > 0
    closed_at = -1
    for t in range(inputs.shape[0]):
        for j in range(input_idx.shape[0]):
            vals[input_idx[j]] = inputs[t, j]
        if reset_sig >= 0:
            vals[reset_sig] = reset_level if t < reset_cycles else 1 - reset_level
        if settle(prog, vals, nxt, prev, scratch, stack, max_sweeps) < 0:
            return -1, t
        commit_coverage(scratch, cov, target, remaining)
        if has_clock:
            clock_edge(prog, vals, nxt, scratch, stack)
            commit_coverage(scratch, cov, target, remaining)
            if settle(prog, vals, nxt, prev, scratch, stack, max_sweeps) < 0:
                return -1, t
        for k in range(out_idx.shape[0]):
            trace[t, k] = vals[out_idx[k]]
        if closed_at < 0 and remaining[0] == 0:
            closed_at = t
    return 0, closed_at


@njit
def expand_frontier(prog, base_vals, reg_idx, frontier, inputs, input_idx, reset_sig, reset_level,
                    uncovered, max_sweeps, next_regs, hits):
    """One BFS layer: simulate every (state, input) pair for a single cycle.

    ``frontier`` rows are register-value vectors. For pair ``f * n_inputs + i``
    the successor register vector goes to ``next_regs`` and ``hits`` records
    whether the cycle touched any coverpoint flagged in ``uncovered``.
    Returns -1 on a combinational loop, else 0.
    """
    n = base_vals.shape[0]
    vals = np.zeros(n, np.int64)
    nxt = np.zeros(n, np.int64)
    prev = np.zeros(n, np.int64)
    scratch = np.zeros(uncovered.shape[0], np.int64)
    stack = np.zeros(prog[0].shape[0] + 4, np.int64)
    n_in = inputs.shape[0]
    for f in range(frontier.shape[0]):
        for i in range(n_in):
            row = f * n_in + i
            for k in range(n):
                vals[k] = base_vals[k]
            for k in range(reg_idx.shape[0]):
                vals[reg_idx[k]] = frontier[f, k]
            for j in range(input_idx.shape[0]):
                vals[input_idx[j]] = inputs[i, j]
            if reset_sig >= 0:
                vals[reset_sig] = 1 - reset_level
            if settle(prog, vals, nxt, prev, scratch, stack, max_sweeps) < 0:
                return -1
            hit = False
            for k in range(scratch.shape[0]):
                if scratch[k] != 0 and uncovered[k]:
                    hit = True
                    break
            clock_edge(prog, vals, nxt, scratch, stack)
            if not hit:
                for k in range(scratch.shape[0]):
                    if scratch[k] != 0 and uncovered[k]:
                        hit = True
                        break
            hits[row] = hit
            for k in range(reg_idx.shape[0]):
                next_regs[row, k] = vals[reg_idx[k]]
    return 0
