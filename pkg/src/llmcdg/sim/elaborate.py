"""Elaboration: build the coverpoint table and compile processes to bytecode."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import PurePath

import numpy as np

from ..errors import ElaborationError
from ..frontend import ast as A
from ..frontend.interface import InterfaceSpec
from ..frontend.lexer import MAX_WIDTH
from ..frontend.printer import format_expr
from . import kernels as K

_BINOPS = {
    "+": K.OP_ADD, "-": K.OP_SUB, "*": K.OP_MUL, "&": K.OP_AND, "|": K.OP_OR, "^": K.OP_XOR,
    "<<": K.OP_SHL, ">>": K.OP_SHR, "==": K.OP_EQ, "!=": K.OP_NE, "<": K.OP_LT, "<=": K.OP_LE,
    ">": K.OP_GT, ">=": K.OP_GE, "&&": K.OP_LAND, "||": K.OP_LOR,
}
_ONE_BIT_BINOPS = {"==", "!=", "<", "<=", ">", ">=", "&&", "||"}


def mask(width: int) -> int:
    return (1 << width) - 1


@dataclass(frozen=True)
class Coverpoint:
    id: int
    kind: str  # "line" | "branch"
    line: int
    arm: str = ""  # then / else / case label / default; empty for line coverpoints
    ordinal: int = 0
    name: str = ""


@dataclass
class Process:
    kind: str  # "assign" | "comb" | "clocked"
    start: int
    end: int
    reads: frozenset
    writes: frozenset
    line: int


class Compiler:
    """Emit bytecode for one module; also assigns coverpoint ids."""

    def __init__(self, module: A.Module, iface: InterfaceSpec, stem: str, path: str = ""):
        self.m = module
        self.iface = iface
        self.stem = stem
        self.path = path
        self.params = {p.name: p for p in module.params}
        self.signals: list[str] = [p.name for p in module.ports] + [d.name for d in module.decls]
        self.index = {n: i for i, n in enumerate(self.signals)}
        self.widths = module.signal_widths()
        self.code: list[tuple[int, int, int, int]] = []
        self.coverpoints: list[Coverpoint] = []
        self.names_seen: dict[str, int] = {}
        self.line_owner: dict[int, int] = {}  # line -> coverpoint id
        self.processes: list[Process] = []

    def fail(self, msg: str, line: int | None = None):
        raise ElaborationError(msg, line, path=self.path)

    # -- coverpoints ---------------------------------------------------------

    def _new_cp(self, kind: str, line: int, arm: str, ordinal: int) -> int:
        base = f"C{self.stem}_L{line}_{kind}{ordinal}"
        n = self.names_seen.get(base, 0)
        self.names_seen[base] = n + 1
        name = base if n == 0 else f"{base}_{n}"
        cp = Coverpoint(len(self.coverpoints), kind, line, arm, ordinal, name)
        self.coverpoints.append(cp)
        return cp.id

    def line_cov(self, line: int) -> None:
        """Emit the line coverpoint for the first statement seen on ``line``."""
        if line in self.line_owner:
            return
        self.line_owner[line] = self._new_cp("line", line, "", 0)
        self.emit(K.OP_COV, self.line_owner[line])

    def branch_cov(self, line: int, arm: str, ordinal: int) -> None:
        self.emit(K.OP_COV, self._new_cp("branch", line, arm, ordinal))

    # -- code emission -------------------------------------------------------

    def emit(self, op: int, a: int = 0, b: int = 0, c: int = 0) -> int:
        self.code.append((op, a, b, c))
        return len(self.code) - 1

    def patch(self, at: int, a: int | None = None, b: int | None = None) -> None:
        op, oa, ob, oc = self.code[at]
        self.code[at] = (op, oa if a is None else a, ob if b is None else b, oc)

    def width(self, e: A.Expr) -> int:
        if isinstance(e, A.Literal):
            return e.width or 32
        if isinstance(e, A.Ident):
            if e.name in self.params:
                return self.params[e.name].width
            return self.widths[e.name]
        if isinstance(e, A.Unary):
            return self.width(e.operand) if e.op in ("~", "-") else 1
        if isinstance(e, A.Binary):
            if e.op in _ONE_BIT_BINOPS:
                return 1
            if e.op in ("<<", ">>"):
                return self.width(e.left)
            return max(self.width(e.left), self.width(e.right))
        if isinstance(e, A.Ternary):
            return max(self.width(e.then), self.width(e.other))
        if isinstance(e, A.BitSelect):
            return 1
        if isinstance(e, A.PartSelect):
            return e.msb - e.lsb + 1
        if isinstance(e, A.Concat):
            return sum(self.width(p) for p in e.parts)
        if isinstance(e, A.Repeat):
            return e.count * sum(self.width(p) for p in e.parts)
        raise TypeError(e)

    def expr(self, e: A.Expr) -> None:
        w = self.width(e)
        if w > MAX_WIDTH:
            self.fail(f"expression '{format_expr(e)}' is {w} bits wide; at most {MAX_WIDTH} supported", e.line)
        if isinstance(e, A.Literal):
            self.emit(K.OP_CONST, e.value & mask(w))
        elif isinstance(e, A.Ident):
            if e.name in self.params:
                self.emit(K.OP_CONST, self.params[e.name].value)
            else:
                self.emit(K.OP_LOAD, self.index[e.name])
        elif isinstance(e, A.Unary):
            self.expr(e.operand)
            ow = self.width(e.operand)
            if e.op == "~":
                self.emit(K.OP_NOT, c=mask(ow))
            elif e.op == "-":
                self.emit(K.OP_NEG, c=mask(ow))
            elif e.op == "!":
                self.emit(K.OP_LNOT)
            elif e.op == "&":
                self.emit(K.OP_RAND, mask(ow))
            elif e.op == "|":
                self.emit(K.OP_ROR)
            elif e.op == "^":
                self.emit(K.OP_RXOR)
        elif isinstance(e, A.Binary):
            self.expr(e.left)
            self.expr(e.right)
            self.emit(_BINOPS[e.op], c=mask(w))
        elif isinstance(e, A.Ternary):
            self.expr(e.cond)
            self.expr(e.then)
            self.expr(e.other)
            self.emit(K.OP_SELECT)
        elif isinstance(e, A.BitSelect):
            self.emit(K.OP_LOAD, self.index[e.name])
            self.expr(e.index)
            self.emit(K.OP_BITSEL)
        elif isinstance(e, A.PartSelect):
            self.emit(K.OP_LOAD, self.index[e.name])
            self.emit(K.OP_PART, e.lsb, c=mask(w))
        elif isinstance(e, A.Concat):
            self.expr(e.parts[0])
            for p in e.parts[1:]:
                self.expr(p)
                self.emit(K.OP_CAT, self.width(p))
        elif isinstance(e, A.Repeat):
            inner = A.Concat(e.parts, e.line)
            self.expr(inner)
            self.emit(K.OP_REPL, e.count, self.width(inner))

    def store(self, target: A.Expr, blocking: bool) -> None:
        """Pop the value on the stack into ``target``."""
        whole = K.OP_STORE if blocking else K.OP_STORE_NB
        part = K.OP_STORE_PART if blocking else K.OP_STORE_PART_NB
        if isinstance(target, A.Ident):
            self.emit(whole, self.index[target.name], c=mask(self.widths[target.name]))
        elif isinstance(target, A.BitSelect):
            self.emit(part, self.index[target.name], target.index.value, 1)
        elif isinstance(target, A.PartSelect):
            self.emit(part, self.index[target.name], target.lsb, mask(target.msb - target.lsb + 1))
        elif isinstance(target, A.Concat):
            offset = 0
            for piece in reversed(target.parts):
                pw = self.width(piece)
                self.emit(K.OP_DUP)
                self.emit(K.OP_PART, offset, c=mask(pw))
                self.store(piece, blocking)
                offset += pw
            self.emit(K.OP_POP)
        else:
            self.fail("illegal assignment target", target.line)

    # -- statements ----------------------------------------------------------

    @staticmethod
    def first_line(s: A.Stmt | None) -> int:
        while isinstance(s, A.Block):
            if not s.stmts:
                return 0
            s = s.stmts[0]
        if s is None or isinstance(s, A.NullStmt):
            return 0
        return s.line

    def stmt(self, s: A.Stmt) -> None:
        if isinstance(s, A.Block):
            for sub in s.stmts:
                self.stmt(sub)
        elif isinstance(s, A.NullStmt):
            pass
        elif isinstance(s, A.Assign):
            self.line_cov(s.line)
            self.expr(s.value)
            self.store(s.target, s.blocking)
        elif isinstance(s, A.If):
            self.line_cov(s.line)
            self.expr(s.cond)
            jz = self.emit(K.OP_JZ)
            self.branch_cov(self.first_line(s.then) or s.line, "then", 0)
            self.stmt(s.then)
            jmp = self.emit(K.OP_JMP)
            self.patch(jz, a=len(self.code))
            else_line = self.first_line(s.other) or s.else_line or s.line
            self.branch_cov(else_line, "else", 1)
            if s.other is not None:
                self.stmt(s.other)
            self.patch(jmp, a=len(self.code))
        elif isinstance(s, A.Case):
            self.case(s)
        else:
            raise TypeError(s)

    def case(self, s: A.Case) -> None:
        self.line_cov(s.line)
        sel_width = self.width(s.selector)
        self.expr(s.selector)
        label_values: list[list[int]] = []
        const_params = {k: p.value for k, p in self.params.items()}
        from ..frontend.parser import const_eval

        for arm in s.arms:
            label_values.append([const_eval(lbl, const_params, self.path) for lbl in arm.labels])
        jumps: list[list[int]] = []
        for values in label_values:
            jumps.append([self.emit(K.OP_JEQ, v) for v in values])
        to_default = self.emit(K.OP_JMP)
        ends = []
        for idx, arm in enumerate(s.arms):
            for j in jumps[idx]:
                self.patch(j, b=len(self.code))
            self.emit(K.OP_POP)
            label = ", ".join(format_expr(lbl) for lbl in arm.labels)
            self.branch_cov(self.first_line(arm.body) or arm.line, label, idx)
            self.stmt(arm.body)
            ends.append(self.emit(K.OP_JMP))
        self.patch(to_default, a=len(self.code))
        self.emit(K.OP_POP)
        seen = {v for vals in label_values for v in vals if v <= mask(sel_width)}
        full = sel_width <= 16 and len(seen) == 1 << sel_width
        if s.default is not None:
            self.branch_cov(self.first_line(s.default.body) or s.default.line, "default", len(s.arms))
            self.stmt(s.default.body)
        elif not full:
            self.branch_cov(s.line, "default", len(s.arms))
        for j in ends:
            self.patch(j, a=len(self.code))

    # -- processes -----------------------------------------------------------

    def reads_of_stmt(self, s: A.Stmt) -> set[str]:
        names: set[str] = set()
        for sub in A.walk_stmt(s):
            exprs: list[A.Expr] = []
            if isinstance(sub, A.Assign):
                exprs = [sub.value]
                if isinstance(sub.target, A.BitSelect):
                    exprs.append(sub.target.index)
                if not isinstance(sub.target, A.Ident):
                    names.update(A.target_names(sub.target))  # partial writes read the old value
            elif isinstance(sub, A.If):
                exprs = [sub.cond]
            elif isinstance(sub, A.Case):
                exprs = [sub.selector]
            for e in exprs:
                names |= A.referenced_names(e)
        return {n for n in names if n in self.index}

    def writes_of_stmt(self, s: A.Stmt) -> set[str]:
        out: set[str] = set()
        for sub in A.walk_stmt(s):
            if isinstance(sub, A.Assign):
                out.update(A.target_names(sub.target))
        return out

    def compile(self) -> None:
        m = self.m
        assign_written: set[str] = set()
        for a in m.assigns:
            assign_written.update(A.target_names(a.target))
        for blk in m.always:
            both = self.writes_of_stmt(blk.body) & assign_written
            if both:
                name = sorted(both)[0]
                self.fail(f"'{name}' is driven by both a continuous assign and an always block", blk.line)

        clock = self.iface.clock
        reset = self.iface.reset
        for a in m.assigns:
            start = len(self.code)
            self.line_cov(a.line)
            self.expr(a.value)
            self.store(a.target, True)
            reads = {n for n in A.referenced_names(a.value) if n in self.index}
            if not isinstance(a.target, A.Ident):
                reads |= set(A.target_names(a.target))
            self.processes.append(Process("assign", start, len(self.code), frozenset(reads),
                                          frozenset(A.target_names(a.target)), a.line))
        for blk in m.always:
            if blk.clocked:
                for e in blk.sensitivity:
                    if e.signal == clock:
                        if e.edge != "posedge":
                            self.fail(f"clock '{clock}' must be used at posedge", blk.line)
                    elif reset is not None and e.signal == reset.name:
                        want = "posedge" if reset.active_high else "negedge"
                        if e.edge != want:
                            self.fail(f"reset '{reset.name}' must be sampled at {want}", blk.line)
                    else:
                        self.fail(f"edge on '{e.signal}' which is neither the clock nor the reset "
                                  "(multiple clock domains are not supported)", blk.line)
                if clock is None or all(e.signal != clock for e in blk.sensitivity):
                    self.fail("clocked always block without the design clock", blk.line)
            start = len(self.code)
            self.stmt(blk.body)
            self.processes.append(Process("clocked" if blk.clocked else "comb", start, len(self.code),
                                          frozenset(self.reads_of_stmt(blk.body)),
                                          frozenset(self.writes_of_stmt(blk.body)), blk.line))


def comb_order(processes: list[Process]) -> list[int]:
    """Topological order of combinational processes (writers before readers).

    Processes on a dependency cycle keep their source order after the acyclic
    part; the fixed-point loop resolves them.
    """
    comb = [i for i, p in enumerate(processes) if p.kind != "clocked"]
    deps = {i: set() for i in comb}
    for i in comb:
        for j in comb:
            if i != j and processes[j].writes & processes[i].reads:
                deps[i].add(j)
    order: list[int] = []
    done: set[int] = set()
    pending = list(comb)
    progress = True
    while pending and progress:
        progress = False
        for i in list(pending):
            if deps[i] <= done:
                order.append(i)
                done.add(i)
                pending.remove(i)
                progress = True
                break
    return order + pending


def stem_of(path: str) -> str:
    return PurePath(path).stem if path and not path.startswith("<") else "dut"


def build_program(compiler: Compiler) -> tuple[tuple[np.ndarray, ...], list[int], list[int], list[int]]:
    code = np.array(compiler.code, dtype=np.int64).reshape(-1, 4)
    procs = compiler.processes
    order = comb_order(procs)
    clocked = [i for i, p in enumerate(procs) if p.kind == "clocked"]
    nb: set[str] = set()
    for blk in compiler.m.always:
        if blk.clocked:
            for s in A.walk_stmt(blk.body):
                if isinstance(s, A.Assign) and not s.blocking:
                    nb.update(A.target_names(s.target))
    nb_idx = sorted(compiler.index[n] for n in nb)
    prog = (
        np.ascontiguousarray(code[:, 0]),
        np.ascontiguousarray(code[:, 1]),
        np.ascontiguousarray(code[:, 2]),
        np.ascontiguousarray(code[:, 3]),
        np.array([p.start for p in procs], dtype=np.int64),
        np.array([p.end for p in procs], dtype=np.int64),
        np.array(order, dtype=np.int64),
        np.array(clocked, dtype=np.int64),
        np.array(nb_idx, dtype=np.int64),
    )
    return prog, order, clocked, nb_idx
