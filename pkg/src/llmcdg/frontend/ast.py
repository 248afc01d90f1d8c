"""AST node types.

Nodes are frozen dataclasses. The ``line`` field is excluded from equality so
two trees compare equal when they are structurally identical, regardless of
where their nodes sit in the source text.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union


def _line() -> int:
    return field(default=0, compare=False)


# -- expressions -------------------------------------------------------------


@dataclass(frozen=True)
class Literal:
    value: int
    width: Optional[int] = None  # None: unsized, treated as 32 bits
    base: int = 10
    line: int = _line()


@dataclass(frozen=True)
class Ident:
    name: str
    line: int = _line()


@dataclass(frozen=True)
class Unary:
    op: str  # "~" "!" "-" "&" "|" "^"
    operand: "Expr"
    line: int = _line()


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    line: int = _line()


@dataclass(frozen=True)
class Ternary:
    cond: "Expr"
    then: "Expr"
    other: "Expr"
    line: int = _line()


@dataclass(frozen=True)
class BitSelect:
    name: str
    index: "Expr"
    line: int = _line()


@dataclass(frozen=True)
class PartSelect:
    name: str
    msb: int
    lsb: int
    line: int = _line()


@dataclass(frozen=True)
class Concat:
    parts: tuple["Expr", ...]
    line: int = _line()


@dataclass(frozen=True)
class Repeat:
    count: int
    parts: tuple["Expr", ...]
    line: int = _line()


Expr = Union[Literal, Ident, Unary, Binary, Ternary, BitSelect, PartSelect, Concat, Repeat]

# -- statements --------------------------------------------------------------


@dataclass(frozen=True)
class Block:
    stmts: tuple["Stmt", ...]
    label: str = ""
    line: int = _line()


@dataclass(frozen=True)
class Assign:
    target: Expr  # Ident, BitSelect (constant index), PartSelect or Concat of those
    value: Expr
    blocking: bool
    line: int = _line()


@dataclass(frozen=True)
class If:
    cond: Expr
    then: "Stmt"
    other: Optional["Stmt"] = None
    line: int = _line()
    else_line: int = _line()  # line of the ``else`` keyword, 0 when absent


@dataclass(frozen=True)
class CaseArm:
    labels: tuple[Expr, ...]  # empty for the default arm
    body: "Stmt"
    line: int = _line()


@dataclass(frozen=True)
class Case:
    selector: Expr
    arms: tuple[CaseArm, ...]
    default: Optional[CaseArm] = None
    line: int = _line()


@dataclass(frozen=True)
class NullStmt:
    line: int = _line()


Stmt = Union[Block, Assign, If, Case, NullStmt]

# -- module items ------------------------------------------------------------


@dataclass(frozen=True)
class Port:
    name: str
    direction: str  # "input" | "output"
    width: int = 1
    is_reg: bool = False
    line: int = _line()


@dataclass(frozen=True)
class Param:
    name: str
    value: int
    width: int = 32
    local: bool = False
    line: int = _line()


@dataclass(frozen=True)
class Decl:
    kind: str  # "wire" | "reg"
    name: str
    width: int = 1
    line: int = _line()


@dataclass(frozen=True)
class ContAssign:
    target: Expr
    value: Expr
    line: int = _line()


@dataclass(frozen=True)
class Edge:
    edge: str  # "posedge" | "negedge"
    signal: str


@dataclass(frozen=True)
class Always:
    sensitivity: tuple[Edge, ...]  # empty tuple means combinational (@* or a plain signal list)
    body: Stmt
    line: int = _line()

    @property
    def clocked(self) -> bool:
        return bool(self.sensitivity)


@dataclass(frozen=True)
class Module:
    name: str
    ports: tuple[Port, ...]
    params: tuple[Param, ...] = ()
    decls: tuple[Decl, ...] = ()
    assigns: tuple[ContAssign, ...] = ()
    always: tuple[Always, ...] = ()
    line: int = _line()

    def port(self, name: str) -> Optional[Port]:
        for p in self.ports:
            if p.name == name:
                return p
        return None

    @property
    def inputs(self) -> tuple[Port, ...]:
        return tuple(p for p in self.ports if p.direction == "input")

    @property
    def outputs(self) -> tuple[Port, ...]:
        return tuple(p for p in self.ports if p.direction == "output")

    def signal_widths(self) -> dict[str, int]:
        widths = {p.name: p.width for p in self.ports}
        widths.update((d.name, d.width) for d in self.decls)
        return widths

    def param_table(self) -> dict[str, Param]:
        return {p.name: p for p in self.params}


def walk_stmt(stmt: Stmt) -> Iterator[Stmt]:
    """Yield ``stmt`` and every statement nested in it, in source order."""
    yield stmt
    if isinstance(stmt, Block):
        for s in stmt.stmts:
            yield from walk_stmt(s)
    elif isinstance(stmt, If):
        yield from walk_stmt(stmt.then)
        if stmt.other is not None:
            yield from walk_stmt(stmt.other)
    elif isinstance(stmt, Case):
        for arm in stmt.arms:
            yield from walk_stmt(arm.body)
        if stmt.default is not None:
            yield from walk_stmt(stmt.default.body)


def walk_expr(expr: Expr) -> Iterator[Expr]:
    yield expr
    if isinstance(expr, Unary):
        yield from walk_expr(expr.operand)
    elif isinstance(expr, Binary):
        yield from walk_expr(expr.left)
        yield from walk_expr(expr.right)
    elif isinstance(expr, Ternary):
        yield from walk_expr(expr.cond)
        yield from walk_expr(expr.then)
        yield from walk_expr(expr.other)
    elif isinstance(expr, BitSelect):
        yield from walk_expr(expr.index)
    elif isinstance(expr, (Concat, Repeat)):
        for p in expr.parts:
            yield from walk_expr(p)


def target_names(target: Expr) -> list[str]:
    """Names written by an assignment target."""
    if isinstance(target, Ident):
        return [target.name]
    if isinstance(target, (BitSelect, PartSelect)):
        return [target.name]
    if isinstance(target, Concat):
        out: list[str] = []
        for p in target.parts:
            out.extend(target_names(p))
        return out
    return []


def referenced_names(expr: Expr) -> set[str]:
    names = set()
    for e in walk_expr(expr):
        if isinstance(e, Ident):
            names.add(e.name)
        elif isinstance(e, (BitSelect, PartSelect)):
            names.add(e.name)
    return names


def node_lines(module: Module) -> Iterator[int]:
    """Every source line carried by a node of ``module``."""
    yield module.line
    for group in (module.ports, module.params, module.decls):
        for item in group:
            yield item.line
    for a in module.assigns:
        yield a.line
        for e in (a.target, a.value):
            for sub in walk_expr(e):
                yield sub.line
    for blk in module.always:
        yield blk.line
        for s in walk_stmt(blk.body):
            yield s.line
            exprs: list[Expr] = []
            if isinstance(s, Assign):
                exprs = [s.target, s.value]
            elif isinstance(s, If):
                exprs = [s.cond]
                if s.else_line:
                    yield s.else_line
            elif isinstance(s, Case):
                exprs = [s.selector]
                for arm in s.arms + ((s.default,) if s.default else ()):
                    yield arm.line
                    exprs.extend(arm.labels)
            for e in exprs:
                for sub in walk_expr(e):
                    yield sub.line
