"""Recursive-descent parser for a single synthesizable Verilog module."""

from __future__ import annotations

from typing import Callable, Optional

from ..errors import ParseError, SemanticError, UnsupportedConstructError
from . import ast as A
from .lexer import MAX_WIDTH, SourceUnit, Token, lex

# Binary operator precedence, loosest first.
_BINARY_LEVELS: list[tuple[str, ...]] = [
    ("||",),
    ("&&",),
    ("|",),
    ("^",),
    ("&",),
    ("==", "!="),
    ("<", "<=", ">", ">="),
    ("<<", ">>"),
    ("+", "-"),
    ("*",),
]

_UNSUPPORTED_OPS = {
    "===": "case equality (===)",
    "!==": "case inequality (!==)",
    "<<<": "arithmetic shift (<<<)",
    ">>>": "arithmetic shift (>>>)",
    "**": "power operator (**)",
    "/": "division",
    "%": "modulo",
}

_UNSUPPORTED_KEYWORDS = {
    "initial": "initial",
    "generate": "generate",
    "endgenerate": "generate",
    "genvar": "generate",
    "function": "function",
    "endfunction": "function",
    "task": "task",
    "endtask": "task",
    "casez": "casez",
    "casex": "casex",
    "integer": "integer",
    "real": "real",
    "signed": "signed",
    "for": "for loop",
    "while": "while loop",
    "repeat": "repeat loop",
    "forever": "forever loop",
    "fork": "fork/join",
    "inout": "inout",
}


def const_eval(expr: A.Expr, params: dict[str, int], path: str = "") -> int:
    """Fold a constant expression over parameter values."""
    if isinstance(expr, A.Literal):
        return expr.value
    if isinstance(expr, A.Ident):
        if expr.name not in params:
            raise SemanticError(f"'{expr.name}' is not a constant", expr.line, path=path)
        return params[expr.name]
    if isinstance(expr, A.Unary):
        v = const_eval(expr.operand, params, path)
        if expr.op == "-":
            return -v
        if expr.op == "!":
            return int(v == 0)
        if expr.op == "~":
            return ~v & 0xFFFFFFFF
        raise SemanticError(f"operator '{expr.op}' not allowed in a constant expression", expr.line, path=path)
    if isinstance(expr, A.Binary):
        a = const_eval(expr.left, params, path)
        b = const_eval(expr.right, params, path)
        fn: dict[str, Callable[[int, int], int]] = {
            "+": lambda x, y: x + y,
            "-": lambda x, y: x - y,
            "*": lambda x, y: x * y,
            "<<": lambda x, y: x << y,
            ">>": lambda x, y: x >> y,
            "&": lambda x, y: x & y,
            "|": lambda x, y: x | y,
            "^": lambda x, y: x ^ y,
            "==": lambda x, y: int(x == y),
            "!=": lambda x, y: int(x != y),
            "<": lambda x, y: int(x < y),
            "<=": lambda x, y: int(x <= y),
            ">": lambda x, y: int(x > y),
            ">=": lambda x, y: int(x >= y),
            "&&": lambda x, y: int(bool(x) and bool(y)),
            "||": lambda x, y: int(bool(x) or bool(y)),
        }
        return fn[expr.op](a, b)
    if isinstance(expr, A.Ternary):
        c = const_eval(expr.cond, params, path)
        return const_eval(expr.then if c else expr.other, params, path)
    raise SemanticError("expression is not constant", getattr(expr, "line", None), path=path)


class Parser:
    def __init__(self, tokens: list[Token], path: str = "<source>"):
        self.toks = tokens
        self.pos = 0
        self.path = path
        self.params: dict[str, int] = {}
        self.param_nodes: list[A.Param] = []

    # -- token helpers -------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def error(self, expected: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        return ParseError(f"expected {expected}, found {found}", tok.line, tok.col, self.path)

    def unsupported(self, construct: str, tok: Optional[Token] = None) -> UnsupportedConstructError:
        tok = tok or self.tok
        return UnsupportedConstructError(construct, tok.line, tok.col, self.path)

    def check_unsupported(self) -> None:
        t = self.tok
        if t.kind == "kw" and t.text in _UNSUPPORTED_KEYWORDS:
            raise self.unsupported(_UNSUPPORTED_KEYWORDS[t.text])
        if t.kind == "op" and t.text == "#":
            raise self.unsupported("delays")
        if t.kind == "op" and t.text in _UNSUPPORTED_OPS:
            raise self.unsupported(_UNSUPPORTED_OPS[t.text])
        if t.kind == "sys":
            raise self.unsupported(f"system task {t.text}")
        if t.kind == "directive":
            raise self.unsupported(f"compiler directive {t.text}")

    def expect_op(self, text: str) -> Token:
        if not self.tok.is_op(text):
            self.check_unsupported()
            raise self.error(f"'{text}'")
        return self.advance()

    def expect_kw(self, text: str) -> Token:
        if not self.tok.is_kw(text):
            self.check_unsupported()
            raise self.error(f"'{text}'")
        return self.advance()

    def expect_id(self, what: str = "identifier") -> Token:
        if self.tok.kind != "id":
            self.check_unsupported()
            raise self.error(what)
        return self.advance()

    def accept_op(self, text: str) -> bool:
        if self.tok.is_op(text):
            self.advance()
            return True
        return False

    def accept_kw(self, text: str) -> bool:
        if self.tok.is_kw(text):
            self.advance()
            return True
        return False

    # -- module structure ----------------------------------------------------

    def parse_module(self) -> A.Module:
        self.check_unsupported()
        start = self.expect_kw("module")
        name = self.expect_id("module name").text
        if self.accept_op("#"):
            self.expect_op("(")
            self.parse_param_list(header=True)
            self.expect_op(")")
        ports: list[A.Port] = []
        nonansi: list[Token] = []
        if self.accept_op("("):
            if not self.tok.is_op(")"):
                if self.tok.is_kw("input") or self.tok.is_kw("output") or self.tok.is_kw("inout"):
                    ports = self.parse_ansi_ports()
                else:
                    nonansi.append(self.expect_id("port name"))
                    while self.accept_op(","):
                        nonansi.append(self.expect_id("port name"))
            self.expect_op(")")
        self.expect_op(";")

        port_decls: dict[str, A.Port] = {}
        decls: list[A.Decl] = []
        assigns: list[A.ContAssign] = []
        always: list[A.Always] = []
        while not self.tok.is_kw("endmodule"):
            t = self.tok
            if t.kind == "eof":
                raise self.error("'endmodule'")
            if t.is_kw("parameter") or t.is_kw("localparam"):
                self.parse_param_decl()
            elif t.is_kw("input") or t.is_kw("output"):
                if ports:
                    raise ParseError("port redeclared in body of an ANSI-style module", t.line, t.col, self.path)
                for p in self.parse_port_decl():
                    if p.name in port_decls:
                        raise SemanticError(f"port '{p.name}' declared twice", p.line, path=self.path)
                    port_decls[p.name] = p
            elif t.is_kw("wire"):
                decls_here, assigns_here = self.parse_net_decl()
                decls.extend(decls_here)
                assigns.extend(assigns_here)
            elif t.is_kw("reg"):
                decls.extend(self.parse_reg_decl())
            elif t.is_kw("assign"):
                assigns.extend(self.parse_cont_assign())
            elif t.is_kw("always"):
                always.append(self.parse_always())
            elif t.kind == "id" and self.peek().kind == "id":
                raise self.unsupported("module instantiation")
            elif t.is_kw("module"):
                raise self.unsupported("nested module")
            else:
                self.check_unsupported()
                raise self.error("module item")
        self.expect_kw("endmodule")
        if self.tok.kind != "eof":
            if self.tok.is_kw("module"):
                raise self.unsupported("multiple modules")
            raise self.error("end of input")

        if nonansi:
            ports, decls = self.merge_nonansi(nonansi, port_decls, decls)
        elif port_decls:
            raise ParseError("port declarations without a port list", start.line, start.col, self.path)
        module = A.Module(
            name=name,
            ports=tuple(ports),
            params=tuple(self.param_nodes),
            decls=tuple(decls),
            assigns=tuple(assigns),
            always=tuple(always),
            line=start.line,
        )
        check_module(module, self.path)
        return module

    def merge_nonansi(self, names, port_decls, decls):
        ports = []
        reg_names = {d.name: d for d in decls if d.kind == "reg"}
        for tok in names:
            p = port_decls.get(tok.text)
            if p is None:
                raise SemanticError(f"port '{tok.text}' has no direction declaration", tok.line, tok.col, self.path)
            if p.name in reg_names:
                d = reg_names[p.name]
                if p.direction != "output":
                    raise SemanticError(f"input '{p.name}' declared as reg", d.line, path=self.path)
                if d.width != p.width:
                    raise SemanticError(f"width mismatch between port and reg '{p.name}'", d.line, path=self.path)
                p = A.Port(p.name, p.direction, p.width, True, p.line)
            ports.append(p)
        listed = {t.text for t in names}
        for extra in port_decls:
            if extra not in listed:
                raise SemanticError(f"'{extra}' declared as a port but missing from the port list", port_decls[extra].line, path=self.path)
        rest = [d for d in decls if d.name not in listed]
        return ports, rest

    def parse_range(self) -> int:
        """Parse ``[msb:0]`` and return the width."""
        lb = self.expect_op("[")
        msb = const_eval(self.parse_expr(), self.params, self.path)
        self.expect_op(":")
        lsb = const_eval(self.parse_expr(), self.params, self.path)
        self.expect_op("]")
        if lsb != 0:
            raise self.unsupported("range with non-zero lsb", lb)
        width = msb + 1
        if width < 1 or width > MAX_WIDTH:
            raise SemanticError(f"width {width} outside 1..{MAX_WIDTH}", lb.line, lb.col, self.path)
        return width

    def parse_ansi_ports(self) -> list[A.Port]:
        ports = []
        direction = None
        is_reg = False
        width = 1
        while True:
            t = self.tok
            if t.is_kw("inout"):
                raise self.unsupported("inout")
            if t.is_kw("input") or t.is_kw("output"):
                direction = self.advance().text
                is_reg = False
                width = 1
                if self.accept_kw("wire"):
                    pass
                elif self.tok.is_kw("reg"):
                    self.advance()
                    is_reg = True
                self.check_unsupported()
                if self.tok.is_op("["):
                    width = self.parse_range()
            elif direction is None:
                raise self.error("port direction")
            name = self.expect_id("port name")
            if is_reg and direction == "input":
                raise SemanticError(f"input '{name.text}' declared as reg", name.line, name.col, self.path)
            ports.append(A.Port(name.text, direction, width, is_reg, name.line))
            if not self.accept_op(","):
                break
        return ports

    def parse_port_decl(self) -> list[A.Port]:
        t = self.advance()
        direction = t.text
        is_reg = False
        if self.accept_kw("wire"):
            pass
        elif self.accept_kw("reg"):
            is_reg = True
        self.check_unsupported()
        width = self.parse_range() if self.tok.is_op("[") else 1
        out = []
        while True:
            name = self.expect_id("port name")
            out.append(A.Port(name.text, direction, width, is_reg, name.line))
            if not self.accept_op(","):
                break
        self.expect_op(";")
        return out

    def parse_param_list(self, header: bool) -> None:
        while True:
            local = False
            if self.tok.is_kw("parameter"):
                self.advance()
            elif self.tok.is_kw("localparam"):
                self.advance()
                local = True
            self.parse_one_param(local)
            if not self.accept_op(","):
                break

    def parse_one_param(self, local: bool) -> None:
        self.check_unsupported()
        width = self.parse_range() if self.tok.is_op("[") else 32
        name = self.expect_id("parameter name")
        self.expect_op("=")
        value = const_eval(self.parse_expr(), self.params, self.path)
        if name.text in self.params:
            raise SemanticError(f"parameter '{name.text}' redefined", name.line, name.col, self.path)
        if value < 0:
            raise self.unsupported("negative parameter value", name)
        value &= (1 << width) - 1
        self.params[name.text] = value
        self.param_nodes.append(A.Param(name.text, value, width, local, name.line))

    def parse_param_decl(self) -> None:
        local = self.advance().text == "localparam"
        while True:
            self.parse_one_param(local)
            if not self.accept_op(","):
                break
        self.expect_op(";")

    def parse_net_decl(self):
        self.expect_kw("wire")
        self.check_unsupported()
        width = self.parse_range() if self.tok.is_op("[") else 1
        decls, assigns = [], []
        while True:
            name = self.expect_id("net name")
            if self.tok.is_op("["):
                raise self.unsupported("memory array")
            decls.append(A.Decl("wire", name.text, width, name.line))
            if self.accept_op("="):
                value = self.parse_expr()
                assigns.append(A.ContAssign(A.Ident(name.text, name.line), value, name.line))
            if not self.accept_op(","):
                break
        self.expect_op(";")
        return decls, assigns

    def parse_reg_decl(self) -> list[A.Decl]:
        self.expect_kw("reg")
        self.check_unsupported()
        width = self.parse_range() if self.tok.is_op("[") else 1
        decls = []
        while True:
            name = self.expect_id("reg name")
            if self.tok.is_op("["):
                raise self.unsupported("memory array")
            if self.tok.is_op("="):
                raise self.unsupported("reg initializer")
            decls.append(A.Decl("reg", name.text, width, name.line))
            if not self.accept_op(","):
                break
        self.expect_op(";")
        return decls

    def parse_cont_assign(self) -> list[A.ContAssign]:
        kw = self.expect_kw("assign")
        if self.tok.is_op("#"):
            raise self.unsupported("delays")
        out = []
        while True:
            line = self.tok.line
            target = self.parse_lvalue()
            self.expect_op("=")
            value = self.parse_expr()
            out.append(A.ContAssign(target, value, line if out else kw.line))
            if not self.accept_op(","):
                break
        self.expect_op(";")
        return out

    def parse_always(self) -> A.Always:
        kw = self.expect_kw("always")
        if self.tok.is_op("#"):
            raise self.unsupported("delays")
        self.expect_op("@")
        edges: list[A.Edge] = []
        if self.accept_op("*"):
            pass
        else:
            self.expect_op("(")
            if self.accept_op("*"):
                pass
            else:
                plain = False
                while True:
                    if self.tok.is_kw("posedge") or self.tok.is_kw("negedge"):
                        edge = self.advance().text
                        sig = self.expect_id("signal name")
                        edges.append(A.Edge(edge, sig.text))
                    else:
                        self.expect_id("signal name")
                        plain = True
                    if not (self.accept_kw("or") or self.accept_op(",")):
                        break
                if plain and edges:
                    raise self.unsupported("mixed edge and level sensitivity", kw)
            self.expect_op(")")
        body = self.parse_stmt()
        return A.Always(tuple(edges), body, kw.line)

    # -- statements ----------------------------------------------------------

    def parse_stmt(self) -> A.Stmt:
        self.check_unsupported()
        t = self.tok
        if t.is_kw("begin"):
            self.advance()
            label = ""
            if self.accept_op(":"):
                label = self.expect_id("block label").text
            stmts = []
            while not self.tok.is_kw("end"):
                if self.tok.kind == "eof":
                    raise self.error("'end'")
                stmts.append(self.parse_stmt())
            self.advance()
            if label and self.accept_op(":"):
                self.expect_id("block label")
            return A.Block(tuple(stmts), label, t.line)
        if t.is_kw("if"):
            self.advance()
            self.expect_op("(")
            cond = self.parse_expr()
            self.expect_op(")")
            then = self.parse_stmt()
            other = None
            else_line = 0
            if self.tok.is_kw("else"):
                else_line = self.advance().line
                other = self.parse_stmt()
            return A.If(cond, then, other, t.line, else_line)
        if t.is_kw("case"):
            return self.parse_case()
        if t.is_op(";"):
            self.advance()
            return A.NullStmt(t.line)
        if t.is_kw("assign"):
            raise self.unsupported("procedural continuous assignment", t)
        if t.kind == "id" or t.is_op("{"):
            target = self.parse_lvalue()
            if self.tok.is_op("="):
                blocking = True
            elif self.tok.is_op("<="):
                blocking = False
            else:
                raise self.error("'=' or '<='")
            self.advance()
            if self.tok.is_op("#"):
                raise self.unsupported("delays")
            value = self.parse_expr()
            self.expect_op(";")
            return A.Assign(target, value, blocking, t.line)
        raise self.error("statement")

    def parse_case(self) -> A.Case:
        kw = self.advance()
        self.expect_op("(")
        selector = self.parse_expr()
        self.expect_op(")")
        arms: list[A.CaseArm] = []
        default = None
        while not self.tok.is_kw("endcase"):
            t = self.tok
            if t.kind == "eof":
                raise self.error("'endcase'")
            if t.is_kw("default"):
                self.advance()
                self.accept_op(":")
                if default is not None:
                    raise ParseError("multiple default arms", t.line, t.col, self.path)
                default = A.CaseArm((), self.parse_stmt(), t.line)
                continue
            labels = [self.parse_expr()]
            while self.accept_op(","):
                labels.append(self.parse_expr())
            self.expect_op(":")
            body = self.parse_stmt()
            arms.append(A.CaseArm(tuple(labels), body, t.line))
        self.advance()
        return A.Case(selector, tuple(arms), default, kw.line)

    def parse_lvalue(self) -> A.Expr:
        t = self.tok
        if t.is_op("{"):
            self.advance()
            parts = [self.parse_lvalue()]
            while self.accept_op(","):
                parts.append(self.parse_lvalue())
            self.expect_op("}")
            return A.Concat(tuple(parts), t.line)
        name = self.expect_id("assignment target")
        if self.tok.is_op("["):
            sel = self.parse_select(name)
            if isinstance(sel, A.BitSelect):
                idx = const_eval(sel.index, self.params, self.path)
                return A.BitSelect(sel.name, A.Literal(idx, None, 10, sel.line), sel.line)
            return sel
        return A.Ident(name.text, name.line)

    def parse_select(self, name: Token) -> A.Expr:
        self.expect_op("[")
        first = self.parse_expr()
        if self.accept_op(":"):
            second = self.parse_expr()
            self.expect_op("]")
            msb = const_eval(first, self.params, self.path)
            lsb = const_eval(second, self.params, self.path)
            if msb < lsb:
                raise SemanticError("part select with msb < lsb", name.line, name.col, self.path)
            return A.PartSelect(name.text, msb, lsb, name.line)
        if self.tok.is_op("+") and self.peek().is_op(":"):
            raise self.unsupported("indexed part select")
        self.expect_op("]")
        return A.BitSelect(name.text, first, name.line)

    # -- expressions ---------------------------------------------------------

    def parse_expr(self) -> A.Expr:
        cond = self.parse_binary(0)
        if self.tok.is_op("?"):
            t = self.advance()
            then = self.parse_expr()
            self.expect_op(":")
            other = self.parse_expr()
            return A.Ternary(cond, then, other, t.line)
        return cond

    def parse_binary(self, level: int) -> A.Expr:
        if level == len(_BINARY_LEVELS):
            return self.parse_unary()
        left = self.parse_binary(level + 1)
        ops = _BINARY_LEVELS[level]
        while True:
            t = self.tok
            if t.kind == "op" and t.text in _UNSUPPORTED_OPS:
                raise self.unsupported(_UNSUPPORTED_OPS[t.text])
            if not (t.kind == "op" and t.text in ops):
                return left
            self.advance()
            right = self.parse_binary(level + 1)
            left = A.Binary(t.text, left, right, t.line)

    def parse_unary(self) -> A.Expr:
        t = self.tok
        if t.kind == "op" and t.text in ("~", "!", "-", "&", "|", "^"):
            self.advance()
            return A.Unary(t.text, self.parse_unary(), t.line)
        if t.is_op("+"):
            self.advance()
            return self.parse_unary()
        return self.parse_primary()

    def parse_primary(self) -> A.Expr:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return A.Literal(t.value, t.width, t.base, t.line)
        if t.kind == "id":
            self.advance()
            if self.tok.is_op("["):
                return self.parse_select(t)
            if self.tok.is_op("("):
                raise self.unsupported("function call")
            return A.Ident(t.text, t.line)
        if t.is_op("("):
            self.advance()
            e = self.parse_expr()
            self.expect_op(")")
            return e
        if t.is_op("{"):
            self.advance()
            first = self.parse_expr()
            if self.tok.is_op("{"):
                count = const_eval(first, self.params, self.path)
                if count < 1:
                    raise SemanticError("replication count must be positive", t.line, t.col, self.path)
                self.advance()
                parts = [self.parse_expr()]
                while self.accept_op(","):
                    parts.append(self.parse_expr())
                self.expect_op("}")
                self.expect_op("}")
                return A.Repeat(count, tuple(parts), t.line)
            parts = [first]
            while self.accept_op(","):
                parts.append(self.parse_expr())
            self.expect_op("}")
            return A.Concat(tuple(parts), t.line)
        self.check_unsupported()
        raise self.error("expression")


# -- semantic checks -----------------------------------------------------------


def check_module(m: A.Module, path: str = "") -> None:
    """Establish the AST invariants: names resolve, targets are legal, one always block per reg."""
    widths: dict[str, int] = {}
    kinds: dict[str, str] = {}
    for p in m.ports:
        if p.name in widths:
            raise SemanticError(f"'{p.name}' declared twice", p.line, path=path)
        widths[p.name] = p.width
        kinds[p.name] = p.direction + ("-reg" if p.is_reg else "")
    params = m.param_table()
    for d in m.decls:
        if d.name in widths or d.name in params:
            raise SemanticError(f"'{d.name}' declared twice", d.line, path=path)
        widths[d.name] = d.width
        kinds[d.name] = d.kind
    for p in m.params:
        if p.name in widths:
            raise SemanticError(f"'{p.name}' declared twice", p.line, path=path)

    def check_expr(e: A.Expr) -> None:
        for sub in A.walk_expr(e):
            name = None
            if isinstance(sub, (A.Ident, A.BitSelect, A.PartSelect)):
                name = sub.name
            if name is None:
                continue
            if name not in widths and name not in params:
                raise SemanticError(f"undeclared identifier '{name}'", sub.line, path=path)
            if isinstance(sub, (A.BitSelect, A.PartSelect)) and name in params:
                raise SemanticError(f"select on parameter '{name}'", sub.line, path=path)
            if isinstance(sub, A.PartSelect) and sub.msb >= widths[name]:
                raise SemanticError(f"part select [{sub.msb}:{sub.lsb}] out of range for '{name}'", sub.line, path=path)
            if isinstance(sub, A.BitSelect) and isinstance(sub.index, A.Literal) and sub.index.value >= widths[name]:
                raise SemanticError(f"bit select [{sub.index.value}] out of range for '{name}'", sub.line, path=path)

    def check_target(t: A.Expr, line: int) -> None:
        check_expr(t)
        for name in A.target_names(t):
            if name in params:
                raise SemanticError(f"cannot assign to parameter '{name}'", line, path=path)
            if kinds.get(name) == "input":
                raise SemanticError(f"cannot assign to input '{name}'", line, path=path)

    for a in m.assigns:
        check_target(a.target, a.line)
        check_expr(a.value)

    owner: dict[str, int] = {}
    for idx, blk in enumerate(m.always):
        for e in blk.sensitivity:
            if e.signal not in widths:
                raise SemanticError(f"undeclared identifier '{e.signal}'", blk.line, path=path)
        for s in A.walk_stmt(blk.body):
            if isinstance(s, A.Assign):
                check_target(s.target, s.line)
                check_expr(s.value)
                for name in A.target_names(s.target):
                    if owner.setdefault(name, idx) != idx:
                        raise SemanticError(f"'{name}' is assigned in more than one always block", s.line, path=path)
            elif isinstance(s, A.If):
                check_expr(s.cond)
            elif isinstance(s, A.Case):
                check_expr(s.selector)
                for arm in s.arms:
                    for label in arm.labels:
                        check_expr(label)
                        try:
                            const_eval(label, {k: v.value for k, v in params.items()}, path)
                        except SemanticError:
                            raise SemanticError("case labels must be constant", arm.line, path=path) from None


def parse(tokens: list[Token], path: str = "<source>") -> A.Module:
    """Parse a token list into a checked module AST."""
    return Parser(tokens, path).parse_module()


def parse_source(source: SourceUnit | str, path: str | None = None) -> A.Module:
    if isinstance(source, str):
        source = SourceUnit.from_text(source, path or "<source>")
    return parse(lex(source), source.path)


def parse_file(path: str) -> A.Module:
    return parse_source(SourceUnit.from_file(path))
