"""Render an AST back to Verilog source.

Re-parsing the output yields a structurally identical AST.
"""

from __future__ import annotations

from . import ast as A

_BASE_CHAR = {2: "b", 8: "o", 10: "d", 16: "h"}
_BASE_FMT = {2: "b", 8: "o", 10: "d", 16: "x"}


def format_literal(lit: A.Literal) -> str:
    if lit.width is None and lit.base == 10:
        return str(lit.value)
    digits = format(lit.value, _BASE_FMT[lit.base])
    size = "" if lit.width is None else str(lit.width)
    return f"{size}'{_BASE_CHAR[lit.base]}{digits}"


def format_expr(e: A.Expr) -> str:
    if isinstance(e, A.Literal):
        return format_literal(e)
    if isinstance(e, A.Ident):
        return e.name
    if isinstance(e, A.Unary):
        return f"{e.op}({format_expr(e.operand)})"
    if isinstance(e, A.Binary):
        return f"({format_expr(e.left)} {e.op} {format_expr(e.right)})"
    if isinstance(e, A.Ternary):
        return f"({format_expr(e.cond)} ? {format_expr(e.then)} : {format_expr(e.other)})"
    if isinstance(e, A.BitSelect):
        return f"{e.name}[{format_expr(e.index)}]"
    if isinstance(e, A.PartSelect):
        return f"{e.name}[{e.msb}:{e.lsb}]"
    if isinstance(e, A.Concat):
        return "{" + ", ".join(format_expr(p) for p in e.parts) + "}"
    if isinstance(e, A.Repeat):
        return "{" + str(e.count) + "{" + ", ".join(format_expr(p) for p in e.parts) + "}}"
    raise TypeError(f"not an expression: {e!r}")


def _range(width: int) -> str:
    return f"[{width - 1}:0] " if width > 1 else ""


def _stmt_lines(s: A.Stmt, depth: int) -> list[str]:
    pad = "  " * depth
    if isinstance(s, A.Block):
        head = "begin" + (f" : {s.label}" if s.label else "")
        out = [pad + head]
        for sub in s.stmts:
            out.extend(_stmt_lines(sub, depth + 1))
        out.append(pad + "end")
        return out
    if isinstance(s, A.Assign):
        op = "=" if s.blocking else "<="
        return [f"{pad}{format_expr(s.target)} {op} {format_expr(s.value)};"]
    if isinstance(s, A.If):
        out = [f"{pad}if ({format_expr(s.cond)})"]
        out.extend(_stmt_lines(s.then, depth + 1))
        if s.other is not None:
            out.append(pad + "else")
            out.extend(_stmt_lines(s.other, depth + 1))
        return out
    if isinstance(s, A.Case):
        out = [f"{pad}case ({format_expr(s.selector)})"]
        for arm in s.arms:
            labels = ", ".join(format_expr(x) for x in arm.labels)
            out.append(f"{pad}  {labels}:")
            out.extend(_stmt_lines(arm.body, depth + 2))
        if s.default is not None:
            out.append(f"{pad}  default:")
            out.extend(_stmt_lines(s.default.body, depth + 2))
        out.append(pad + "endcase")
        return out
    if isinstance(s, A.NullStmt):
        return [pad + ";"]
    raise TypeError(f"not a statement: {s!r}")


def format_module(m: A.Module) -> str:
    lines = [f"module {m.name} ("]
    port_lines = []
    for p in m.ports:
        kind = " reg" if p.is_reg else ""
        port_lines.append(f"  {p.direction}{kind} {_range(p.width)}{p.name}".rstrip())
    lines.append(",\n".join(port_lines))
    lines.append(");")
    for p in m.params:
        kw = "localparam" if p.local else "parameter"
        rng = f"[{p.width - 1}:0] " if p.width != 32 else ""
        lines.append(f"  {kw} {rng}{p.name} = {p.value};")
    for d in m.decls:
        lines.append(f"  {d.kind} {_range(d.width)}{d.name};")
    for a in m.assigns:
        lines.append(f"  assign {format_expr(a.target)} = {format_expr(a.value)};")
    for blk in m.always:
        if blk.sensitivity:
            sens = " or ".join(f"{e.edge} {e.signal}" for e in blk.sensitivity)
            lines.append(f"  always @({sens})")
        else:
            lines.append("  always @(*)")
        lines.extend(_stmt_lines(blk.body, 2))
    lines.append("endmodule")
    return "\n".join(lines) + "\n"
