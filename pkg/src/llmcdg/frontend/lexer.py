"""Tokenizer for the supported Verilog subset."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import LexError

KEYWORDS = frozenset(
    """
    module endmodule input output inout wire reg parameter localparam assign
    always posedge negedge or begin end if else case endcase default
    initial generate endgenerate genvar function endfunction task endtask
    casez casex integer real signed for while repeat forever fork join
    """.split()
)

# Longest operators first so the alternation is greedy.
OPERATORS = [
    "===", "!==", "<<<", ">>>",
    "<=", ">=", "==", "!=", "&&", "||", "<<", ">>", "**",
    "+", "-", "*", "/", "%", "&", "|", "^", "~", "!", "<", ">", "=", "?", ":",
    ";", ",", ".", "(", ")", "[", "]", "{", "}", "@", "#",
]

MAX_WIDTH = 63

_BASES = {"b": 2, "o": 8, "d": 10, "h": 16}
_DIGITS = {2: "01", 8: "01234567", 10: "0123456789", 16: "0123456789abcdef"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n\f\v]+)
  | (?P<linecomment>//[^\n]*)
  | (?P<blockcomment>/\*.*?\*/)
  | (?P<unterminated>/\*)
  | (?P<based>(?:[0-9][0-9_]*[ \t]*)?'[sS]?[bBoOdDhH][ \t]*[0-9a-zA-Z_?]+)
  | (?P<number>[0-9][0-9_]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_$]*)
  | (?P<sysname>\$[A-Za-z_][A-Za-z0-9_$]*)
  | (?P<directive>`[A-Za-z_]+)
  | (?P<op>"""
    + "|".join(re.escape(op) for op in OPERATORS)
    + r""")
    """,
    re.VERBOSE | re.DOTALL,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "kw", "id", "num", "op", "sys", "directive", "eof"
    text: str
    line: int
    col: int
    value: int = 0
    width: int | None = None  # None for unsized literals
    base: int = 10

    def is_op(self, text: str) -> bool:
        return self.kind == "op" and self.text == text

    def is_kw(self, text: str) -> bool:
        return self.kind == "kw" and self.text == text


@dataclass(frozen=True)
class SourceUnit:
    text: str
    path: str = "<source>"
    line_starts: tuple[int, ...] = field(default=(), compare=False)

    @classmethod
    def from_text(cls, text: str, path: str = "<source>") -> "SourceUnit":
        starts = [0]
        for m in re.finditer("\n", text):
            if m.end() < len(text):
                starts.append(m.end())
        return cls(text, path, tuple(starts))

    @classmethod
    def from_file(cls, path: str) -> "SourceUnit":
        with open(path, "rb") as fh:
            raw = fh.read()
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise LexError(f"source is not valid UTF-8 ({exc.reason})", path=str(path)) from None
        return cls.from_text(text, str(path))

    @property
    def line_count(self) -> int:
        return len(self.line_starts) if self.text else 0

    def line_text(self, line: int) -> str:
        """Return line ``line`` (1-based) without its terminator."""
        start = self.line_starts[line - 1]
        end = self.text.find("\n", start)
        return self.text[start:] if end < 0 else self.text[start:end]

    def position(self, offset: int) -> tuple[int, int]:
        lo, hi = 0, len(self.line_starts) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.line_starts[mid] <= offset:
                lo = mid
            else:
                hi = mid - 1
        return lo + 1, offset - self.line_starts[lo] + 1


def _parse_based(text: str, line: int, col: int, path: str) -> tuple[int, int | None, int]:
    size_part, rest = text.split("'", 1)
    size_part = size_part.strip().replace("_", "")
    if rest[0] in "sS":
        raise LexError("signed literals are not supported", line, col, path)
    base = _BASES[rest[0].lower()]
    digits = rest[1:].strip().replace("_", "").lower()
    if any(ch in "xz?" for ch in digits):
        raise LexError(f"X/Z literal '{text}' is not supported (two-valued logic only)", line, col, path)
    if not digits or any(ch not in _DIGITS[base] for ch in digits):
        raise LexError(f"malformed literal '{text}'", line, col, path)
    value = int(digits, base)
    width = None
    if size_part:
        width = int(size_part)
        if width < 1 or width > MAX_WIDTH:
            raise LexError(f"literal width {width} outside 1..{MAX_WIDTH}", line, col, path)
        if value >= 1 << width:
            raise LexError(f"literal '{text}' does not fit in {width} bits", line, col, path)
    return value, width, base


def lex(source: SourceUnit | str) -> list[Token]:
    """Split ``source`` into tokens, dropping whitespace and comments."""
    if isinstance(source, str):
        source = SourceUnit.from_text(source)
    text, path = source.text, source.path
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        line, col = source.position(pos)
        if m is None:
            raise LexError(f"illegal character {text[pos]!r}", line, col, path)
        kind = m.lastgroup
        tok = m.group()
        if kind == "unterminated":
            raise LexError("unterminated block comment", line, col, path)
        if kind == "based":
            value, width, base = _parse_based(tok, line, col, path)
            tokens.append(Token("num", tok, line, col, value, width, base))
        elif kind == "number":
            digits = tok.replace("_", "")
            tokens.append(Token("num", tok, line, col, int(digits), None, 10))
        elif kind == "ident":
            tokens.append(Token("kw" if tok in KEYWORDS else "id", tok, line, col))
        elif kind == "sysname":
            tokens.append(Token("sys", tok, line, col))
        elif kind == "directive":
            tokens.append(Token("directive", tok, line, col))
        elif kind == "op":
            tokens.append(Token("op", tok, line, col))
        pos = m.end()
    line, col = source.position(len(text)) if text else (1, 1)
    tokens.append(Token("eof", "", line, col))
    return tokens
