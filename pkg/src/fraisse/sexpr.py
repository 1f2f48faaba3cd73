"""S-expressions with source spans.

Atoms are symbols, integers, or double-quoted strings; ``;`` starts a comment
running to the end of the line.  Every node records the line and column of
its first character and the offsets it covers, so diagnostics can point at
the offending text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

WIDTH = 78
_SYMBOL = re.compile(r"[^\s()\";]+")


@dataclass(frozen=True)
class Span:
    line: int
    col: int
    start: int
    end: int


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    span: Span | None = None

    def __str__(self):
        where = f"{self.span.line}:{self.span.col}" if self.span else "-:-"
        return f"{where}: {self.code} {self.message}"


class SexpError(ValueError):
    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__("\n".join(map(str, diagnostics)))
        self.diagnostics = diagnostics


LEX_ERROR = "E001"


@dataclass(frozen=True)
class Sym:
    value: str
    span: Span | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Str:
    value: str
    span: Span | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Int:
    value: int
    span: Span | None = field(default=None, compare=False)


@dataclass(frozen=True)
class SList:
    items: tuple
    span: Span | None = field(default=None, compare=False)

    @property
    def head(self) -> str | None:
        return self.items[0].value if self.items and isinstance(self.items[0], Sym) else None

    def __len__(self):
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def _advance(self, n: int = 1):
        for ch in self.text[self.pos:self.pos + n]:
            if ch == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
        self.pos += n

    def _skip(self):
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch.isspace():
                self._advance()
            elif ch == ";":
                while self.pos < len(self.text) and self.text[self.pos] != "\n":
                    self._advance()
            else:
                break

    def _here(self):
        return self.line, self.col, self.pos

    def _error(self, msg, line, col, start, end=None):
        span = Span(line, col, start, end if end is not None else start + 1)
        raise SexpError([Diagnostic(LEX_ERROR, msg, span)])

    def read_all(self) -> list:
        out = []
        while True:
            self._skip()
            if self.pos >= len(self.text):
                return out
            out.append(self.read())

    def read(self):
        self._skip()
        line, col, start = self._here()
        if self.pos >= len(self.text):
            self._error("unexpected end of input", line, col, start)
        ch = self.text[self.pos]
        if ch == "(":
            self._advance()
            items = []
            while True:
                self._skip()
                if self.pos >= len(self.text):
                    self._error("unbalanced '(': missing ')'", line, col, start)
                if self.text[self.pos] == ")":
                    self._advance()
                    return SList(tuple(items), Span(line, col, start, self.pos))
                items.append(self.read())
        if ch == ")":
            self._error("unexpected ')'", line, col, start)
        if ch == '"':
            self._advance()
            buf = []
            while True:
                if self.pos >= len(self.text):
                    self._error("unterminated string", line, col, start)
                c = self.text[self.pos]
                if c == '"':
                    self._advance()
                    return Str("".join(buf), Span(line, col, start, self.pos))
                if c == "\\" and self.pos + 1 < len(self.text):
                    self._advance()
                    c = self.text[self.pos]
                buf.append(c)
                self._advance()
        m = _SYMBOL.match(self.text, self.pos)
        tok = m.group(0)
        self._advance(len(tok))
        span = Span(line, col, start, self.pos)
        if re.fullmatch(r"-?\d+", tok):
            return Int(int(tok), span)
        return Sym(tok, span)


def parse(text: str) -> list:
    """All top-level nodes of ``text``; raises ``SexpError`` on lexical errors."""
    return _Reader(text).read_all()


# -- printing ---------------------------------------------------------------------

def _atom(node) -> str:
    if isinstance(node, Str):
        return '"' + node.value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    return str(node.value)


def flat(node) -> str:
    if isinstance(node, SList):
        return "(" + " ".join(flat(x) for x in node.items) + ")"
    return _atom(node)


def render(node, indent: int = 0) -> str:
    """Canonical layout: a list fits on one line when it can, otherwise its
    head (and a leading atom after it) stays on the first line and every other
    item goes on its own line."""
    one = flat(node)
    if not isinstance(node, SList) or len(one) + indent <= WIDTH or len(node.items) < 2:
        return one
    pad = " " * (indent + 2)
    k = 2 if len(node.items) > 2 and not any(isinstance(x, SList) for x in node.items[:2]) else 1
    first = " ".join(_atom(x) if not isinstance(x, SList) else flat(x) for x in node.items[:k])
    rest = [pad + render(x, indent + 2) for x in node.items[k:]]
    return "(" + first + "\n" + "\n".join(rest) + ")"


def dumps(nodes) -> str:
    return "".join(render(n) + "\n" for n in nodes)


# -- construction helpers ------------------------------------------------------------

def sym(x: str) -> Sym:
    return Sym(x)


def lst(*items) -> SList:
    return SList(tuple(_node(x) for x in items))


def _node(x):
    if isinstance(x, (Sym, Str, Int, SList)):
        return x
    if isinstance(x, bool):
        return Sym("true" if x else "false")
    if isinstance(x, int):
        return Int(x)
    if isinstance(x, str):
        return Sym(x) if _SYMBOL.fullmatch(x) and not re.fullmatch(r"-?\d+", x) else Str(x)
    if isinstance(x, (list, tuple)):
        return lst(*x)
    raise TypeError(f"cannot encode {type(x).__name__} as an s-expression")


def strip(node):
    """The same tree without spans (for structural comparison)."""
    if isinstance(node, SList):
        return SList(tuple(strip(x) for x in node.items))
    return type(node)(node.value)
