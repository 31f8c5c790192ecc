"""Boundary-marker regexes for configuration sets.

Surface syntax for one control-state slice of a configuration set. Tokens
are whitespace-separated symbol identifiers plus the operators `|`
(alternation), postfix `*`, `(` `)`, `_` (empty word), and `^` (the
upper/lower boundary). Every top-level alternative contains `^` exactly
once; what is left of it is the upper word, what is right of it the
lower word. Alternation inside a single zone needs parentheses.

ASTs are plain tuples:
    ("config", ((upper, lower), ...))   top level, one pair per alternative
    ("sym", name) | ("empty",) | ("star", x)
    ("concat", (x, y, ...)) | ("alt", (x, y, ...))    both n-ary, n >= 2
The printer emits a canonical form that parses back to the same AST.
"""

from __future__ import annotations

from typing import Iterable

from .configsets import bar
from .errors import MalformedInputError, ParseError
from .nfa import EPSILON, Nfa

_PUNCT = {"(": "lparen", ")": "rparen", "|": "pipe", "*": "star", "^": "caret"}


class _Token:
    __slots__ = ("kind", "value", "line", "col")

    def __init__(self, kind: str, value: str, line: int, col: int):
        self.kind = kind
        self.value = value
        self.line = line
        self.col = col


def tokenize(text: str, line: int = 1, col: int = 1) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch in _PUNCT:
            tokens.append(_Token(_PUNCT[ch], ch, line, col))
            col += 1
            i += 1
            continue
        j = i
        while j < len(text) and not text[j].isspace() and text[j] not in _PUNCT:
            j += 1
        word = text[i:j]
        kind = "empty" if word == "_" else "sym"
        tokens.append(_Token(kind, word, line, col))
        col += j - i
        i = j
    tokens.append(_Token("end", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], alphabet: set[str] | None):
        self.tokens = tokens
        self.pos = 0
        self.alphabet = alphabet

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, tok: _Token, message: str):
        raise ParseError(tok.line, tok.col, message)

    def parse_config(self) -> tuple:
        branches = [self.parse_branch()]
        while self.peek().kind == "pipe":
            self.take()
            branches.append(self.parse_branch())
        tok = self.peek()
        if tok.kind != "end":
            self.fail(tok, f"unexpected {tok.value!r}")
        return ("config", tuple(branches))

    def parse_branch(self) -> tuple:
        upper = self.parse_seq()
        tok = self.peek()
        if tok.kind != "caret":
            self.fail(tok, "missing boundary marker '^' in alternative")
        self.take()
        lower = self.parse_seq()
        tok = self.peek()
        if tok.kind == "caret":
            self.fail(tok, "second boundary marker '^' in alternative")
        return (upper, lower)

    def parse_seq(self) -> tuple:
        items = []
        while self.peek().kind in ("sym", "empty", "lparen"):
            items.append(self.parse_item())
        if not items:
            return ("empty",)
        if len(items) == 1:
            return items[0]
        return ("concat", tuple(items))

    def parse_item(self) -> tuple:
        node = self.parse_atom()
        while self.peek().kind == "star":
            self.take()
            node = ("star", node)
        return node

    def parse_atom(self) -> tuple:
        tok = self.take()
        if tok.kind == "sym":
            if self.alphabet is not None and tok.value not in self.alphabet:
                self.fail(tok, f"undeclared symbol {tok.value!r}")
            return ("sym", tok.value)
        if tok.kind == "empty":
            return ("empty",)
        if tok.kind == "lparen":
            node = self.parse_alt()
            closing = self.take()
            if closing.kind != "rparen":
                if closing.kind == "caret":
                    self.fail(closing, "boundary marker '^' not allowed inside a group")
                self.fail(closing, "unbalanced parenthesis")
            return node
        self.fail(tok, f"unexpected {tok.value!r}" if tok.kind != "end" else "unexpected end of expression")

    def parse_alt(self) -> tuple:
        parts = [self.parse_seq()]
        while self.peek().kind == "pipe":
            self.take()
            parts.append(self.parse_seq())
        if len(parts) == 1:
            return parts[0]
        return ("alt", tuple(parts))


def parse_config_regex(
    text: str, line: int = 1, col: int = 1, alphabet: Iterable[str] | None = None
) -> tuple:
    tokens = tokenize(text, line, col)
    return _Parser(tokens, set(alphabet) if alphabet is not None else None).parse_config()


def _print_part(ast: tuple, parent: str) -> str:
    """parent is "outer" (a branch zone or alternation member), "concat",
    or "star"; it decides where parentheses are required to reparse to the
    same AST. Alternations are always parenthesized: a bare '|' would bind
    at branch level."""
    kind = ast[0]
    if kind == "sym":
        return ast[1]
    if kind == "empty":
        return "_"
    if kind == "star":
        return _print_part(ast[1], "star") + "*"
    if kind == "concat":
        body = " ".join(_print_part(x, "concat") for x in ast[1])
        return f"({body})" if parent in ("concat", "star") else body
    if kind == "alt":
        body = " | ".join(_print_part(x, "outer") for x in ast[1])
        return f"({body})"
    raise MalformedInputError(f"not a regex node: {ast!r}")


def print_config_regex(ast: tuple) -> str:
    if ast[0] != "config":
        raise MalformedInputError(f"not a top-level regex: {ast!r}")
    branches = []
    for upper, lower in ast[1]:
        left = _print_part(upper, "outer")
        right = _print_part(lower, "outer")
        branches.append(f"{left} ^ {right}")
    return " | ".join(branches)


class _Builder:
    def __init__(self):
        self.nfa = Nfa()
        self.count = 0

    def fresh(self) -> int:
        self.count += 1
        self.nfa.add_node(self.count - 1)
        return self.count - 1

    def build(self, ast: tuple, barred: bool) -> tuple[int, int]:
        kind = ast[0]
        start, end = self.fresh(), self.fresh()
        if kind == "sym":
            label = bar(ast[1]) if barred else ast[1]
            self.nfa.add_edge(start, label, end)
        elif kind == "empty":
            self.nfa.add_edge(start, EPSILON, end)
        elif kind == "star":
            s, e = self.build(ast[1], barred)
            self.nfa.add_edge(start, EPSILON, s)
            self.nfa.add_edge(e, EPSILON, end)
            self.nfa.add_edge(start, EPSILON, end)
            self.nfa.add_edge(e, EPSILON, s)
        elif kind == "concat":
            prev = start
            for part in ast[1]:
                s, e = self.build(part, barred)
                self.nfa.add_edge(prev, EPSILON, s)
                prev = e
            self.nfa.add_edge(prev, EPSILON, end)
        elif kind == "alt":
            for part in ast[1]:
                s, e = self.build(part, barred)
                self.nfa.add_edge(start, EPSILON, s)
                self.nfa.add_edge(e, EPSILON, end)
        else:
            raise MalformedInputError(f"not a regex node: {ast!r}")
        return start, end


def compile_config_regex(
    source: str | tuple,
    alphabet: Iterable[str] | None = None,
    line: int = 1,
    col: int = 1,
) -> Nfa:
    """Compile a boundary-marker regex (text or AST) to a zone-valid Nfa."""
    if isinstance(source, str):
        ast = parse_config_regex(source, line, col, alphabet)
    else:
        ast = source
    builder = _Builder()
    start = builder.fresh()
    builder.nfa.add_initial(start)
    accept = builder.fresh()
    builder.nfa.add_final(accept)
    for upper, lower in ast[1]:
        us, ue = builder.build(upper, barred=True)
        ls, le = builder.build(lower, barred=False)
        builder.nfa.add_edge(start, EPSILON, us)
        builder.nfa.add_edge(ue, EPSILON, ls)
        builder.nfa.add_edge(le, EPSILON, accept)
    return builder.nfa
