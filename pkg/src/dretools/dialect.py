"""Parser and canonical printer for the textual expression dialect.

Grammar (whitespace insignificant between tokens)::

    expr   := inter ('|' inter)*
    inter  := cat ('&' cat)*
    cat    := post+
    post   := atom ('*' | '+' | '?' | '{' INT ',' (INT | 'inf') '}')*
    atom   := SYMBOL | QUOTED | '(' expr ')' | '()' | '%empty%'

Binary operators are left-associative; union binds loosest, then
interleaving, then juxtaposition (concatenation), then the postfix
operators. ``()`` denotes the empty word and ``%empty%`` the empty
language. A bare symbol starts with a letter or underscore and continues
with letters, digits and ``_ . : -``; any other name must be written in
double quotes, where ``\\`` escapes the next character (only ``"`` and
``\\`` need escaping on output).

``render`` emits the canonical form: minimal parentheses, no whitespace
except a single space between concatenated pieces whose adjacent
characters would otherwise fuse into one symbol token. ``parse_regex``
of a rendered tree reproduces the tree exactly.
"""
from __future__ import annotations

import re

from .ast import (
    Concat,
    Count,
    CountBounds,
    Empty,
    Epsilon,
    Interleave,
    InvalidBoundsError,
    Optional,
    Plus,
    Regex,
    RegexError,
    Star,
    Sym,
    Union,
)

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.:-]*")
_INT_RE = re.compile(r"[0-9]+")
_QUOTED_RE = re.compile(r'"(?:\\.|[^"\\])*"', re.DOTALL)
_EMPTY_LEXEME = "%empty%"
_PUNCT = frozenset("|&*+?{},()")
_NAME_CHARS = frozenset(
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_.:-"
)

_ATOM_STARTERS = frozenset({"NAME", "QUOTED", "(", "EMPTY"})
_ATOM_EXPECTED = frozenset({"symbol", "quoted name", "'('", "'()'", "'%empty%'"})


class RegexSyntaxError(RegexError):
    """Raised on malformed dialect text.

    ``offset`` is the byte offset of the failure in the UTF-8 encoding of
    the input; ``expected`` is the set of token descriptions that would
    have been accepted there.
    """

    def __init__(self, message: str, text: str, char_offset: int,
                 expected: frozenset[str] = frozenset()):
        self.offset = len(text[:char_offset].encode("utf-8"))
        self.char_offset = char_offset
        self.expected = expected
        detail = f"{message} at offset {self.offset}"
        if expected:
            detail += " (expected " + ", ".join(sorted(expected)) + ")"
        super().__init__(detail)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if text.startswith(_EMPTY_LEXEME, i):
            tokens.append(("EMPTY", _EMPTY_LEXEME, i))
            i += len(_EMPTY_LEXEME)
            continue
        if ch in _PUNCT:
            tokens.append((ch, ch, i))
            i += 1
            continue
        m = _NAME_RE.match(text, i)
        if m:
            tokens.append(("NAME", m.group(), i))
            i = m.end()
            continue
        m = _INT_RE.match(text, i)
        if m:
            tokens.append(("INT", m.group(), i))
            i = m.end()
            continue
        if ch == '"':
            m = _QUOTED_RE.match(text, i)
            if not m:
                raise RegexSyntaxError("unterminated quoted name", text, i,
                                       frozenset({"closing '\"'"}))
            body = m.group()[1:-1]
            name = re.sub(r"\\(.)", r"\1", body)
            tokens.append(("QUOTED", name, i))
            i = m.end()
            continue
        raise RegexSyntaxError(f"unrecognized character {ch!r}", text, i)
    tokens.append(("EOF", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected: frozenset[str]) -> RegexSyntaxError:
        kind, value, off = self.peek()
        what = "end of input" if kind == "EOF" else f"{value!r}"
        return RegexSyntaxError(f"unexpected {what}", self.text, off, expected)

    def expect(self, kind: str, label: str):
        if self.peek()[0] != kind:
            raise self.fail(frozenset({label}))
        return self.advance()

    def parse(self) -> Regex:
        node = self.expr()
        if self.peek()[0] != "EOF":
            raise self.fail(frozenset({"'|'", "'&'", "end of input"}) | _ATOM_EXPECTED)
        return node

    def expr(self) -> Regex:
        node = self.inter()
        while self.peek()[0] == "|":
            self.advance()
            node = Union(node, self.inter())
        return node

    def inter(self) -> Regex:
        node = self.cat()
        while self.peek()[0] == "&":
            self.advance()
            node = Interleave(node, self.cat())
        return node

    def cat(self) -> Regex:
        node = self.post()
        while self.peek()[0] in _ATOM_STARTERS:
            node = Concat(node, self.post())
        return node

    def post(self) -> Regex:
        node = self.atom()
        while True:
            kind = self.peek()[0]
            if kind == "*":
                self.advance()
                node = Star(node)
            elif kind == "+":
                self.advance()
                node = Plus(node)
            elif kind == "?":
                self.advance()
                node = Optional(node)
            elif kind == "{":
                node = Count(node, self.bounds())
            else:
                return node

    def bounds(self) -> CountBounds:
        _, _, brace_off = self.expect("{", "'{'")
        lo_tok = self.expect("INT", "integer lower bound")
        self.expect(",", "','")
        kind, value, off = self.peek()
        if kind == "INT":
            self.advance()
            hi: int | None = int(value)
        elif kind == "NAME" and value == "inf":
            self.advance()
            hi = None
        else:
            raise self.fail(frozenset({"integer upper bound", "'inf'"}))
        self.expect("}", "'}'")
        try:
            return CountBounds(int(lo_tok[1]), hi)
        except InvalidBoundsError as exc:
            raise InvalidBoundsError(
                f"{exc} (counter starting at offset "
                f"{len(self.text[:brace_off].encode('utf-8'))})"
            ) from exc

    def atom(self) -> Regex:
        kind, value, _ = self.peek()
        if kind == "NAME":
            self.advance()
            return Sym(value)
        if kind == "QUOTED":
            self.advance()
            if not value:
                raise RegexSyntaxError("quoted symbol name is empty", self.text,
                                       self.tokens[self.i - 1][2])
            return Sym(value)
        if kind == "EMPTY":
            self.advance()
            return Empty()
        if kind == "(":
            self.advance()
            if self.peek()[0] == ")":
                self.advance()
                return Epsilon()
            node = self.expr()
            self.expect(")", "')'")
            return node
        raise self.fail(_ATOM_EXPECTED)


def parse_regex(text: str) -> Regex:
    """Parse dialect text into an AST.

    Raises :class:`RegexSyntaxError` with a byte offset and the set of
    acceptable tokens on malformed input, and :class:`InvalidBoundsError`
    when a counter violates ``lo <= hi``, ``hi >= 1``.
    """
    return _Parser(text).parse()


_LEVEL_UNION = 0
_LEVEL_INTER = 1
_LEVEL_CAT = 2
_LEVEL_POST = 3
_LEVEL_ATOM = 4


def _level(r: Regex) -> int:
    if isinstance(r, Union):
        return _LEVEL_UNION
    if isinstance(r, Interleave):
        return _LEVEL_INTER
    if isinstance(r, Concat):
        return _LEVEL_CAT
    if isinstance(r, (Star, Plus, Optional, Count)):
        return _LEVEL_POST
    return _LEVEL_ATOM


def _sym_text(name: str) -> str:
    if _NAME_RE.fullmatch(name):
        return name
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _child(r: Regex, min_level: int) -> str:
    text = _render(r)
    if _level(r) < min_level:
        return "(" + text + ")"
    return text


def _render(r: Regex) -> str:
    if isinstance(r, Empty):
        return _EMPTY_LEXEME
    if isinstance(r, Epsilon):
        return "()"
    if isinstance(r, Sym):
        return _sym_text(r.name)
    if isinstance(r, Union):
        return _child(r.left, _LEVEL_UNION) + "|" + _child(r.right, _LEVEL_INTER)
    if isinstance(r, Interleave):
        return _child(r.left, _LEVEL_INTER) + "&" + _child(r.right, _LEVEL_CAT)
    if isinstance(r, Concat):
        left = _child(r.left, _LEVEL_CAT)
        right = _child(r.right, _LEVEL_POST)
        if left[-1] in _NAME_CHARS and right[0] in _NAME_CHARS:
            return left + " " + right
        return left + right
    if isinstance(r, Star):
        return _child(r.inner, _LEVEL_POST) + "*"
    if isinstance(r, Plus):
        return _child(r.inner, _LEVEL_POST) + "+"
    if isinstance(r, Optional):
        return _child(r.inner, _LEVEL_POST) + "?"
    if isinstance(r, Count):
        hi = "inf" if r.bounds.hi is None else str(r.bounds.hi)
        return _child(r.inner, _LEVEL_POST) + "{" + str(r.bounds.lo) + "," + hi + "}"
    raise TypeError(f"not a Regex node: {r!r}")


def render(r: Regex) -> str:
    """Emit the canonical dialect text; ``parse_regex(render(r))`` equals ``r``.

    Position ids on marked leaves are ignored.
    """
    return _render(r)
