"""Concrete ASCII syntax for types and signatures.

Precedence, loosest first::

    T -> U        right associative
    T ; U         left associative
    !T  ?T        prefix, one operand
    atoms         unit, skip, base, Ident, numeral, (T), {..}, <..>, +{..}, &{..}

Quantifiers ``all[K] T`` / ``ex[K] T`` take everything to their right as body.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List

from .types import (
    Arrow,
    Base,
    Choice,
    DuplicateIdent,
    Ident,
    Index,
    Kind,
    Labeled,
    Message,
    Polarity,
    Quant,
    Quantifier,
    Seq,
    Shape,
    Signature,
    Skip,
    TypeExpr,
    Unit,
    View,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int, expected: tuple[str, ...] = ()) -> None:
        detail = f"{message} at line {line}, column {column}"
        if expected:
            detail += f"; expected {' or '.join(expected)}"
        super().__init__(detail)
        self.line = line
        self.column = column
        self.expected = expected


@dataclass(frozen=True)
class Token:
    kind: str  # 'op', 'num', 'lower', 'upper', 'eof'
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<op>->|[;!?(){}<>,:+&\[\]=])
  | (?P<num>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)


def tokenize(text: str, line: int = 1) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    line_start = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "op":
            tokens.append(Token("op", m.group(), line, col))
        elif kind == "num":
            tokens.append(Token("num", m.group(), line, col))
        elif kind == "ident":
            word = m.group()
            tokens.append(Token("upper" if word[0].isupper() else "lower", word, line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, len(text) - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: List[Token]) -> None:
        self.tokens = tokens
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, expected: tuple[str, ...]) -> ParseError:
        tok = self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        return ParseError(f"unexpected {found}", tok.line, tok.column, expected)

    def expect(self, text: str) -> Token:
        if self.tok.kind == "op" and self.tok.text == text:
            return self.advance()
        raise self.fail((repr(text),))

    def at(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    # type := seq ('->' type)?
    def type_(self) -> TypeExpr:
        left = self.seq()
        if self.at("->"):
            self.advance()
            return Arrow(left, self.type_())
        return left

    # seq := prefix (';' prefix)*
    def seq(self) -> TypeExpr:
        acc = self.prefix()
        while self.at(";"):
            self.advance()
            acc = Seq(acc, self.prefix())
        return acc

    def prefix(self) -> TypeExpr:
        tok = self.tok
        if self.at("!") or self.at("?"):
            self.advance()
            pol = Polarity.OUT if tok.text == "!" else Polarity.IN
            return Message(pol, self.prefix())
        if tok.kind == "lower" and tok.text in ("all", "ex"):
            self.advance()
            self.expect("[")
            ktok = self.tok
            if ktok.kind != "upper" or ktok.text not in ("S", "T"):
                raise self.fail(("'S'", "'T'"))
            self.advance()
            self.expect("]")
            q = Quantifier.FORALL if tok.text == "all" else Quantifier.EXISTS
            return Quant(q, Kind(ktok.text), self.type_())
        return self.atom()

    def atom(self) -> TypeExpr:
        tok = self.tok
        if tok.kind == "lower":
            self.advance()
            if tok.text == "unit":
                return Unit()
            if tok.text == "skip":
                return Skip()
            return Base(tok.text)
        if tok.kind == "upper":
            self.advance()
            return Ident(tok.text)
        if tok.kind == "num":
            self.advance()
            return Index(int(tok.text))
        if self.at("("):
            self.advance()
            inner = self.type_()
            self.expect(")")
            return inner
        if self.at("{"):
            self.advance()
            return Labeled(Shape.RECORD, self.fields("}"))
        if self.at("<"):
            self.advance()
            return Labeled(Shape.VARIANT, self.fields(">"))
        if self.at("+") or self.at("&"):
            self.advance()
            self.expect("{")
            view = View.INTERNAL if tok.text == "+" else View.EXTERNAL
            return Choice(view, self.fields("}"))
        raise self.fail(("a type",))

    def fields(self, close: str) -> tuple:
        items = []
        seen = set()
        while True:
            ltok = self.tok
            if ltok.kind not in ("lower", "upper"):
                raise self.fail(("a label",))
            self.advance()
            if ltok.text in seen:
                raise ParseError(f"duplicate label {ltok.text!r}", ltok.line, ltok.column)
            seen.add(ltok.text)
            self.expect(":")
            items.append((ltok.text, self.type_()))
            if self.at(","):
                self.advance()
                continue
            self.expect(close)
            return tuple(items)


def parse_type(text: str) -> TypeExpr:
    """Parse one type in the ASCII syntax."""
    p = _Parser(tokenize(text))
    t = p.type_()
    if p.tok.kind != "eof":
        raise p.fail(("end of input", "'->'", "';'"))
    return t


def parse_signature(text: str) -> Signature:
    """Parse ``X = <type>`` lines; blank lines and ``#`` comments are ignored."""
    equations = []
    defined: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = tokenize(raw, line=lineno)
        if tokens[0].kind == "eof":
            continue
        head = tokens[0]
        if head.kind != "upper":
            raise ParseError("equation must start with a capitalised identifier", lineno, head.column)
        if len(tokens) < 2 or tokens[1].text != "=":
            tok = tokens[1]
            raise ParseError(f"unexpected {tok.text!r}", lineno, tok.column, ("'='",))
        if head.text in defined:
            raise DuplicateIdent(head.text, lineno)
        p = _Parser(tokens)
        p.pos = 2
        body = p.type_()
        if p.tok.kind != "eof":
            raise p.fail(("end of line",))
        defined[head.text] = lineno
        equations.append((head.text, body))
    return Signature(equations)


# -- pretty printing --------------------------------------------------------

_ARROW, _SEQ, _PREFIX = 0, 1, 2


def _fields(branches) -> str:
    return ", ".join(f"{lbl}: {pretty(t)}" for lbl, t in branches)


def pretty(t: TypeExpr, prec: int = _ARROW) -> str:
    """Render ``t`` with the fewest parentheses that still parse back to ``t``."""
    if isinstance(t, Unit):
        return "unit"
    if isinstance(t, Skip):
        return "skip"
    if isinstance(t, Base):
        return t.name
    if isinstance(t, Ident):
        return t.name
    if isinstance(t, Index):
        return str(t.n)
    if isinstance(t, Labeled):
        inner = _fields(t.branches)
        return f"{{{inner}}}" if t.shape is Shape.RECORD else f"<{inner}>"
    if isinstance(t, Choice):
        return f"{t.view.value}{{{_fields(t.branches)}}}"
    if isinstance(t, Message):
        return t.polarity.value + pretty(t.payload, _PREFIX)
    if isinstance(t, Seq):
        s = f"{pretty(t.first, _SEQ)};{pretty(t.second, _PREFIX)}"
        return s if prec <= _SEQ else f"({s})"
    if isinstance(t, Arrow):
        s = f"{pretty(t.domain, _SEQ)} -> {pretty(t.range, _ARROW)}"
        return s if prec == _ARROW else f"({s})"
    if isinstance(t, Quant):
        s = f"{t.quantifier.value}[{t.kind.value}] {pretty(t.body, _ARROW)}"
        return s if prec == _ARROW else f"({s})"
    raise TypeError(f"not a type: {t!r}")

