"""Concrete syntax: lexer, LL(1) parser and printer for ``.cc`` files.

Grammar (``--`` starts a comment that runs to the end of the line)::

    file     := item*
    item     := 'use' 'prelude'
              | 'data' NAME ['(' NAME (',' NAME)* ')'] '=' ctor ('|' ctor)*
              | 'name' NAME ':' type
              | 'rule' NAME ('.' IDENT)* '->' term
              | 'iterator' ('cbn' | 'cbv') tref '->' tref
    ctor     := NAME ['(' type (',' type)* ')']
    type     := prefix ['->' type]
    prefix   := '~' prefix | 'mu' NAME '.' type | atom
    atom     := '_|_' | tref | '(' type ')'
    tref     := NAME ['(' tref (',' tref)* ')']
    term     := tatom ('.' tatom)*
    tatom    := NAME | IDENT | '(' term ')'

``NAME`` is ``[A-Z][A-Za-z0-9_'^{}#]*`` and ``IDENT`` is ``[a-z][A-Za-z0-9_']*``.
A type reference ``List(Nat)`` is kept as the atom ``List{Nat}`` until the
loader resolves it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Union

from .errors import CCError, MalformedRule
from .terms import App, Name, Program, Rule, Term, Var, app, show
from .types import BOT, Arrow, Mu, Type, TyVar, ref_text, show_type, split_instance


@dataclass(frozen=True, order=True)
class Span:
    line: int
    col: int

    def __str__(self):
        return f"{self.line}:{self.col}"


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    message: str
    span: Span | None = None
    file: str | None = None

    def __str__(self):
        where = self.file or "<input>"
        if self.span is not None:
            where += f":{self.span}"
        return f"{where}: {self.severity}: {self.message}"

    def to_json(self) -> dict:
        return {
            "severity": self.severity,
            "message": self.message,
            "file": self.file,
            "span": None if self.span is None else {"line": self.span.line, "col": self.span.col},
        }


class ParseError(CCError):
    def __init__(self, diagnostic: Diagnostic):
        super().__init__(str(diagnostic))
        self.diagnostic = diagnostic

    @property
    def diagnostics(self) -> list[Diagnostic]:
        return [self.diagnostic]


# -- lexer -------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>--[^\n]*)
  | (?P<bot>_\|_)
  | (?P<arrow>->)
  | (?P<NAME>[A-Z][A-Za-z0-9_'^{}\#]*)
  | (?P<IDENT>[a-z][A-Za-z0-9_']*)
  | (?P<sym>[.(),|=:~])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # NAME, IDENT, '_|_', '->', a symbol, or EOF
    text: str
    span: Span


def tokenize(text: str, file: str | None = None) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        span = Span(line, pos - line_start + 1)
        if m is None:
            raise ParseError(
                Diagnostic("error", f"unexpected character {text[pos]!r}", span, file)
            )
        kind = m.lastgroup
        chunk = m.group()
        if kind == "NAME" and not _balanced(chunk):
            raise ParseError(Diagnostic("error", f"unbalanced braces in name {chunk!r}", span, file))
        if kind in ("NAME", "IDENT"):
            tokens.append(Token(kind, chunk, span))
        elif kind == "bot":
            tokens.append(Token("_|_", chunk, span))
        elif kind == "arrow":
            tokens.append(Token("->", chunk, span))
        elif kind == "sym":
            tokens.append(Token(chunk, chunk, span))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    tokens.append(Token("EOF", "", Span(line, pos - line_start + 1)))
    return tokens


def _balanced(s: str) -> bool:
    depth = 0
    for ch in s:
        depth += {"{": 1, "}": -1}.get(ch, 0)
        if depth < 0:
            return False
    return depth == 0


# -- AST -----------------------------------------------------------------------


@dataclass(frozen=True)
class UseItem:
    module: str
    span: Span | None = field(default=None, compare=False)


@dataclass(frozen=True)
class CtorItem:
    name: str
    args: tuple[Type, ...] = ()


@dataclass(frozen=True)
class DataItem:
    name: str
    params: tuple[str, ...]
    ctors: tuple[CtorItem, ...]
    span: Span | None = field(default=None, compare=False)


@dataclass(frozen=True)
class NameItem:
    name: Name
    type: Type
    span: Span | None = field(default=None, compare=False)


@dataclass(frozen=True)
class RuleItem:
    rule: Rule
    span: Span | None = field(default=None, compare=False)


@dataclass(frozen=True)
class IteratorItem:
    style: str
    data: str
    target: str
    span: Span | None = field(default=None, compare=False)


Item = Union[UseItem, DataItem, NameItem, RuleItem, IteratorItem]


@dataclass(frozen=True)
class SourceFile:
    items: tuple[Item, ...]
    file: str | None = field(default=None, compare=False)


# -- parser --------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str, file: str | None):
        self.file = file
        self.toks = tokenize(text, file)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def fail(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "EOF" else repr(tok.text)
        raise ParseError(Diagnostic("error", f"{message}, found {found}", tok.span, self.file))

    def at(self, kind: str, text: str | None = None) -> bool:
        return self.tok.kind == kind and (text is None or self.tok.text == text)

    def eat(self, kind: str, text: str | None = None, what: str | None = None) -> Token:
        if not self.at(kind, text):
            self.fail(f"expected {what or text or kind}")
        tok = self.tok
        self.i += 1
        return tok

    def keyword(self, word: str) -> Token:
        return self.eat("IDENT", word, f"'{word}'")

    # items

    def source(self) -> SourceFile:
        items = []
        while not self.at("EOF"):
            items.append(self.item())
        return SourceFile(tuple(items), self.file)

    def item(self) -> Item:
        tok = self.tok
        if tok.kind == "IDENT":
            handler = {
                "use": self.use_item,
                "data": self.data_item,
                "name": self.name_item,
                "rule": self.rule_item,
                "iterator": self.iterator_item,
            }.get(tok.text)
            if handler is not None:
                self.i += 1
                return handler(tok.span)
        self.fail("expected 'use', 'data', 'name', 'rule' or 'iterator'")

    def use_item(self, span: Span) -> UseItem:
        self.keyword("prelude")
        return UseItem("prelude", span)

    def data_item(self, span: Span) -> DataItem:
        name = self.eat("NAME", what="a type name").text
        params: list[str] = []
        if self.at("("):
            self.i += 1
            params.append(self.eat("NAME", what="a type parameter").text)
            while self.at(","):
                self.i += 1
                params.append(self.eat("NAME", what="a type parameter").text)
            self.eat(")")
        self.eat("=")
        ctors = [self.ctor()]
        while self.at("|"):
            self.i += 1
            ctors.append(self.ctor())
        return DataItem(name, tuple(params), tuple(ctors), span)

    def ctor(self) -> CtorItem:
        name = self.eat("NAME", what="a constructor name").text
        args: list[Type] = []
        if self.at("("):
            self.i += 1
            args.append(self.type())
            while self.at(","):
                self.i += 1
                args.append(self.type())
            self.eat(")")
        return CtorItem(name, tuple(args))

    def name_item(self, span: Span) -> NameItem:
        name = Name(self.eat("NAME", what="a name").text)
        self.eat(":")
        return NameItem(name, self.type(), span)

    def rule_item(self, span: Span) -> RuleItem:
        head_tok = self.eat("NAME", what="the name being defined")
        params = []
        while self.at("."):
            self.i += 1
            params.append(Var(self.eat("IDENT", what="a parameter variable").text))
        self.eat("->")
        body = self.term()
        try:
            rule = Rule(Name(head_tok.text), tuple(params), body)
        except MalformedRule as e:
            raise ParseError(Diagnostic("error", str(e), head_tok.span, self.file)) from None
        return RuleItem(rule, span)

    def iterator_item(self, span: Span) -> IteratorItem:
        style_tok = self.eat("IDENT", what="'cbn' or 'cbv'")
        if style_tok.text not in ("cbn", "cbv"):
            self.fail("expected 'cbn' or 'cbv'", style_tok)
        data = self.tref()
        self.eat("->")
        target = self.tref()
        return IteratorItem(style_tok.text, data, target, span)

    # types

    def type(self) -> Type:
        left = self.prefix()
        if self.at("->"):
            self.i += 1
            return Arrow(left, self.type())
        return left

    def prefix(self) -> Type:
        if self.at("~"):
            self.i += 1
            return Arrow(self.prefix(), BOT)
        if self.at("IDENT", "mu"):
            self.i += 1
            var = self.eat("NAME", what="a bound type variable").text
            self.eat(".")
            return Mu(var, self.type())
        return self.atom()

    def atom(self) -> Type:
        if self.at("_|_"):
            self.i += 1
            return BOT
        if self.at("("):
            self.i += 1
            t = self.type()
            self.eat(")")
            return t
        if self.at("NAME"):
            return TyVar(self.tref())
        self.fail("expected a type")

    def tref(self) -> str:
        name = self.eat("NAME", what="a type name").text
        if not self.at("("):
            return name
        self.i += 1
        args = [self.tref()]
        while self.at(","):
            self.i += 1
            args.append(self.tref())
        self.eat(")")
        return name + "".join("{" + a + "}" for a in args)

    # terms

    def term(self) -> Term:
        t = self.tatom()
        while self.at("."):
            self.i += 1
            t = app(t, self.tatom())
        return t

    def tatom(self) -> Term:
        if self.at("NAME"):
            return Name(self.eat("NAME").text)
        if self.at("IDENT"):
            return Var(self.eat("IDENT").text)
        if self.at("("):
            self.i += 1
            t = self.term()
            self.eat(")")
            return t
        self.fail("expected a name, a variable or '('")

    def finish(self):
        if not self.at("EOF"):
            self.fail("expected end of input")


def parse(text: str, file: str | None = None) -> SourceFile:
    """Parse a whole ``.cc`` file. Raises ParseError (only) on bad input."""
    try:
        return _Parser(text, file).source()
    except RecursionError:
        raise ParseError(Diagnostic("error", "input nested too deeply", None, file)) from None


def _parse_one(text: str, method: str, file: str | None):
    try:
        p = _Parser(text, file)
        out = getattr(p, method)()
        p.finish()
        return out
    except RecursionError:
        raise ParseError(Diagnostic("error", "input nested too deeply", None, file)) from None


def parse_term(text: str, file: str | None = None) -> Term:
    return _parse_one(text, "term", file)


def parse_type(text: str, file: str | None = None) -> Type:
    return _parse_one(text, "type", file)


def parse_tref(text: str, file: str | None = None) -> str:
    return _parse_one(text, "tref", file)


def parse_rule(text: str, file: str | None = None) -> Rule:
    """Parse ``LHS -> RHS``, with or without the leading ``rule`` keyword."""
    stripped = text.lstrip()
    if not stripped.startswith("rule"):
        text = "rule " + text
    src = parse(text, file)
    if len(src.items) != 1 or not isinstance(src.items[0], RuleItem):
        raise ParseError(Diagnostic("error", "expected a single rule", None, file))
    return src.items[0].rule


# -- printer -------------------------------------------------------------------


def print_term(t: Term) -> str:
    return show(t)


def print_type(t: Type, aliases: dict | None = None) -> str:
    return show_type(t, aliases)


def print_rule(r: Rule) -> str:
    return f"rule {r}"


def print_program(p: Program) -> str:
    return "".join(print_rule(r) + "\n" for r in p.rules)


def print_item(item: Item) -> str:
    if isinstance(item, UseItem):
        return f"use {item.module}"
    if isinstance(item, DataItem):
        head = item.name + (f"({', '.join(item.params)})" if item.params else "")
        return f"data {head} = " + " | ".join(_print_ctor(c) for c in item.ctors)
    if isinstance(item, NameItem):
        return f"name {item.name} : {print_type(item.type)}"
    if isinstance(item, RuleItem):
        return print_rule(item.rule)
    if isinstance(item, IteratorItem):
        return f"iterator {item.style} {ref_text(item.data)} -> {ref_text(item.target)}"
    raise TypeError(f"not an item: {item!r}")


def _print_ctor(c: CtorItem) -> str:
    if not c.args:
        return c.name
    return f"{c.name}({', '.join(print_type(a) for a in c.args)})"


def print_source(src: SourceFile | Iterable[Item]) -> str:
    items = src.items if isinstance(src, SourceFile) else src
    return "".join(print_item(i) + "\n" for i in items)


def pretty(x) -> str:
    """Print a term, type, rule, program, item or source file."""
    if isinstance(x, (Name, Var, App)):
        return print_term(x)
    if isinstance(x, Rule):
        return print_rule(x)
    if isinstance(x, Program):
        return print_program(x)
    if isinstance(x, SourceFile):
        return print_source(x)
    if isinstance(x, (UseItem, DataItem, NameItem, RuleItem, IteratorItem)):
        return print_item(x)
    return print_type(x)


__all__ = [
    "CtorItem",
    "DataItem",
    "Diagnostic",
    "IteratorItem",
    "NameItem",
    "ParseError",
    "RuleItem",
    "SourceFile",
    "Span",
    "UseItem",
    "parse",
    "parse_rule",
    "parse_term",
    "parse_tref",
    "parse_type",
    "pretty",
    "print_item",
    "print_program",
    "print_rule",
    "print_source",
    "print_term",
    "print_type",
    "split_instance",
]
