"""Terms, rules and programs of Continuation Calculus.

A term is a left-nested binary application tree whose leaves are names
(global, capitalised) or variables (lower case, only inside rule bodies).
Reduction happens elsewhere; this module only knows the syntax and the
arity arithmetic.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Union

from .errors import DuplicateDefinition, MalformedRule, UnboundVariable

NAME_RE = re.compile(r"[A-Z][A-Za-z0-9_'^{}#]*\Z")
VAR_RE = re.compile(r"[a-z][A-Za-z0-9_']*\Z")


@dataclass(frozen=True, slots=True)
class Name:
    text: str

    def __post_init__(self):
        if not NAME_RE.match(self.text):
            raise ValueError(f"not a valid name: {self.text!r}")

    def __str__(self):
        return self.text


@dataclass(frozen=True, slots=True)
class Var:
    text: str

    def __post_init__(self):
        if not VAR_RE.match(self.text):
            raise ValueError(f"not a valid variable: {self.text!r}")

    def __str__(self):
        return self.text


@dataclass(frozen=True, slots=True, eq=False)
class App:
    fun: Term
    arg: Term
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((App, self.fun, self.arg)))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, App) or self._hash != other._hash:
            return False
        # iterate down the spine to keep recursion depth proportional to nesting
        a, b = self, other
        while isinstance(a, App) and isinstance(b, App):
            if a.arg != b.arg:
                return False
            a, b = a.fun, b.fun
        return a == b

    def __repr__(self):
        return f"App[{show(self)}]"

    def __str__(self):
        return show(self)


Term = Union[Name, Var, App]


class Classification(enum.Enum):
    UNDEFINED = "Undefined"
    COMPLETE = "Complete"
    INCOMPLETE = "Incomplete"
    INVALID = "Invalid"

    def __str__(self):
        return self.value


def app(head: Term, *args: Term) -> Term:
    """Left-fold application: ``app(n, a, b)`` is ``n.a.b``."""
    t = head
    for a in args:
        t = App(t, a)
    return t


def spine(t: Term) -> tuple[Term, list[Term]]:
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def head(t: Term) -> Name | Var:
    while isinstance(t, App):
        t = t.fun
    return t


def length(t: Term) -> int:
    n = 0
    while isinstance(t, App):
        n += 1
        t = t.fun
    return n


def subterms(t: Term) -> Iterator[Term]:
    stack = [t]
    while stack:
        u = stack.pop()
        yield u
        if isinstance(u, App):
            stack.append(u.arg)
            stack.append(u.fun)


def free_vars(t: Term) -> set[Var]:
    return {u for u in subterms(t) if isinstance(u, Var)}


def names_in(t: Term) -> set[Name]:
    return {u for u in subterms(t) if isinstance(u, Name)}


def is_closed(t: Term) -> bool:
    return not any(isinstance(u, Var) for u in subterms(t))


def substitute(body: Term, env: Mapping[Var, Term]) -> Term:
    """Simultaneously replace the variables of ``body`` by terms from ``env``.

    CC terms bind nothing, so there is no capture to worry about.
    """
    if isinstance(body, Var):
        try:
            return env[body]
        except KeyError:
            raise UnboundVariable(f"no binding for variable {body}") from None
    if isinstance(body, Name):
        return body
    h, args = spine(body)
    return app(substitute(h, env), *(substitute(a, env) for a in args))


def show(t: Term) -> str:
    """Canonical text: dots between arguments, parentheses only around
    arguments that are themselves applications."""
    if not isinstance(t, App):
        return t.text
    h, args = spine(t)
    parts = [show(h)]
    for a in args:
        parts.append(f"({show(a)})" if isinstance(a, App) else a.text)
    return ".".join(parts)


@dataclass(frozen=True)
class Rule:
    head: Name
    params: tuple[Var, ...]
    body: Term

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))
        if len(set(self.params)) != len(self.params):
            raise MalformedRule(f"rule for {self.head} repeats a parameter")
        stray = free_vars(self.body) - set(self.params)
        if stray:
            names = ", ".join(sorted(v.text for v in stray))
            raise MalformedRule(f"rule for {self.head} uses unbound variables: {names}")

    @property
    def arity(self) -> int:
        return len(self.params)

    def lhs(self) -> Term:
        return app(self.head, *self.params)

    def __str__(self):
        return f"{show(self.lhs())} -> {show(self.body)}"


class Program(Mapping[Name, Rule]):
    """An immutable finite map from names to their defining rules.

    Iteration order is definition order; equality ignores order.
    """

    __slots__ = ("_rules",)

    def __init__(self, rules: Iterable[Rule] = ()):
        table: dict[Name, Rule] = {}
        for r in rules:
            if r.head in table:
                raise DuplicateDefinition(f"{r.head} is already defined")
            table[r.head] = r
        self._rules = table

    def __getitem__(self, name: Name) -> Rule:
        return self._rules[name]

    def __iter__(self):
        return iter(self._rules)

    def __len__(self):
        return len(self._rules)

    def __eq__(self, other):
        if not isinstance(other, Program):
            return NotImplemented
        return self._rules == other._rules

    def __hash__(self):
        return hash(frozenset(self._rules.items()))

    def __repr__(self):
        return f"Program({list(self._rules.values())!r})"

    @property
    def rules(self) -> tuple[Rule, ...]:
        return tuple(self._rules.values())

    def domain(self) -> frozenset[Name]:
        return frozenset(self._rules)

    def add_rule(self, rule: Rule) -> Program:
        if rule.head in self._rules:
            raise DuplicateDefinition(f"{rule.head} is already defined")
        return Program([*self._rules.values(), rule])

    def without(self, name: Name) -> Program:
        return Program(r for r in self._rules.values() if r.head != name)

    def merge(self, rules: Iterable[Rule]) -> Program:
        return Program([*self._rules.values(), *rules])

    def names(self) -> set[Name]:
        """Every name mentioned anywhere in the program."""
        out = set(self._rules)
        for r in self._rules.values():
            out |= names_in(r.body)
        return out


def add_rule(p: Program, r: Rule) -> Program:
    return p.add_rule(r)


def arity_of_name(p: Program, n: Name) -> int | None:
    r = p.get(n)
    return None if r is None else r.arity


def term_arity(p: Program, t: Term) -> int | None:
    """``arity(head) - length`` when that is a natural number, else None."""
    h = head(t)
    if not isinstance(h, Name):
        return None
    k = arity_of_name(p, h)
    if k is None:
        return None
    d = k - length(t)
    return d if d >= 0 else None


def classify(p: Program, t: Term) -> Classification:
    h = head(t)
    if isinstance(h, Var):
        raise ValueError(f"cannot classify an open term: {show(t)}")
    k = arity_of_name(p, h)
    if k is None:
        return Classification.UNDEFINED
    d = k - length(t)
    if d == 0:
        return Classification.COMPLETE
    return Classification.INCOMPLETE if d > 0 else Classification.INVALID


def fresh_names(k: int, avoid: Iterable[Name], stem: str = "C") -> list[Name]:
    """Mint ``k`` names ``stem#0``, ``stem#1``, ... skipping any in ``avoid``."""
    taken = set(avoid)
    out: list[Name] = []
    i = 0
    while len(out) < k:
        n = Name(f"{stem}#{i}")
        if n not in taken:
            out.append(n)
            taken.add(n)
        i += 1
    return out
