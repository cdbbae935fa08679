"""Top-level reduction, joinability and the fresh-continuation equivalence test."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

from .errors import ArityMismatch
from .terms import (
    Classification,
    Name,
    Program,
    Term,
    app,
    classify,
    fresh_names,
    is_closed,
    names_in,
    show,
    spine,
    substitute,
    term_arity,
)


@dataclass(frozen=True)
class Reduced:
    next: Term


@dataclass(frozen=True)
class NormalForm:
    cls: Classification


StepResult = Union[Reduced, NormalForm]


@dataclass(frozen=True)
class Terminated:
    nf: Term
    cls: Classification
    steps: int


@dataclass(frozen=True)
class FuelExhausted:
    last: Term
    steps: int


EvalOutcome = Union[Terminated, FuelExhausted]


class Equality(enum.Enum):
    EQUAL = "Equal"
    NOT_EQUAL = "NotEqual"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value


class Equivalence(enum.Enum):
    EQUIVALENT = "Equivalent"
    NOT_EQUIVALENT = "NotEquivalent"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value


def _require_closed(t: Term) -> None:
    if not is_closed(t):
        raise ValueError(f"only closed terms can be evaluated: {show(t)}")


def step(p: Program, t: Term) -> StepResult:
    """Fire the rule for the head of ``t`` if the term is complete.

    Never rewrites inside an argument.
    """
    h, args = spine(t)
    if not isinstance(h, Name):
        raise ValueError(f"only closed terms can be evaluated: {show(t)}")
    rule = p.get(h)
    if rule is None:
        return NormalForm(Classification.UNDEFINED)
    if len(args) != rule.arity:
        return NormalForm(classify(p, t))
    return Reduced(substitute(rule.body, dict(zip(rule.params, args))))


def evaluate(p: Program, t: Term, fuel: int) -> EvalOutcome:
    _require_closed(t)
    steps = 0
    while True:
        r = step(p, t)
        if isinstance(r, NormalForm):
            return Terminated(t, r.cls, steps)
        if steps == fuel:
            return FuelExhausted(t, steps)
        t = r.next
        steps += 1


def trace(p: Program, t: Term, fuel: int) -> list[Term]:
    """Every term visited by ``evaluate``, input first."""
    _require_closed(t)
    seen = [t]
    for _ in range(fuel):
        r = step(p, t)
        if isinstance(r, NormalForm):
            break
        t = r.next
        seen.append(t)
    return seen


def _run(p: Program, t: Term, fuel: int) -> tuple[list[Term], bool]:
    visited = trace(p, t, fuel)
    done = isinstance(step(p, visited[-1]), NormalForm)
    return visited, done


def eq_p(p: Program, a: Term, b: Term, fuel: int) -> Equality:
    """Joinability test.

    The system is deterministic, so ``a`` and ``b`` are joinable exactly when
    their forward reduction sequences meet.
    """
    _require_closed(a)
    _require_closed(b)
    seq_a, done_a = _run(p, a, fuel)
    seen = set(seq_a)
    seq_b, done_b = _run(p, b, fuel)
    if any(u in seen for u in seq_b):
        return Equality.EQUAL
    if done_a and done_b:
        return Equality.NOT_EQUAL
    return Equality.UNKNOWN


def _arity_or_fail(p: Program, t: Term) -> int:
    k = term_arity(p, t)
    if k is None:
        raise ArityMismatch(f"{show(t)} has no arity ({classify(p, t)})")
    return k


def obs_equiv_test(
    p: Program,
    a: Term,
    b: Term,
    k: int,
    fuel: int,
    *,
    depth: int = 64,
) -> Equivalence:
    """Sufficient test for observational equivalence of two arity-``k`` terms.

    Both terms are applied to ``k`` fresh continuation names and checked for
    joinability. With ``depth > 0``, two normal forms that share a head and
    length are compared argument-wise, recursively, by the same test (the
    relation is a congruence). ``depth=0`` is the bare single-level test.

    ``EQUIVALENT`` is sound. ``NOT_EQUIVALENT`` only means the test could not
    join the two; it is not a refutation.
    """
    _require_closed(a)
    _require_closed(b)
    if a == b:
        return Equivalence.EQUIVALENT
    ka, kb = _arity_or_fail(p, a), _arity_or_fail(p, b)
    if ka != kb or ka != k:
        raise ArityMismatch(f"arities {ka} and {kb} do not match k={k}")
    return _equiv(p, a, b, k, fuel, depth)


def _equiv(p: Program, a: Term, b: Term, k: int, fuel: int, depth: int) -> Equivalence:
    cs = fresh_names(k, p.names() | names_in(a) | names_in(b))
    left, right = app(a, *cs), app(b, *cs)
    seq_a, done_a = _run(p, left, fuel)
    seen = set(seq_a)
    seq_b, done_b = _run(p, right, fuel)
    if any(u in seen for u in seq_b):
        return Equivalence.EQUIVALENT
    if not (done_a and done_b):
        return Equivalence.UNKNOWN
    if depth <= 0:
        return Equivalence.NOT_EQUIVALENT
    return _congruent(p, seq_a[-1], seq_b[-1], fuel, depth - 1)


def _congruent(p: Program, u: Term, v: Term, fuel: int, depth: int) -> Equivalence:
    hu, us = spine(u)
    hv, vs = spine(v)
    if hu != hv or len(us) != len(vs):
        return Equivalence.NOT_EQUIVALENT
    verdict = Equivalence.EQUIVALENT
    for x, y in zip(us, vs):
        if x == y:
            continue
        kx, ky = term_arity(p, x), term_arity(p, y)
        if kx is None or kx != ky:
            sub = _congruent(p, x, y, fuel, depth - 1) if depth > 0 else Equivalence.NOT_EQUIVALENT
        else:
            sub = _equiv(p, x, y, kx, fuel, depth)
        if sub is Equivalence.NOT_EQUIVALENT:
            return sub
        if sub is Equivalence.UNKNOWN:
            verdict = sub
    return verdict
