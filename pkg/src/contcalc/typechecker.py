"""Typing of terms and rules against a signature, plus the non-circularity check."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import CCError, CircularityError, ShapeError
from .terms import App, Name, Program, Rule, Term, Var, app, names_in, show, spine
from .types import BOT, Type, head_arrow, show_type, type_eq, validate_mu_shape

Signature = Mapping[Name, Type]
Context = Mapping[Var, Type]

KINDS = (
    "UnknownName",
    "UnknownVar",
    "NotAFunction",
    "ArgMismatch",
    "RuleHeadMismatch",
    "BodyNotBot",
    "DuplicateRule",
    "BadSignatureShape",
)


@dataclass(eq=False)
class TypeCheckError(CCError):
    kind: str
    message: str
    location: str = ""
    term: Term | None = field(default=None, repr=False)

    def __post_init__(self):
        assert self.kind in KINDS, self.kind
        super().__init__(str(self))

    def __str__(self):
        where = f"{self.location}: " if self.location else ""
        return f"{where}{self.kind}: {self.message}"


def infer(sig: Signature, ctx: Context, t: Term) -> Type:
    h, args = spine(t)
    if isinstance(h, Name):
        try:
            ty = sig[h]
        except KeyError:
            raise TypeCheckError("UnknownName", f"{h} has no declared type", term=h) from None
    else:
        try:
            ty = ctx[h]
        except KeyError:
            raise TypeCheckError("UnknownVar", f"{h} is not in scope", term=h) from None
    for i, arg in enumerate(args):
        exposed = head_arrow(ty)
        if exposed is None:
            fun = app(h, *args[:i])
            raise TypeCheckError(
                "NotAFunction",
                f"{show(fun)} : {show_type(ty)} cannot be applied to {show(arg)}",
                term=App(fun, arg),
            )
        dom, ty = exposed
        a_ty = sig.get(arg) if isinstance(arg, Name) else None
        if a_ty is None:
            a_ty = infer(sig, ctx, arg)
        if not type_eq(a_ty, dom):
            whole = app(h, *args[: i + 1])
            raise TypeCheckError(
                "ArgMismatch",
                f"in {show(whole)}: argument {show(arg)} has type {show_type(a_ty)}, "
                f"expected {show_type(dom)}",
                term=whole,
            )
    return ty


def has_type(sig: Signature, ctx: Context, t: Term, ty: Type) -> bool:
    try:
        return type_eq(infer(sig, ctx, t), ty)
    except TypeCheckError:
        return False


def peel(ty: Type, k: int) -> tuple[list[Type], Type] | None:
    """Split off ``k`` argument types, unfolding mu-types on the way."""
    doms = []
    for _ in range(k):
        exposed = head_arrow(ty)
        if exposed is None:
            return None
        doms.append(exposed[0])
        ty = exposed[1]
    return doms, ty


def check_rule(sig: Signature, p: Program, r: Rule) -> None:
    where = f"rule {r.head}"
    if r.head not in sig:
        raise TypeCheckError("UnknownName", f"{r.head} has no declared type", where)
    head_ty = sig[r.head]
    split = peel(head_ty, r.arity)
    if split is None or not type_eq(split[1], BOT):
        raise TypeCheckError(
            "RuleHeadMismatch",
            f"{r.head} : {show_type(head_ty)} does not take exactly {r.arity} "
            f"argument(s) to _|_",
            where,
        )
    ctx = dict(zip(r.params, split[0]))
    try:
        body_ty = infer(sig, ctx, r.body)
    except TypeCheckError as e:
        e.location = where
        raise
    if not type_eq(body_ty, BOT):
        raise TypeCheckError(
            "BodyNotBot", f"body {show(r.body)} has type {show_type(body_ty)}, not _|_", where
        )
    if r.head in p:
        raise TypeCheckError("DuplicateRule", f"{r.head} is already defined", where)


def check_signature(sig: Signature) -> list[TypeCheckError]:
    errors = []
    for n, ty in sig.items():
        try:
            validate_mu_shape(ty)
        except ShapeError as e:
            errors.append(TypeCheckError("BadSignatureShape", str(e), f"name {n}"))
    return errors


def check_program(sig: Signature, p: Program) -> list[TypeCheckError]:
    """All typing errors of ``p``; an empty list means the program is well typed."""
    errors = check_signature(sig)
    for r in p.rules:
        try:
            check_rule(sig, p.without(r.head), r)
        except TypeCheckError as e:
            errors.append(e)
    return errors


def check_non_circular(p: Program, generated: Iterable[Name], r: Rule) -> None:
    """Raise CircularityError unless ``r`` only builds on generated names and
    on user rules whose dependencies never form a cycle."""
    base = set(generated)
    deps = {
        rule.head: names_in(rule.body) for rule in p.rules if rule.head not in base
    }
    deps[r.head] = names_in(r.body)

    for n in sorted(deps[r.head], key=str):
        if n not in base and n not in deps:
            raise CircularityError(
                f"rule {r.head} uses {n}, which is neither generated nor a user rule"
            )

    # depth-first search for a path from r.head back to itself
    path: list[Name] = [r.head]
    on_path = {r.head}
    done: set[Name] = set()

    def visit(n: Name) -> None:
        for m in sorted(deps.get(n, ()), key=str):
            if m in base:
                continue
            if m in on_path:
                cycle = path[path.index(m):] + [m]
                raise CircularityError(
                    f"rule {r.head} depends on a cycle: {' -> '.join(map(str, cycle))}",
                    tuple(cycle),
                )
            if m in done or m not in deps:
                continue
            path.append(m)
            on_path.add(m)
            visit(m)
            on_path.discard(m)
            path.pop()
            done.add(m)

    visit(r.head)

