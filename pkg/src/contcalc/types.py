"""Types of CC: bottom, type variables, arrows and shape-restricted mu-types.

Mu-types are equi-recursive: ``mu X. F`` is equal to its unfolding
``F[mu X. F / X]``. Free type variables that are not bound by a mu are
opaque atoms and only equal themselves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Union

from .errors import NotAMu, ShapeError


@dataclass(frozen=True, slots=True)
class Bot:
    def __str__(self):
        return show_type(self)


@dataclass(frozen=True, slots=True)
class TyVar:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class Arrow:
    dom: Type
    cod: Type
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((Arrow, self.dom, self.cod)))

    def __hash__(self):
        return self._hash

    def __str__(self):
        return show_type(self)


@dataclass(frozen=True, slots=True)
class Mu:
    var: str
    body: Type
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((Mu, self.var, self.body)))

    def __hash__(self):
        return self._hash

    def __str__(self):
        return show_type(self)


Type = Union[Bot, TyVar, Arrow, Mu]

BOT = Bot()


def arrows(*types: Type) -> Type:
    """Right-nested arrow: ``arrows(a, b, c)`` is ``a -> b -> c``."""
    *doms, result = types
    for d in reversed(doms):
        result = Arrow(d, result)
    return result


def neg(t: Type) -> Type:
    return Arrow(t, BOT)


def arrow_chain(t: Type) -> tuple[list[Type], Type]:
    """Syntactic split of ``a1 -> ... -> an -> r`` into ``([a1..an], r)``."""
    doms = []
    while isinstance(t, Arrow):
        doms.append(t.dom)
        t = t.cod
    return doms, t


def free_tyvars(t: Type) -> set[str]:
    if isinstance(t, TyVar):
        return {t.name}
    if isinstance(t, Arrow):
        return free_tyvars(t.dom) | free_tyvars(t.cod)
    if isinstance(t, Mu):
        return free_tyvars(t.body) - {t.var}
    return set()


def _all_tyvar_names(t: Type) -> set[str]:
    if isinstance(t, TyVar):
        return {t.name}
    if isinstance(t, Arrow):
        return _all_tyvar_names(t.dom) | _all_tyvar_names(t.cod)
    if isinstance(t, Mu):
        return _all_tyvar_names(t.body) | {t.var}
    return set()


def fresh_tyvar(base: str, avoid: set[str]) -> str:
    name = base
    while name in avoid:
        name += "'"
    return name


def subst_tyvar(t: Type, x: str, s: Type) -> Type:
    """Capture-avoiding replacement of free ``x`` in ``t`` by ``s``."""
    if isinstance(t, TyVar):
        return s if t.name == x else t
    if isinstance(t, Arrow):
        return Arrow(subst_tyvar(t.dom, x, s), subst_tyvar(t.cod, x, s))
    if isinstance(t, Mu):
        if t.var == x or x not in free_tyvars(t.body):
            return t
        fv = free_tyvars(s)
        if t.var in fv:
            y = fresh_tyvar(t.var, fv | _all_tyvar_names(t.body) | {x})
            return Mu(y, subst_tyvar(subst_tyvar(t.body, t.var, TyVar(y)), x, s))
        return Mu(t.var, subst_tyvar(t.body, x, s))
    return t


def unfold_mu(t: Type) -> Type:
    if not isinstance(t, Mu):
        raise NotAMu(f"not a mu-type: {show_type(t)}")
    return _unfold(t)


@lru_cache(maxsize=4096)
def _unfold(t: Mu) -> Type:
    return subst_tyvar(t.body, t.var, t)


def validate_mu_shape(t: Type) -> None:
    """Raise ShapeError unless every mu in ``t`` has the admissible shape.

    ``mu X. s1 -> ... -> sn -> _|_`` where each ``si`` is
    ``t1 -> ... -> tk -> _|_`` and each ``tj`` is exactly ``X`` or free of ``X``.
    """
    if isinstance(t, Arrow):
        validate_mu_shape(t.dom)
        validate_mu_shape(t.cod)
        return
    if not isinstance(t, Mu):
        return
    x = t.var
    sigmas, result = arrow_chain(t.body)
    if not isinstance(result, Bot):
        raise ShapeError(
            f"body of {show_type(t)} does not end in _|_ (ends in {show_type(result)})",
            result,
        )
    for i, sigma in enumerate(sigmas, 1):
        taus, end = arrow_chain(sigma)
        if not isinstance(end, Bot):
            raise ShapeError(
                f"argument {i} of {show_type(t)}, {show_type(sigma)}, is not of the form ... -> _|_",
                sigma,
            )
        for j, tau in enumerate(taus, 1):
            if tau == TyVar(x):
                continue
            if x in free_tyvars(tau):
                raise ShapeError(
                    f"component {j} of argument {i} of {show_type(t)}, {show_type(tau)}, "
                    f"mentions {x} without being {x}",
                    tau,
                )
            validate_mu_shape(tau)


def head_arrow(t: Type) -> tuple[Type, Type] | None:
    """Expose the outermost arrow of ``t``, unfolding mu-types as needed."""
    # a valid mu body is an arrow or _|_, so one unfolding suffices; the
    # bound protects against unvalidated input such as mu X. X
    for _ in range(8):
        if isinstance(t, Arrow):
            return t.dom, t.cod
        if not isinstance(t, Mu):
            return None
        t = unfold_mu(t)
    return None


def type_eq(a: Type, b: Type) -> bool:
    """Equality of the infinite unfoldings of ``a`` and ``b``.

    Coinductive comparison: a pair under examination is assumed equal
    when it is met again.
    """
    if a is b:
        return True
    return _type_eq_cached(a, b)


@lru_cache(maxsize=65536)
def _type_eq_cached(a: Type, b: Type) -> bool:
    return _eq(a, b, set())


def _eq(a: Type, b: Type, assumed: set) -> bool:
    if a is b or a == b:
        return True
    key = frozenset((a, b))
    if key in assumed:
        return True
    if isinstance(a, Mu) or isinstance(b, Mu):
        assumed.add(key)
        a2 = unfold_mu(a) if isinstance(a, Mu) else a
        b2 = unfold_mu(b) if isinstance(b, Mu) else b
        return _eq(a2, b2, assumed)
    if isinstance(a, Arrow) and isinstance(b, Arrow):
        return _eq(a.dom, b.dom, assumed) and _eq(a.cod, b.cod, assumed)
    return False


def show_type(t: Type, aliases: dict | None = None) -> str:
    """Render in surface syntax: ``_|_``, right-nested ``->``, ``mu X . T``.

    ``aliases`` maps types to names printed in their place.
    """
    if aliases and t in aliases:
        return aliases[t]
    if isinstance(t, Bot):
        return "_|_"
    if isinstance(t, TyVar):
        return ref_text(t.name)
    if isinstance(t, Mu):
        return f"mu {t.var} . {show_type(t.body, aliases)}"
    dom = show_type(t.dom, aliases)
    if isinstance(t.dom, (Arrow, Mu)) and not (aliases and t.dom in aliases):
        dom = f"({dom})"
    return f"{dom} -> {show_type(t.cod, aliases)}"


def split_instance(name: str) -> tuple[str, list[str]]:
    """``"List{Nat}"`` -> ``("List", ["Nat"])``; braces nest."""
    base, _, rest = name.partition("{")
    if not rest:
        return name, []
    args, depth, cur = [], 0, ""
    for ch in "{" + rest:
        if ch == "{":
            if depth:
                cur += ch
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth:
                cur += ch
            else:
                args.append(cur)
                cur = ""
        elif depth:
            cur += ch
    return base, args


def ref_text(name: str) -> str:
    """Surface spelling of a (possibly instantiated) type name."""
    base, args = split_instance(name)
    if not args:
        return name
    return f"{base}({', '.join(ref_text(a) for a in args)})"
