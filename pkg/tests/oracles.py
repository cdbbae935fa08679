"""Independent reference implementations used to cross-check the library.

Nothing here reuses the decision procedures under test: the type oracle
compares finite prefixes of unfolded trees, and the term generator builds
well-typed terms top-down from a signature.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from contcalc.terms import Name, Term, app
from contcalc.types import Arrow, Bot, Mu, Type, TyVar

WILD = ("*",)


def _unfold_once(t: Mu) -> Type:
    # naive substitution: fine for the oracle because test types never
    # reuse a binder name for a free variable
    def sub(u: Type) -> Type:
        if isinstance(u, TyVar):
            return t if u.name == t.var else u
        if isinstance(u, Arrow):
            return Arrow(sub(u.dom), sub(u.cod))
        if isinstance(u, Mu):
            return u if u.var == t.var else Mu(u.var, sub(u.body))
        return u

    return sub(t.body)


def prefix_tree(t: Type, budget: int):
    """The unfolded tree of ``t`` cut wherever a path would need more than
    ``budget`` mu-unfoldings; cut points become wildcards."""
    if isinstance(t, Mu):
        if budget == 0:
            return WILD
        return prefix_tree(_unfold_once(t), budget - 1)
    if isinstance(t, Arrow):
        return ("->", prefix_tree(t.dom, budget), prefix_tree(t.cod, budget))
    if isinstance(t, TyVar):
        return ("var", t.name)
    if isinstance(t, Bot):
        return ("bot",)
    raise TypeError(t)


def trees_match(a, b) -> bool:
    if a is WILD or b is WILD:
        return True
    if a[0] != b[0]:
        return False
    if a[0] == "->":
        return trees_match(a[1], b[1]) and trees_match(a[2], b[2])
    return a == b


def oracle_type_eq(a: Type, b: Type, depth: int = 4) -> bool:
    return trees_match(prefix_tree(a, depth), prefix_tree(b, depth))


# -- random types -------------------------------------------------------------


def sample_type(rng: random.Random, base: list, depth: int) -> Type:
    """A random arrow combination over ``base``."""
    if depth == 0 or rng.random() < 0.35:
        return rng.choice(base)
    return Arrow(sample_type(rng, base, depth - 1), sample_type(rng, base, depth - 1))


def unfold_variant(rng: random.Random, t: Type, budget: int = 3) -> Type:
    """An equal type obtained by unfolding some mu nodes."""
    from contcalc.types import unfold_mu

    if isinstance(t, Mu) and budget and rng.random() < 0.5:
        return unfold_variant(rng, unfold_mu(t), budget - 1)
    if isinstance(t, Arrow):
        return Arrow(unfold_variant(rng, t.dom, budget), unfold_variant(rng, t.cod, budget))
    return t


def _stdlib_base() -> list:
    from contcalc.datatypes import compile_type
    from contcalc.stdlib import DECLS
    from contcalc.types import BOT, unfold_mu

    types = [compile_type(d) for d in DECLS]
    return [BOT, TyVar("A"), *types, *(unfold_mu(t) for t in types if isinstance(t, Mu))]


# the stdlib types, their one-step unfoldings, _|_ and an opaque atom
BASE = _stdlib_base()


# -- random well-typed terms ---------------------------------------------------


class SignatureIndex:
    """For each target type, the (name, argument types) pairs whose type
    ends in that target after peeling off the arguments."""

    def __init__(self, sig: dict, max_args: int = 7):
        from contcalc.typechecker import peel

        self.sig = dict(sig)
        self._peeled = []
        for n, ty in self.sig.items():
            for k in range(max_args + 1):
                split = peel(ty, k)
                if split is None:
                    break
                self._peeled.append((n, split[0], split[1]))
        self._memo: dict = {}

    def options(self, ty: Type) -> list:
        from contcalc.types import type_eq

        if ty not in self._memo:
            self._memo[ty] = [(n, doms) for n, doms, rest in self._peeled if type_eq(rest, ty)]
        return self._memo[ty]


@dataclass
class TermGen:
    """Type-directed generator of closed terms over a signature.

    When no declared name fits (or the depth budget is spent) a fresh
    constant ``K#i`` of the required type is minted and recorded in ``extra``.
    """

    index: SignatureIndex
    rng: random.Random
    extra: dict = field(default_factory=dict)

    def constant(self, ty: Type) -> Name:
        name = Name(f"K#{len(self.extra)}")
        self.extra[name] = ty
        return name

    def term(self, ty: Type, depth: int) -> Term:
        if depth <= 0 or self.rng.random() < 0.1:
            return self.constant(ty)
        options = self.index.options(ty)
        if not options:
            return self.constant(ty)
        n, doms = self.rng.choice(options)
        return app(n, *(self.term(d, depth - 1) for d in doms))

    def signature(self) -> dict:
        return {**self.index.sig, **self.extra}
