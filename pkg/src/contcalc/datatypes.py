"""Compile first-order data declarations into CC.

A declaration yields a recursive type (Scott encoding), one destructor rule
per constructor, and on request call-by-name and call-by-value iterators
into a target type.

Generated names are plain identifiers::

    ItCBN_D_B          ItCBN_D_B_Ci          (call-by-name)
    ItCBV_D_B          ItCBV_D_B_Ci_j        (call-by-value, stage j)

Type and constructor names never contain ``_``, so the scheme is injective.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

from .errors import ConstructorMismatch, DecodeFailure, NameClash, ShapeError
from .evaluator import FuelExhausted, evaluate
from .terms import NAME_RE, Name, Program, Rule, Term, Var, app, fresh_names, names_in, spine
from .types import (
    BOT,
    Mu,
    Type,
    TyVar,
    arrows,
    fresh_tyvar,
    free_tyvars,
    neg,
    subst_tyvar,
    validate_mu_shape,
)


class _Rec:
    """Marker for a constructor argument of the type being declared."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "REC"

    def __reduce__(self):
        return (_Rec, ())


REC = _Rec()
ArgType = Union[_Rec, Type]


@dataclass(frozen=True)
class Constructor:
    name: str
    args: tuple[ArgType, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if not NAME_RE.match(self.name) or "_" in self.name:
            raise ValueError(f"bad constructor name {self.name!r}")

    @property
    def arity(self) -> int:
        return len(self.args)


@dataclass(frozen=True)
class DataTypeDecl:
    name: str
    constructors: tuple[Constructor, ...]
    params: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "constructors", tuple(self.constructors))
        object.__setattr__(self, "params", tuple(self.params))
        if not NAME_RE.match(self.name) or "_" in self.name:
            raise ValueError(f"bad data type name {self.name!r}")
        if not self.constructors:
            raise ValueError(f"data type {self.name} has no constructors")
        names = [c.name for c in self.constructors]
        if len(set(names)) != len(names):
            raise ValueError(f"data type {self.name} repeats a constructor name")

    def constructor(self, name: str) -> tuple[int, Constructor]:
        for i, c in enumerate(self.constructors):
            if c.name == name:
                return i, c
        raise ConstructorMismatch(f"{name} is not a constructor of {self.name}")

    @property
    def is_recursive(self) -> bool:
        return any(a is REC for c in self.constructors for a in c.args)


@dataclass(frozen=True)
class GeneratedBundle:
    cc_type: Type
    sig_entries: dict[Name, Type]
    rules: tuple[Rule, ...]
    provenance: dict[Name, str] = field(default_factory=dict)


@dataclass(frozen=True)
class Value:
    """An abstract data value: a constructor applied to children.

    Children in recursive slots are Values, the others are CC terms.
    """

    constructor: str
    args: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


# an iterator target is a declared data type or the name of an opaque type
Target = Union[DataTypeDecl, str]


def _ext_types(d: DataTypeDecl):
    return [a for c in d.constructors for a in c.args if a is not REC]


def compile_type(d: DataTypeDecl) -> Type:
    """``mu X. (D1[X/D] -> _|_) -> ... -> (Dn[X/D] -> _|_) -> _|_``.

    The binder is dropped when no constructor is recursive.
    """
    for a in _ext_types(d):
        if d.name in free_tyvars(a):
            raise ShapeError(f"argument type of {d.name} mentions {d.name} in a non-trivial position", a)
    taken = {d.name}
    for a in _ext_types(d):
        taken |= free_tyvars(a)
    x = fresh_tyvar("T", taken)
    slots = [
        arrows(*(TyVar(x) if a is REC else a for a in c.args), BOT) for c in d.constructors
    ]
    body = arrows(*slots, BOT)
    ty = Mu(x, body) if d.is_recursive else body
    validate_mu_shape(ty)
    return ty


def target_type(b: Target) -> Type:
    return compile_type(b) if isinstance(b, DataTypeDecl) else TyVar(b)


def target_label(b: Target) -> str:
    return b.name if isinstance(b, DataTypeDecl) else b


def instantiate(d: DataTypeDecl, args: Sequence[tuple[str, Type]]) -> DataTypeDecl:
    """Monomorphic copy of a parametric declaration.

    ``args`` pairs a label with a type for each parameter; the label becomes
    a ``{...}`` suffix on the type and constructor names.
    """
    if len(args) != len(d.params):
        raise ValueError(f"{d.name} expects {len(d.params)} type argument(s), got {len(args)}")
    suffix = "".join("{" + label + "}" for label, _ in args)

    def inst(a: ArgType) -> ArgType:
        if a is REC:
            return a
        for p, (_, ty) in zip(d.params, args):
            a = subst_tyvar(a, p, ty)
        return a

    return DataTypeDecl(
        d.name + suffix,
        [Constructor(c.name + suffix, [inst(a) for a in c.args]) for c in d.constructors],
    )


def _slot_types(c: Constructor, rec: Type) -> list[Type]:
    return [rec if a is REC else a for a in c.args]


def gen_constructors(d: DataTypeDecl) -> GeneratedBundle:
    ty = compile_type(d)
    n = len(d.constructors)
    cs = [Var(f"c{i}") for i in range(1, n + 1)]
    sig, rules, prov = {}, [], {}
    for i, c in enumerate(d.constructors):
        xs = [Var("x")] if c.arity == 1 else [Var(f"x{j}") for j in range(1, c.arity + 1)]
        name = Name(c.name)
        sig[name] = arrows(*_slot_types(c, ty), ty)
        rules.append(Rule(name, (*xs, *cs), app(cs[i], *xs)))
        prov[name] = "constructor"
    return GeneratedBundle(ty, sig, tuple(rules), prov)


def iterator_name(style: str, d: DataTypeDecl, b: Target, ctor: str | None = None,
                  stage: int | None = None) -> Name:
    parts = [f"It{style.upper()}", d.name, target_label(b)]
    if ctor is not None:
        parts.append(ctor)
    if stage is not None:
        parts.append(str(stage))
    return Name("_".join(parts))


def gen_iter_cbn(dD: DataTypeDecl, dB: DataTypeDecl) -> GeneratedBundle:
    if not isinstance(dB, DataTypeDecl):
        raise TypeError("a call-by-name iterator needs a data type as target")
    d_ty, b_ty = compile_type(dD), compile_type(dB)
    n, m = len(dD.constructors), len(dB.constructors)
    fs = [Var(f"f{i}") for i in range(1, n + 1)]
    cs = [Var(f"c{j}") for j in range(1, m + 1)]
    x = Var("x")

    f_types = [arrows(*_slot_types(c, b_ty), b_ty) for c in dD.constructors]
    c_types = [arrows(*_slot_types(c, b_ty), BOT) for c in dB.constructors]

    it = iterator_name("cbn", dD, dB)
    subs = [iterator_name("cbn", dD, dB, c.name) for c in dD.constructors]
    sig = {it: arrows(*f_types, d_ty, *c_types, BOT)}
    rules = [Rule(it, (*fs, x, *cs), app(x, *(app(s, *fs, *cs) for s in subs)))]
    for c, sub, f in zip(dD.constructors, subs, fs):
        xs = [Var(f"x{j}") for j in range(1, c.arity + 1)]
        sig[sub] = arrows(*f_types, *c_types, *_slot_types(c, d_ty), BOT)
        passed = [app(it, *fs, xv) if a is REC else xv for a, xv in zip(c.args, xs)]
        rules.append(Rule(sub, (*fs, *cs, *xs), app(f, *passed, *cs)))
    return GeneratedBundle(d_ty, sig, tuple(rules), {k: "cbn-iter" for k in sig})


def gen_iter_cbv(dD: DataTypeDecl, b: Target) -> GeneratedBundle:
    d_ty, b_ty = compile_type(dD), target_type(b)
    n = len(dD.constructors)
    fs = [Var(f"f{i}") for i in range(1, n + 1)]
    c, x = Var("c"), Var("x")

    f_types = [arrows(*_slot_types(k, b_ty), neg(neg(b_ty))) for k in dD.constructors]
    it = iterator_name("cbv", dD, b)
    sig = {it: arrows(*f_types, neg(b_ty), d_ty, BOT)}
    firsts = [iterator_name("cbv", dD, b, k.name, 1) for k in dD.constructors]
    rules = [Rule(it, (*fs, c, x), app(x, *(app(s, *fs, c) for s in firsts)))]

    for k, f in zip(dD.constructors, fs):
        a = k.arity
        xs = [Var(f"x{j}") for j in range(1, a + 1)]
        rs = [Var(f"r{j}") for j in range(1, a + 1)]
        d_slots, b_slots = _slot_types(k, d_ty), _slot_types(k, b_ty)
        stages = [iterator_name("cbv", dD, b, k.name, j) for j in range(1, a + 2)]
        for j in range(1, a + 2):
            sig[stages[j - 1]] = arrows(*f_types, neg(b_ty), *d_slots[j - 1:], *b_slots[: j - 1], BOT)
        for j in range(1, a + 1):
            params = (*fs, c, *xs[j - 1:], *rs[: j - 1])
            nxt = app(stages[j], *fs, c, *xs[j:], *rs[: j - 1])
            xj = xs[j - 1]
            body = app(it, *fs, nxt, xj) if k.args[j - 1] is REC else app(nxt, xj)
            rules.append(Rule(stages[j - 1], params, body))
        rules.append(Rule(stages[a], (*fs, c, *rs), app(f, *rs, c)))
    return GeneratedBundle(d_ty, sig, tuple(rules), {k: "cbv-iter" for k in sig})


def gen_iterator(style: str, dD: DataTypeDecl, b: Target) -> GeneratedBundle:
    if style == "cbn":
        return gen_iter_cbn(dD, b)
    if style == "cbv":
        return gen_iter_cbv(dD, b)
    raise ValueError(f"unknown iterator style {style!r}")


def encode(d: DataTypeDecl, v: Value) -> Term:
    _, c = d.constructor(v.constructor)
    if len(v.args) != c.arity:
        raise ConstructorMismatch(
            f"{c.name} takes {c.arity} argument(s), got {len(v.args)}"
        )
    children = []
    for slot, a in zip(c.args, v.args):
        if slot is REC:
            if not isinstance(a, Value):
                raise ConstructorMismatch(f"recursive argument of {c.name} must be a Value")
            children.append(encode(d, a))
        else:
            if isinstance(a, Value):
                raise ConstructorMismatch(f"non-recursive argument of {c.name} must be a term")
            children.append(a)
    return app(Name(c.name), *children)


def decode(d: DataTypeDecl, p: Program, t: Term, fuel: int) -> Value:
    """Observe ``t`` by feeding it one fresh continuation per constructor."""
    cs = fresh_names(len(d.constructors), p.names() | names_in(t))
    out = evaluate(p, app(t, *cs), fuel)
    if isinstance(out, FuelExhausted):
        raise DecodeFailure("FuelExhausted", t)
    h, args = spine(out.nf)
    if h not in cs:
        raise DecodeFailure("NotAValue", t)
    c = d.constructors[cs.index(h)]
    if len(args) != c.arity:
        raise DecodeFailure("NotAValue", t)
    return Value(
        c.name,
        [decode(d, p, a, fuel) if slot is REC else a for slot, a in zip(c.args, args)],
    )


def lambda_lift(params: Sequence[Var], body: Term, ambient: Program,
                avoid: Sequence[Name] = ()) -> tuple[Name, Rule]:
    """Name an anonymous rule: returns ``Lam#k`` with ``Lam#k.params -> body``."""
    taken = ambient.names() | set(avoid) | names_in(body)
    name = fresh_names(1, taken, stem="Lam")[0]
    return name, Rule(name, tuple(params), body)


def check_fresh(bundle: GeneratedBundle, taken) -> None:
    clash = [n for n in bundle.sig_entries if n in taken]
    if clash:
        raise NameClash("already defined: " + ", ".join(map(str, clash)))
