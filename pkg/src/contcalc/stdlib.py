"""The prelude: standard data types, arithmetic, storage operators and the
combinators that move between call-by-name and call-by-value.

``build_prelude`` assembles it in code; ``load_prelude`` parses the shipped
``prelude.cc``. Both must give the same workspace.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .datatypes import REC, Constructor, DataTypeDecl, Value, compile_type, decode, encode
from .errors import DecodeFailure
from .terms import Name, Rule, Term, Var, app, fresh_names, names_in
from .typechecker import TypeCheckError, check_rule, infer
from .types import BOT, Type, arrows, neg, type_eq
from .workspace import Workspace

Prelude = Workspace

UNIT = DataTypeDecl("Unit", [Constructor("U")])
BOOL = DataTypeDecl("Bool", [Constructor("True"), Constructor("False")])
NAT = DataTypeDecl("Nat", [Constructor("Zero"), Constructor("Succ", [REC])])

NAT_T = compile_type(NAT)

LIST = DataTypeDecl("List", [Constructor("Nil"), Constructor("Cons", [NAT_T, REC])])
TREE = DataTypeDecl("Tree", [Constructor("Leaf"), Constructor("Join", [NAT_T, REC, REC])])

DECLS = (UNIT, BOOL, NAT, LIST, TREE)

LIST_T = compile_type(LIST)
NN_NAT = neg(neg(NAT_T))

ZERO, SUCC = Name("Zero"), Name("Succ")


def _v(*names: str) -> list[Var]:
    return [Var(n) for n in names]


def _rule(head: str, params: str, body: Term) -> Rule:
    return Rule(Name(head), tuple(_v(*params.split())), body)


def _n(text: str) -> Name:
    return Name(text)


def _prelude_definitions() -> list[tuple[Rule, Type]]:
    n, m, c, c1, c2, r, f, z, s, x = _v("n", "m", "c", "c1", "c2", "r", "f", "z", "s", "x")
    n_, m_ = Var("n'"), Var("m'")
    nat, nn = NAT_T, NN_NAT
    return [
        (_rule("AddCBV", "n m c", app(n, app(c, m), app(_n("AddCBV'"), m, c))),
         arrows(nat, nat, nn)),
        (_rule("AddCBV'", "m c n'", app(_n("AddCBV"), n_, app(SUCC, m), c)),
         arrows(nat, neg(nat), nat, BOT)),
        (_rule("AddCBN", "n m c1 c2", app(n, app(m, c1, c2), app(_n("AddCBN'"), m, c2))),
         arrows(nat, nat, nat)),
        (_rule("AddCBN'", "m c2 n'", app(c2, app(_n("AddCBN"), n_, m))),
         arrows(nat, neg(nat), nat, BOT)),
        (_rule("Id", "x", x), arrows(BOT, BOT)),
        (_rule("StoreNat", "n r", app(n, app(r, ZERO), app(_n("StoreNatA"), r))),
         arrows(nat, nn)),
        (_rule("StoreNatA", "r m", app(_n("StoreNat"), m, app(_n("StoreNatB"), r))),
         arrows(neg(nat), neg(nat))),
        (_rule("StoreNatB", "r m'", app(r, app(SUCC, m_))), arrows(neg(nat), neg(nat))),
        (_rule("UnstoreNat", "f z s", app(f, app(_n("UseNat"), z, s))), arrows(nn, nat)),
        (_rule("UseNat", "z s n", app(n, z, s)), arrows(BOT, neg(nat), neg(nat))),
        (_rule("F1", "x c", app(c, x)), arrows(nat, nn)),
        (_rule("F2", "x c", app(c, app(SUCC, x))), arrows(nat, nn)),
        (_rule("AddCBVIt", "m n c",
               app(_n("ItCBV_Nat_Nat"), app(_n("F1"), m), _n("F2"), c, n)),
         arrows(nat, nat, nn)),
        (_rule("LengthCBN", "x c1 c2",
               app(_n("ItCBN_List_Nat"), _n("LengthCBN^1"), _n("LengthCBN^2"), x, c1, c2)),
         arrows(LIST_T, nat)),
        (_rule("LengthCBN^1", "c1 c2", app(ZERO, c1, c2)), nat),
        (_rule("LengthCBN^2", "x n c1 c2", app(SUCC, n, c1, c2)), arrows(nat, nat, nat)),
        (_rule("LengthCBV", "x c",
               app(_n("ItCBV_List_Nat"), _n("LengthCBV^1"), _n("LengthCBV^2"), c, x)),
         arrows(LIST_T, nn)),
        (_rule("LengthCBV^1", "c", app(c, ZERO)), nn),
        (_rule("LengthCBV^2", "x n c", app(c, app(SUCC, n))), arrows(nat, nat, nn)),
    ]


PRELUDE_ITERATORS = (
    ("cbn", "Nat", "Nat"),
    ("cbv", "Nat", "Nat"),
    ("cbn", "List", "Nat"),
    ("cbv", "List", "Nat"),
)


def build_prelude() -> Prelude:
    """The prelude assembled directly from Python values."""
    ws = Workspace()
    for d in DECLS:
        ws = ws.with_data(d)
    for key in PRELUDE_ITERATORS:
        ws = ws.with_iterator(*key)
    for rule, ty in _prelude_definitions():
        ws = ws.with_definition(rule, ty)
    return ws


def prelude_source() -> str:
    return resources.files("contcalc").joinpath("data/prelude.cc").read_text(encoding="utf-8")


@lru_cache(maxsize=1)
def load_prelude() -> Prelude:
    """The prelude parsed from the shipped source file."""
    from .loader import load_text

    return load_text(prelude_source(), "<prelude>", use_prelude=False)


# -- numerals --------------------------------------------------------------


def numeral(n: int) -> Term:
    """``Succ^n.Zero``."""
    t: Term = ZERO
    for _ in range(n):
        t = app(SUCC, t)
    return t


def nat_value(n: int) -> Value:
    v = Value("Zero")
    for _ in range(n):
        v = Value("Succ", [v])
    return v


def value_to_int(v: Value) -> int:
    k = 0
    while v.constructor == "Succ":
        v = v.args[0]
        k += 1
    return k


def decode_nat(ws: Workspace, t: Term, fuel: int = 10_000) -> int:
    return value_to_int(decode(ws.decls["Nat"], ws.program, t, fuel))


def list_term(items: list[Term]) -> Term:
    """Encoded prelude list (``Cons.t1.(Cons.t2.Nil)``)."""
    v = Value("Nil")
    for t in reversed(items):
        v = Value("Cons", [t, v])
    return encode(LIST, v)


# -- bridges between call-by-name and call-by-value ------------------------


def _install(ws: Workspace, preferred: str, stem: str, params: list[Var], body: Term,
             ty: Type) -> tuple[Workspace, Name]:
    """Add ``name.params -> body : ty``, reusing an identical definition."""
    taken = ws.all_names() | names_in(body)
    candidates = [Name(preferred)] if preferred else []
    for name in candidates + fresh_names(4, taken, stem=stem):
        rule = Rule(name, tuple(params), body)
        if ws.program.get(name) == rule and ws.signature.get(name) == ty:
            return ws, name
        if name in taken:
            continue
        sig = {**ws.signature, name: ty}
        check_rule(sig, ws.program, rule)
        return ws.with_definition(rule, ty, origin="bridge"), name
    raise AssertionError("unreachable: fresh_names always yields an unused name")


def _require(ws: Workspace, t: Term, ty: Type, what: str) -> None:
    got = infer(ws.signature, {}, t)
    if not type_eq(got, ty):
        raise TypeCheckError(
            "ArgMismatch",
            f"{what} has type {ws.show_type(got)}, expected {ws.show_type(ty)}",
            term=t,
        )


def hat_value(ws: Workspace, f1: Term) -> tuple[Workspace, Name]:
    """``Hat.c -> c.f1`` of type ~~Nat, for ``f1 : Nat``."""
    _require(ws, f1, NAT_T, str(f1))
    c = Var("c")
    preferred = f"Hat{f1}" if isinstance(f1, Name) else ""
    return _install(ws, preferred, "HatV", [c], app(c, f1), NN_NAT)


def hat_fun(ws: Workspace, f2: Term) -> tuple[Workspace, Name]:
    """``Hat.n.c -> c.(f2.n)`` of type Nat -> ~~Nat, for ``f2 : Nat -> Nat``."""
    _require(ws, f2, arrows(NAT_T, NAT_T), str(f2))
    n, c = Var("n"), Var("c")
    preferred = f"Hat{f2}" if isinstance(f2, Name) else ""
    return _install(ws, preferred, "HatF", [n, c], app(c, app(f2, n)), arrows(NAT_T, NN_NAT))


def hat_conts(ws: Workspace, c1: Term, c2: Term) -> tuple[Workspace, Name]:
    """``HatC.n -> n.c1.c2`` of type ~Nat, for ``c1 : _|_`` and ``c2 : ~Nat``."""
    _require(ws, c1, BOT, str(c1))
    _require(ws, c2, neg(NAT_T), str(c2))
    n = Var("n")
    return _install(ws, "HatC", "HatC", [n], app(n, c1, c2), neg(NAT_T))


__all__ = [
    "BOOL",
    "DECLS",
    "DecodeFailure",
    "LIST",
    "LIST_T",
    "NAT",
    "NAT_T",
    "NN_NAT",
    "PRELUDE_ITERATORS",
    "Prelude",
    "TREE",
    "UNIT",
    "build_prelude",
    "decode_nat",
    "hat_conts",
    "hat_fun",
    "hat_value",
    "list_term",
    "load_prelude",
    "nat_value",
    "numeral",
    "prelude_source",
    "value_to_int",
]
