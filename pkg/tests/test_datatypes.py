from __future__ import annotations

import functools
import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from contcalc.datatypes import (
    REC,
    Constructor,
    DataTypeDecl,
    Value,
    check_fresh,
    compile_type,
    decode,
    encode,
    gen_constructors,
    gen_iter_cbn,
    gen_iter_cbv,
    instantiate,
    iterator_name,
    lambda_lift,
)
from contcalc.errors import ConstructorMismatch, DecodeFailure, NameClash, ShapeError
from contcalc.evaluator import Reduced, Terminated, evaluate, step
from contcalc.stdlib import (
    BOOL, DECLS, LIST, NAT, NAT_T, TREE, UNIT, build_prelude, decode_nat, numeral,
)
from contcalc.syntax import parse_rule, parse_term, parse_type
from contcalc.terms import Name, Program, Var, app, fresh_names
from contcalc.typechecker import check_program
from contcalc.types import TyVar, neg, show_type, type_eq
from contcalc.workspace import Workspace

T = parse_term


def nat_values():
    return st.integers(0, 12).map(_nat)


def _nat(n: int) -> Value:
    v = Value("Zero")
    for _ in range(n):
        v = Value("Succ", [v])
    return v


def list_values():
    return st.lists(st.integers(0, 5).map(numeral), max_size=8).map(_list)


def _list(items) -> Value:
    v = Value("Nil")
    for t in reversed(items):
        v = Value("Cons", [t, v])
    return v


def tree_values():
    leaf = st.just(Value("Leaf"))
    return st.recursive(
        leaf,
        lambda inner: st.builds(
            lambda x, l, r: Value("Join", [x, l, r]), st.integers(0, 3).map(numeral), inner, inner
        ),
        max_leaves=10,
    )


VALUES = {"Nat": nat_values(), "List": list_values(), "Tree": tree_values()}
DECL = {d.name: d for d in DECLS}


@functools.lru_cache(maxsize=None)
def _ws(*extra_rules: tuple[str, str]) -> Workspace:
    """The prelude plus ``extra_rules``, with every iterator they mention."""
    ws = build_prelude()
    for rule, ty in extra_rules:
        ws = ws.with_definition(parse_rule(rule), ws_type(ws, ty))
    for style, d, b in itertools.product(("cbn", "cbv"), DECLS, DECLS):
        ws = ws.with_iterator(style, d.name, b.name)
    return ws


def ws_type(ws: Workspace, text: str):
    from contcalc.types import subst_tyvar

    ty = parse_type(text)
    for name, d in ws.decls.items():
        ty = subst_tyvar(ty, name, compile_type(d))
    return ty


class TestCompileType:
    def test_nat(self):
        assert show_type(compile_type(NAT)) == "mu T . _|_ -> (T -> _|_) -> _|_"

    def test_bool_is_not_recursive(self):
        assert show_type(compile_type(BOOL)) == "_|_ -> _|_ -> _|_"

    def test_unit(self):
        assert show_type(compile_type(UNIT)) == "_|_ -> _|_"

    def test_list(self):
        expected = parse_type("mu T . _|_ -> (Nat -> T -> _|_) -> _|_")
        assert type_eq(compile_type(LIST), _subst_nat(expected))

    def test_binder_avoids_argument_tyvars(self):
        d = DataTypeDecl("Box", [Constructor("Box", [TyVar("T")]), Constructor("More", [REC])])
        ty = compile_type(d)
        assert ty.var != "T"

    def test_argument_mentioning_self_rejected(self):
        d = DataTypeDecl("Bad", [Constructor("Mk", [neg(TyVar("Bad"))])])
        with pytest.raises(ShapeError):
            compile_type(d)

    def test_constructor_names_do_not_matter(self):
        renamed = DataTypeDecl("N", [Constructor("Z"), Constructor("S", [REC])])
        assert type_eq(compile_type(renamed), NAT_T)


def _subst_nat(ty):
    from contcalc.types import subst_tyvar

    return subst_tyvar(ty, "Nat", NAT_T)


class TestConstructors:
    def test_nat_rules(self):
        b = gen_constructors(NAT)
        assert [str(r) for r in b.rules] == ["Zero.c1.c2 -> c1", "Succ.x.c1.c2 -> c2.x"]
        assert type_eq(b.sig_entries[Name("Succ")], parse_type(
            "(mu T . _|_ -> (T -> _|_) -> _|_) -> mu T . _|_ -> (T -> _|_) -> _|_"))

    def test_list_rules(self):
        b = gen_constructors(LIST)
        assert [str(r) for r in b.rules] == ["Nil.c1.c2 -> c1", "Cons.x1.x2.c1.c2 -> c2.x1.x2"]

    def test_tree_rules(self):
        b = gen_constructors(TREE)
        assert str(b.rules[1]) == "Join.x1.x2.x3.c1.c2 -> c2.x1.x2.x3"

    @pytest.mark.parametrize("d", DECLS, ids=lambda d: d.name)
    def test_well_typed(self, d):
        b = gen_constructors(d)
        assert check_program(b.sig_entries, Program(b.rules)) == []

    @pytest.mark.parametrize("d", DECLS, ids=lambda d: d.name)
    def test_destructor_fires_in_one_step(self, d):
        b = gen_constructors(d)
        p = Program(b.rules)
        cs = fresh_names(len(d.constructors), set())
        for i, c in enumerate(d.constructors):
            payload = [Name(f"P{j}") for j in range(c.arity)]
            t = app(Name(c.name), *payload, *cs)
            assert step(p, t) == Reduced(app(cs[i], *payload))


class TestEncodeDecode:
    @pytest.mark.parametrize("name", ["Nat", "List", "Tree"])
    def test_round_trip(self, name, prelude):
        d = DECL[name]

        @given(VALUES[name])
        def check(v):
            assert decode(d, prelude.program, encode(d, v), 10_000) == v

        check()

    def test_numeral_encoding(self):
        assert encode(NAT, _nat(2)) == T("Succ.(Succ.Zero)")

    def test_list_encoding(self):
        assert encode(LIST, _list([numeral(1)])) == T("Cons.(Succ.Zero).Nil")

    def test_wrong_arity(self):
        with pytest.raises(ConstructorMismatch):
            encode(NAT, Value("Succ"))

    def test_unknown_constructor(self):
        with pytest.raises(ConstructorMismatch):
            encode(NAT, Value("Nil"))

    def test_recursive_slot_needs_value(self):
        with pytest.raises(ConstructorMismatch):
            encode(NAT, Value("Succ", [Name("Zero")]))

    def test_payload_slot_needs_term(self):
        with pytest.raises(ConstructorMismatch):
            encode(LIST, Value("Cons", [_nat(0), Value("Nil")]))

    def test_decode_lazy_value(self, prelude):
        # AddCBN.2.1 is a numeral only observationally
        assert decode(NAT, prelude.program, T("AddCBN.(Succ.(Succ.Zero)).(Succ.Zero)"), 1000) == _nat(3)

    def test_decode_not_a_value(self, prelude):
        with pytest.raises(DecodeFailure) as info:
            decode(NAT, prelude.program, Name("Opaque"), 100)
        assert info.value.reason == "NotAValue"

    def test_decode_wrong_payload_count(self, prelude):
        p = prelude.program.add_rule(parse_rule("Weird.c1.c2 -> c1.Zero"))
        with pytest.raises(DecodeFailure) as info:
            decode(NAT, p, Name("Weird"), 100)
        assert info.value.reason == "NotAValue"

    def test_decode_fuel(self, prelude):
        p = prelude.program.add_rule(parse_rule("Loop.c1.c2 -> Loop.c1.c2"))
        with pytest.raises(DecodeFailure) as info:
            decode(NAT, p, Name("Loop"), 50)
        assert info.value.reason == "FuelExhausted"


class TestIteratorNames:
    def test_examples(self):
        assert iterator_name("cbv", NAT, NAT) == Name("ItCBV_Nat_Nat")
        assert iterator_name("cbv", LIST, "B", "Cons", 3) == Name("ItCBV_List_B_Cons_3")
        assert iterator_name("cbn", LIST, NAT, "Nil") == Name("ItCBN_List_Nat_Nil")

    def test_injective_over_stdlib(self):
        seen = {}
        for style, d, b in itertools.product(("cbn", "cbv"), DECLS, DECLS):
            bundle = gen_iter_cbn(d, b) if style == "cbn" else gen_iter_cbv(d, b)
            for n in bundle.sig_entries:
                assert seen.setdefault(n, (style, d.name, b.name)) == (style, d.name, b.name)
        for c in (*gen_constructors(NAT).sig_entries, *gen_constructors(LIST).sig_entries):
            assert c not in seen

    def test_bad_type_names(self):
        with pytest.raises(ValueError):
            DataTypeDecl("My_Type", [Constructor("A")])
        with pytest.raises(ValueError):
            Constructor("A_B")
        with pytest.raises(ValueError):
            DataTypeDecl("E", [])


class TestIteratorBundles:
    @pytest.mark.parametrize(
        "d,b", list(itertools.product(DECLS, DECLS)), ids=lambda x: x.name
    )
    def test_both_styles_well_typed(self, d, b):
        for gen in (gen_iter_cbn, gen_iter_cbv):
            bundle = gen(d, b)
            sig = {**gen_constructors(d).sig_entries, **gen_constructors(b).sig_entries,
                   **bundle.sig_entries}
            assert check_program(sig, Program(bundle.rules)) == []

    @pytest.mark.parametrize("d", DECLS, ids=lambda d: d.name)
    def test_opaque_target(self, d):
        bundle = gen_iter_cbv(d, "B")
        assert check_program(bundle.sig_entries, Program(bundle.rules)) == []

    def test_cbn_rule_count(self):
        assert len(gen_iter_cbn(TREE, NAT).rules) == 3

    def test_cbv_rule_count(self):
        # one dispatch rule plus arity+1 stages per constructor
        assert len(gen_iter_cbv(TREE, "B").rules) == 1 + 1 + 4

    def test_unit_iterators(self):
        cbv = gen_iter_cbv(UNIT, "B")
        assert [str(r) for r in cbv.rules] == [
            "ItCBV_Unit_B.f1.c.x -> x.(ItCBV_Unit_B_U_1.f1.c)",
            "ItCBV_Unit_B_U_1.f1.c -> f1.c",
        ]
        cbn = gen_iter_cbn(UNIT, BOOL)
        assert str(cbn.rules[1]) == "ItCBN_Unit_Bool_U.f1.c1.c2 -> f1.c1.c2"

    def test_check_fresh(self):
        bundle = gen_iter_cbv(NAT, NAT)
        check_fresh(bundle, {Name("Zero")})
        with pytest.raises(NameClash):
            check_fresh(bundle, {Name("ItCBV_Nat_Nat_Succ_2")})


class TestIteratorSemantics:
    @given(st.lists(st.integers(0, 4), max_size=6))
    def test_cbv_sum(self, xs):
        ws = _ws(("rule Sum^1.c -> c.Zero", "~~Nat"),
                 ("rule Sum^2.x.r.c -> AddCBV.x.r.c", "Nat -> Nat -> ~~Nat"))
        t = app(Name("ItCBV_List_Nat"), Name("Sum^1"), Name("Sum^2"), Name("C"),
                encode(LIST, _list([numeral(x) for x in xs])))
        out = evaluate(ws.program, t, 10_000)
        assert out == Terminated(app(Name("C"), numeral(sum(xs))), out.cls, out.steps)

    @given(tree_values())
    def test_cbv_tree_size(self, v):
        ws = _ws(("rule Size^1.c -> c.Zero", "~~Nat"),
                 ("rule Size^2.x.l.r.c -> AddCBV.l.(Succ.r).c", "Nat -> Nat -> Nat -> ~~Nat"))
        t = app(Name("ItCBV_Tree_Nat"), Name("Size^1"), Name("Size^2"), Name("C"), encode(TREE, v))
        out = evaluate(ws.program, t, 100_000)
        assert isinstance(out, Terminated)
        assert out.nf == app(Name("C"), numeral(_size(v)))

    @given(tree_values())
    def test_cbn_tree_size(self, v):
        ws = _ws(("rule SizeN^2.x.l.r.c1.c2 -> AddCBN.l.(Succ.r).c1.c2", "Nat -> Nat -> Nat -> Nat"))
        t = app(Name("ItCBN_Tree_Nat"), Name("Zero"), Name("SizeN^2"), encode(TREE, v))
        assert decode_nat(ws, t, 100_000) == _size(v)

    @given(st.integers(0, 15))
    def test_cbn_identity_on_nat(self, n):
        ws = _ws()
        t = app(Name("ItCBN_Nat_Nat"), Name("Zero"), Name("Succ"), numeral(n))
        assert decode_nat(ws, t) == n

    def test_cbn_is_lazy(self):
        # one constructor is exposed without touching the tail
        ws = _ws()
        t = app(Name("ItCBN_Nat_Nat"), Name("Zero"), Name("Succ"), numeral(3), Name("Z"), Name("S"))
        out = evaluate(ws.program, t, 100)
        assert out.nf == app(Name("S"), app(Name("ItCBN_Nat_Nat"), Name("Zero"), Name("Succ"), numeral(2)))

    def test_cbv_bool_negation(self):
        ws = _ws(("rule NotT.c -> c.False", "~~Bool"), ("rule NotF.c -> c.True", "~~Bool"))
        for arg, res in (("True", "False"), ("False", "True")):
            out = evaluate(ws.program, T(f"ItCBV_Bool_Bool.NotT.NotF.C.{arg}"), 100)
            assert out.nf == T(f"C.{res}")
        assert ws.check() == []


def _size(v: Value) -> int:
    if v.constructor == "Leaf":
        return 0
    return 1 + _size(v.args[1]) + _size(v.args[2])


class TestInstantiate:
    def test_list_of_nat(self):
        generic = DataTypeDecl("List", [Constructor("Nil"), Constructor("Cons", [TyVar("A"), REC])],
                               ["A"])
        inst = instantiate(generic, [("Nat", NAT_T)])
        assert inst.name == "List{Nat}"
        assert [c.name for c in inst.constructors] == ["Nil{Nat}", "Cons{Nat}"]
        assert type_eq(compile_type(inst), compile_type(LIST))

    def test_arity_checked(self):
        generic = DataTypeDecl("Pair", [Constructor("Mk", [TyVar("A"), TyVar("B")])], ["A", "B"])
        with pytest.raises(ValueError):
            instantiate(generic, [("Nat", NAT_T)])


class TestLambdaLift:
    def test_fresh_name(self, P):
        name, rule = lambda_lift([Var("x"), Var("c")], T("c.(Succ.x)"), P)
        assert name == Name("Lam#0")
        assert str(rule) == "Lam#0.x.c -> c.(Succ.x)"

    def test_avoids_existing(self, P):
        p = P.add_rule(parse_rule("Lam#0.c -> c"))
        name, _ = lambda_lift([Var("c")], T("c.Lam#1"), p, avoid=[Name("Lam#2")])
        assert name == Name("Lam#3")

    def test_lifted_rule_behaves_like_the_body(self, P):
        name, rule = lambda_lift([Var("x"), Var("c")], T("c.(Succ.x)"), P)
        p = P.add_rule(rule)
        assert evaluate(p, app(name, Name("Zero"), Name("K")), 10).nf == T("K.(Succ.Zero)")
