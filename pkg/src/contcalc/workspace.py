"""An elaborated environment: declared data types, a signature and a program.

Workspaces are immutable; every ``with_*`` method returns a new one.
Iterators are generated on demand and cached per (style, source, target).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Iterable, Mapping

from .datatypes import (
    DataTypeDecl,
    GeneratedBundle,
    compile_type,
    gen_constructors,
    gen_iterator,
)
from .errors import DuplicateDefinition, NameClash
from .terms import Name, Program, Rule, Term, names_in
from .typechecker import TypeCheckError, check_program
from .types import Type, show_type

GENERATED = ("constructor", "cbn-iter", "cbv-iter")


@dataclass(frozen=True)
class Workspace:
    decls: Mapping[str, DataTypeDecl] = field(default_factory=dict)
    signature: Mapping[Name, Type] = field(default_factory=dict)
    program: Program = field(default_factory=Program)
    provenance: Mapping[Name, str] = field(default_factory=dict)
    iterators: Mapping[tuple[str, str, str], tuple[Name, ...]] = field(default_factory=dict)

    def __post_init__(self):
        for attr in ("decls", "signature", "provenance", "iterators"):
            object.__setattr__(self, attr, MappingProxyType(dict(getattr(self, attr))))

    # -- queries ---------------------------------------------------------

    def type_of(self, name: str) -> Type:
        return compile_type(self.decls[name])

    def aliases(self) -> dict[Type, str]:
        """Compiled data types mapped to their names, for printing."""
        from .types import ref_text

        return {compile_type(d): ref_text(d.name) for d in self.decls.values()}

    def show_type(self, ty: Type) -> str:
        return show_type(ty, self.aliases())

    def generated_names(self) -> set[Name]:
        return {n for n, origin in self.provenance.items() if origin in GENERATED}

    def all_names(self) -> set[Name]:
        return set(self.signature) | self.program.names()

    def check(self) -> list[TypeCheckError]:
        return check_program(self.signature, self.program)

    # -- extension -------------------------------------------------------

    def _merge(self, bundle: GeneratedBundle) -> Workspace:
        sig = dict(self.signature)
        for n, ty in bundle.sig_entries.items():
            if n in sig and sig[n] != ty:
                raise NameClash(f"{n} is already declared with another type")
            sig[n] = ty
        rules = []
        for r in bundle.rules:
            old = self.program.get(r.head)
            if old is None:
                rules.append(r)
            elif old != r:
                raise NameClash(f"{r.head} is already defined by another rule")
        prov = dict(self.provenance)
        prov.update(bundle.provenance)
        return replace(self, signature=sig, program=self.program.merge(rules), provenance=prov)

    def with_data(self, decl: DataTypeDecl) -> Workspace:
        old = self.decls.get(decl.name)
        if old is not None:
            if old == decl:
                return self
            raise NameClash(f"data type {decl.name} is already declared")
        ws = self._merge(gen_constructors(decl))
        return replace(ws, decls={**self.decls, decl.name: decl})

    def declare(self, name: Name, ty: Type, origin: str = "user") -> Workspace:
        old = self.signature.get(name)
        if old is not None:
            if old == ty:
                return self
            raise NameClash(f"{name} is already declared as {self.show_type(old)}")
        prov = dict(self.provenance)
        prov.setdefault(name, origin)
        return replace(self, signature={**self.signature, name: ty}, provenance=prov)

    def with_rule(self, rule: Rule, origin: str = "user") -> Workspace:
        old = self.program.get(rule.head)
        if old is not None:
            if old == rule:
                return self
            raise DuplicateDefinition(f"{rule.head} is already defined")
        prov = dict(self.provenance)
        prov.setdefault(rule.head, origin)
        return replace(self, program=self.program.add_rule(rule), provenance=prov)

    def with_definition(self, rule: Rule, ty: Type, origin: str = "user") -> Workspace:
        return self.declare(rule.head, ty, origin).with_rule(rule, origin)

    def with_iterator(self, style: str, data: str, target: str) -> Workspace:
        key = (style, data, target)
        if key in self.iterators:
            return self
        d = self.decls.get(data)
        if d is None:
            raise KeyError(f"unknown data type {data}")
        b = self.decls.get(target)
        if b is None:
            if style == "cbn":
                raise KeyError(f"a call-by-name iterator needs a declared target, not {target}")
            b = target
        bundle = gen_iterator(style, d, b)
        ws = self._merge(bundle)
        return replace(ws, iterators={**self.iterators, key: tuple(bundle.sig_entries)})

    def with_iterators_for(self, names: Iterable[Name]) -> Workspace:
        """Generate every iterator that ``names`` refer to but that is missing."""
        ws = self
        for n in sorted(names, key=str):
            if n in ws.program or n in ws.signature:
                continue
            req = parse_iterator_name(n)
            if req is not None and req[1] in ws.decls:
                try:
                    ws = ws.with_iterator(*req)
                except KeyError:
                    continue
        return ws

    def with_referenced_iterators(self) -> Workspace:
        return self.with_iterators_for(self.program.names())

    def for_term(self, t: Term) -> Workspace:
        return self.with_iterators_for(names_in(t))


def parse_iterator_name(n: Name) -> tuple[str, str, str] | None:
    """``ItCBV_List_Nat_Cons_2`` -> ``("cbv", "List", "Nat")``."""
    parts = n.text.split("_")
    if len(parts) < 3 or parts[0] not in ("ItCBN", "ItCBV"):
        return None
    return parts[0][2:].lower(), parts[1], parts[2]
