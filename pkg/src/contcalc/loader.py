"""Elaborate parsed source into a Workspace.

Items are processed in passes: ``use`` directives, then data declarations,
then everything else in file order. Type references are resolved here:
a declared data type stands for its compiled mu-type, ``List(Nat)``
instantiates a parametric declaration, and any other capitalised atom is an
opaque type.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .datatypes import REC, ArgType, Constructor, DataTypeDecl, compile_type, instantiate
from .errors import CCError
from .syntax import (
    DataItem,
    Diagnostic,
    IteratorItem,
    NameItem,
    ParseError,
    RuleItem,
    SourceFile,
    Span,
    UseItem,
    parse,
    parse_tref,
)
from .terms import Name
from .typechecker import TypeCheckError
from .types import Arrow, Mu, Type, TyVar, ref_text, show_type, split_instance
from .workspace import Workspace


class LoadError(CCError):
    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__("\n".join(map(str, diagnostics)))
        self.diagnostics = diagnostics


@dataclass
class Loaded:
    """A workspace together with where its pieces came from."""

    workspace: Workspace
    source: SourceFile
    file: str | None = None
    spans: dict[Name, Span] = field(default_factory=dict)
    declared_types: dict[Name, Type] = field(default_factory=dict)
    data_items: list[DataItem] = field(default_factory=list)
    generic: dict[str, DataTypeDecl] = field(default_factory=dict)

    def ensure_type(self, text: str) -> str:
        """Resolve a reference such as ``List(Nat)`` to a declared type name,
        instantiating a parametric declaration if needed. Opaque names are
        returned unchanged."""
        ref = parse_tref(text, self.file)
        base, args = split_instance(ref)
        if not args:
            return ref
        el = _Elaborator(self.file, self.workspace)
        el.generic = dict(self.generic)
        name = el.guard(lambda _: el.instance(base, args, None), None)
        self.workspace = el.ws
        return name

    def diagnostics_for(self, errors: list[TypeCheckError]) -> list[Diagnostic]:
        out = []
        for e in errors:
            span = None
            if e.location:
                _, _, what = e.location.partition(" ")
                try:
                    span = self.spans.get(Name(what))
                except ValueError:
                    span = None
            out.append(Diagnostic("error", str(e), span, self.file))
        return out

    def check(self) -> list[Diagnostic]:
        return self.diagnostics_for(self.workspace.check())


class _Elaborator:
    def __init__(self, file: str | None, ws: Workspace | None = None):
        self.file = file
        self.ws = ws or Workspace()
        self.generic: dict[str, DataTypeDecl] = {}
        self.spans: dict[Name, Span] = {}
        self.declared_types: dict[Name, Type] = {}
        self.data_items: list[DataItem] = []

    def error(self, message: str, span: Span | None):
        raise LoadError([Diagnostic("error", message, span, self.file)])

    # type resolution

    def resolve_ref(self, ref: str, span: Span | None) -> Type:
        if ref in self.ws.decls:
            return compile_type(self.ws.decls[ref])
        base, args = split_instance(ref)
        if args:
            name = self.instance(base, args, span)
            return compile_type(self.ws.decls[name])
        if ref in self.generic:
            # bare parametric name: its parameters stay opaque
            return compile_type(self.generic[ref])
        return TyVar(ref)

    def instance(self, base: str, args: list[str], span: Span | None) -> str:
        """Declare ``base{args}`` if needed and return its name."""
        d = self.generic.get(base)
        if d is None:
            self.error(f"{base} is not a parametric data type", span)
        if len(args) != len(d.params):
            self.error(f"{base} expects {len(d.params)} type argument(s), got {len(args)}", span)
        name = base + "".join("{" + a + "}" for a in args)
        if name not in self.ws.decls:
            pairs = [(a, self.resolve_ref(a, span)) for a in args]
            self.ws = self.ws.with_data(instantiate(d, pairs))
        return name

    def resolve(self, t: Type, span: Span | None, bound: frozenset = frozenset()) -> Type:
        if isinstance(t, TyVar):
            return t if t.name in bound else self.resolve_ref(t.name, span)
        if isinstance(t, Arrow):
            return Arrow(self.resolve(t.dom, span, bound), self.resolve(t.cod, span, bound))
        if isinstance(t, Mu):
            return Mu(t.var, self.resolve(t.body, span, bound | {t.var}))
        return t

    def resolve_arg(self, t: Type, item: DataItem) -> ArgType:
        self_refs = {item.name}
        if item.params:
            self_refs.add(item.name + "".join("{" + p + "}" for p in item.params))
        if isinstance(t, TyVar) and t.name in self_refs:
            return REC
        if any(r in _atoms(t) for r in self_refs):
            self.error(
                f"{item.name} may only occur as a whole constructor argument, not inside "
                f"{show_type(t)}",
                item.span,
            )
        bound = frozenset(item.params)
        return self.resolve(t, item.span, bound)

    # items

    def data(self, item: DataItem):
        ctors = [Constructor(c.name, [self.resolve_arg(a, item) for a in c.args]) for c in item.ctors]
        decl = DataTypeDecl(item.name, ctors, item.params)
        if item.params:
            self.generic[item.name] = decl
        self.ws = self.ws.with_data(decl)
        self.data_items.append(item)

    def iterator(self, item: IteratorItem):
        names = []
        for ref in (item.data, item.target):
            base, args = split_instance(ref)
            names.append(self.instance(base, args, item.span) if args else ref)
        d, b = names
        if d not in self.ws.decls:
            self.error(f"{ref_text(d)} is not a declared data type", item.span)
        if item.style == "cbn" and b not in self.ws.decls:
            self.error(f"a call-by-name iterator needs a declared target, not {ref_text(b)}",
                       item.span)
        self.ws = self.ws.with_iterator(item.style, d, b)

    def name(self, item: NameItem):
        ty = self.resolve(item.type, item.span)
        self.ws = self.ws.declare(item.name, ty)
        self.spans.setdefault(item.name, item.span)
        self.declared_types.setdefault(item.name, item.type)

    def rule(self, item: RuleItem):
        self.ws = self.ws.with_rule(item.rule)
        self.spans[item.rule.head] = item.span

    def run(self, src: SourceFile, use_prelude: bool = True):
        for item in src.items:
            if isinstance(item, UseItem):
                if use_prelude:
                    self.use_prelude()
        for item in src.items:
            if isinstance(item, DataItem):
                self.guard(self.data, item)
        for item in src.items:
            if isinstance(item, IteratorItem):
                self.guard(self.iterator, item)
            elif isinstance(item, NameItem):
                self.guard(self.name, item)
            elif isinstance(item, RuleItem):
                self.guard(self.rule, item)
        self.ws = self.ws.with_referenced_iterators()

    def guard(self, fn, item):
        span = getattr(item, "span", None)
        try:
            return fn(item)
        except LoadError:
            raise
        except (CCError, ValueError, KeyError) as e:
            msg = e.args[0] if isinstance(e, KeyError) and e.args else str(e)
            self.error(msg, span)

    def use_prelude(self):
        from .stdlib import prelude_source

        sub = _Elaborator("<prelude>", self.ws)
        sub.run(parse(prelude_source(), "<prelude>"), use_prelude=False)
        self.ws = sub.ws
        self.generic.update(sub.generic)
        self.declared_types.update(sub.declared_types)
        self.data_items.extend(sub.data_items)


def _atoms(t: Type) -> set[str]:
    if isinstance(t, TyVar):
        base, args = split_instance(t.name)
        return {t.name, base, *args}
    if isinstance(t, Arrow):
        return _atoms(t.dom) | _atoms(t.cod)
    if isinstance(t, Mu):
        return _atoms(t.body)
    return set()


def load(text: str, file: str | None = None, *, use_prelude: bool = True,
         base: Workspace | None = None) -> Loaded:
    """Parse and elaborate. Raises ParseError or LoadError with diagnostics."""
    src = parse(text, file)
    el = _Elaborator(file, base)
    el.run(src, use_prelude=use_prelude)
    return Loaded(el.ws, src, file, el.spans, el.declared_types, el.data_items, el.generic)


def load_text(text: str, file: str | None = None, *, use_prelude: bool = True) -> Workspace:
    return load(text, file, use_prelude=use_prelude).workspace


def load_file(path: str | Path) -> Loaded:
    path = Path(path)
    return load(path.read_text(encoding="utf-8"), str(path))


__all__ = ["LoadError", "Loaded", "ParseError", "load", "load_file", "load_text"]
