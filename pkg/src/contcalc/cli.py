"""Command-line driver: ``contcalc {check,run,equiv,gen,expand} FILE ...``.

Exit codes: 0 on success, 1 when a check or equivalence test fails (or the
input file does not load), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .errors import ArityMismatch, CCError
from .evaluator import FuelExhausted, evaluate, obs_equiv_test, trace
from .loader import LoadError, Loaded, load
from .syntax import Diagnostic, ParseError, parse_term, print_rule, print_term
from .terms import is_closed, names_in
from .types import ref_text, show_type

DEFAULT_FUEL = 10_000


class UsageError(Exception):
    pass


class _Report:
    """Collects what a subcommand produced and renders it as text or JSON."""

    def __init__(self, command: str, args: argparse.Namespace):
        self.command = command
        self.input = {k: v for k, v in vars(args).items() if k not in ("command", "json", "func")}
        self.lines: list[str] = []
        self.result = None
        self.steps: int | None = None
        self.diagnostics: list[Diagnostic] = []

    def emit(self, as_json: bool, out, err) -> None:
        if as_json:
            envelope = {
                "command": self.command,
                "input": self.input,
                "result": self.result,
                "steps": self.steps,
                "diagnostics": [d.to_json() for d in self.diagnostics],
            }
            out.write(json.dumps(envelope, indent=2, sort_keys=True) + "\n")
            return
        for line in self.lines:
            out.write(line + "\n")
        for d in self.diagnostics:
            err.write(str(d) + "\n")


def _load(path: str) -> Loaded:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    return load(text, path)


def _term(text: str, flag: str):
    try:
        t = parse_term(text, flag)
    except ParseError as e:
        raise UsageError(str(e.diagnostic)) from None
    if not is_closed(t):
        raise UsageError(f"{flag}: the term must be closed (no lower-case variables)")
    return t


def cmd_check(args, rep: _Report) -> int:
    loaded = _load(args.file)
    rep.diagnostics = loaded.check()
    ok = not rep.diagnostics
    rep.result = "ok" if ok else "failed"
    rep.lines.append(f"ok: {len(loaded.workspace.program)} rules" if ok else "failed")
    return 0 if ok else 1


def cmd_run(args, rep: _Report) -> int:
    loaded = _load(args.file)
    t = _term(args.term, "--term")
    ws = loaded.workspace.for_term(t)
    out = evaluate(ws.program, t, args.fuel)
    rep.steps = out.steps
    if isinstance(out, FuelExhausted):
        final, cls = out.last, "FuelExhausted"
    else:
        final, cls = out.nf, str(out.cls)
    terms = trace(ws.program, t, args.fuel) if args.trace else [final]
    rep.lines.extend(print_term(u) for u in terms)
    rep.lines.append(f"-- class: {cls}")
    rep.lines.append(f"-- steps: {out.steps}")
    rep.result = {"term": print_term(final), "class": cls}
    if args.trace:
        rep.result["trace"] = [print_term(u) for u in terms]
    return 0


def cmd_equiv(args, rep: _Report) -> int:
    loaded = _load(args.file)
    left, right = _term(args.left, "--left"), _term(args.right, "--right")
    ws = loaded.workspace.for_term(left).for_term(right)
    try:
        verdict = obs_equiv_test(ws.program, left, right, args.arity, args.fuel)
    except ArityMismatch as e:
        rep.diagnostics.append(Diagnostic("error", str(e), None, "--arity"))
        rep.result = "ArityMismatch"
        rep.lines.append("ArityMismatch")
        return 1
    text = {"Equivalent": "Equivalent", "NotEquivalent": "NotEqual", "Unknown": "Unknown"}[
        verdict.value
    ]
    rep.result = text
    rep.lines.append(text)
    return 0 if text == "Equivalent" else 1


def cmd_gen(args, rep: _Report) -> int:
    loaded = _load(args.file)
    data = loaded.ensure_type(args.data)
    target = loaded.ensure_type(args.to)
    ws = loaded.workspace
    if data not in ws.decls:
        raise UsageError(f"--data: {ref_text(data)} is not a declared data type")
    if args.style == "cbn" and target not in ws.decls:
        raise UsageError(f"--to: call-by-name needs a declared data type, not {ref_text(target)}")
    ws = ws.with_iterator(args.style, data, target)
    names = ws.iterators[(args.style, data, target)]
    rules = [ws.program[n] for n in names]
    if args.signatures:
        rep.lines.extend(f"name {n} : {ws.show_type(ws.signature[n])}" for n in names)
    rep.lines.extend(print_rule(r) for r in rules)
    rep.result = [str(r) for r in rules]
    return 0


def cmd_expand(args, rep: _Report) -> int:
    loaded = _load(args.file)
    rep.lines.extend(expand(loaded).splitlines())
    rep.result = "\n".join(rep.lines)
    return 0


def expand(loaded: Loaded) -> str:
    """The elaborated program as a self-contained source file."""
    ws = loaded.workspace
    aliases = ws.aliases()
    out = ["-- data types"]
    for d in ws.decls.values():
        out.append(_print_decl(d, aliases))
    if ws.iterators:
        out.append("")
        out.append("-- iterators")
        for style, data, target in ws.iterators:
            out.append(f"iterator {style} {ref_text(data)} -> {ref_text(target)}")
    out.append("")
    out.append("-- signature")
    for n, ty in ws.signature.items():
        src = loaded.declared_types.get(n)
        shown = show_type(src) if src is not None else show_type(ty, aliases)
        out.append(f"name {n} : {shown}")
    out.append("")
    out.append("-- rules")
    for r in ws.program.rules:
        out.append(print_rule(r))
    return "\n".join(out) + "\n"


def _print_decl(d, aliases) -> str:
    from .datatypes import REC

    params = f"({', '.join(d.params)})" if d.params else ""
    self_ref = d.name + (f"({', '.join(d.params)})" if d.params else "")
    ctors = []
    for c in d.constructors:
        if not c.args:
            ctors.append(c.name)
            continue
        args = [self_ref if a is REC else show_type(a, aliases) for a in c.args]
        ctors.append(f"{c.name}({', '.join(args)})")
    return f"data {d.name}{params} = " + " | ".join(ctors)


def build_parser() -> argparse.ArgumentParser:
    json_parent = argparse.ArgumentParser(add_help=False)
    json_parent.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                             help="print a machine-readable JSON envelope")

    parser = argparse.ArgumentParser(
        prog="contcalc", description="Continuation Calculus workbench."
    )
    parser.add_argument("--json", action="store_true", help="print a JSON envelope")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[json_parent], help="type check a file")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("run", parents=[json_parent], help="evaluate a term")
    p.add_argument("file")
    p.add_argument("--term", required=True)
    p.add_argument("--fuel", type=_natural, default=DEFAULT_FUEL)
    p.add_argument("--trace", action="store_true", help="print every intermediate term")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("equiv", parents=[json_parent], help="test observational equivalence")
    p.add_argument("file")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--arity", type=_natural, required=True)
    p.add_argument("--fuel", type=_natural, default=DEFAULT_FUEL)
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("gen", parents=[json_parent], help="print generated iterator rules")
    p.add_argument("file")
    p.add_argument("--data", required=True)
    p.add_argument("--to", required=True)
    p.add_argument("--style", choices=("cbn", "cbv"), required=True)
    p.add_argument("--signatures", action="store_true", help="also print the name declarations")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("expand", parents=[json_parent], help="print the elaborated program")
    p.add_argument("file")
    p.set_defaults(func=cmd_expand)
    return parser


def _natural(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    rep = _Report(args.command, args)
    try:
        code = args.func(args, rep)
    except UsageError as e:
        rep.diagnostics.append(Diagnostic("error", str(e), None, None))
        rep.result = "UsageError"
        code = 2
    except (ParseError, LoadError) as e:
        rep.diagnostics.extend(e.diagnostics)
        rep.result = "LoadError"
        code = 1
    except CCError as e:
        rep.diagnostics.append(Diagnostic("error", str(e), None, getattr(args, "file", None)))
        rep.result = type(e).__name__
        code = 1
    rep.emit(args.json, out, err)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
