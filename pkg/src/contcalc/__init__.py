"""Continuation Calculus: terms, evaluation, types, data types and a prelude."""

from __future__ import annotations

from .datatypes import (
    REC,
    Constructor,
    DataTypeDecl,
    GeneratedBundle,
    Value,
    compile_type,
    decode,
    encode,
    gen_constructors,
    gen_iter_cbn,
    gen_iter_cbv,
    lambda_lift,
)
from .errors import (
    ArityMismatch,
    CCError,
    CircularityError,
    ConstructorMismatch,
    DecodeFailure,
    DuplicateDefinition,
    MalformedRule,
    NameClash,
    NotAMu,
    ShapeError,
    UnboundVariable,
)
from .evaluator import (
    Equality,
    Equivalence,
    FuelExhausted,
    Terminated,
    eq_p,
    evaluate,
    obs_equiv_test,
    step,
    trace,
)
from .loader import LoadError, load, load_file, load_text
from .stdlib import build_prelude, load_prelude, numeral
from .syntax import ParseError, parse, parse_rule, parse_term, parse_type, pretty
from .terms import App, Classification, Name, Program, Rule, Var, app, classify, show
from .typechecker import TypeCheckError, check_non_circular, check_program, check_rule, infer
from .types import BOT, Arrow, Bot, Mu, TyVar, show_type, type_eq, unfold_mu, validate_mu_shape
from .workspace import Workspace

__version__ = "0.1.0"
