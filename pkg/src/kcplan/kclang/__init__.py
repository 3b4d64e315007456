"""Surface language: syntax tree, parser, printer, macros and validation."""

from .ast import (
    TIME,
    ActionDecl,
    Atom,
    CausationRule,
    Const,
    DatalogRule,
    ExecCondition,
    FluentDecl,
    Macro,
    Program,
    Query,
    Var,
)
from .macros import expand_macros
from .parser import parse_program
from .printer import format_program
from .validate import Diagnostic, validate

__all__ = [
    "TIME",
    "ActionDecl",
    "Atom",
    "CausationRule",
    "Const",
    "DatalogRule",
    "Diagnostic",
    "ExecCondition",
    "FluentDecl",
    "Macro",
    "Program",
    "Query",
    "Var",
    "expand_macros",
    "format_program",
    "parse_program",
    "validate",
]
