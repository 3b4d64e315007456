"""Macro expansion into plain causation rules."""

from __future__ import annotations

from ..errors import KcSemanticError
from .ast import CausationRule, Macro, Program


def expand_statement(s) -> list:
    if not isinstance(s, Macro):
        return [s]
    k = s.kind
    if k == "nonexecutable":
        return [CausationRule(None, (), (), (s.head, *s.pre_pos), s.pre_neg, s.scope)]
    if k == "forbidden":
        return [CausationRule(None, s.post_pos, s.post_neg, s.pre_pos, s.pre_neg, s.scope)]
    f = s.head
    if k == "inertial":
        return [CausationRule(f, s.post_pos, (f.negate(), *s.post_neg), (f, *s.pre_pos), s.pre_neg, s.scope)]
    if k == "default":
        return [CausationRule(f, s.post_pos, (f.negate(), *s.post_neg), s.pre_pos, s.pre_neg, s.scope)]
    if k == "total":
        if f.neg:
            raise KcSemanticError(f"total requires a positive fluent literal, found {f}")
        g = f.negate()
        return [
            CausationRule(f, s.post_pos, (g, *s.post_neg), s.pre_pos, s.pre_neg, s.scope),
            CausationRule(g, s.post_pos, (f, *s.post_neg), s.pre_pos, s.pre_neg, s.scope),
        ]
    raise KcSemanticError(f"unknown macro {k}")


def expand_macros(p: Program) -> Program:
    """Replace every macro by its causation rules.

    ``noConcurrency`` stays a flag; the grounder expands it once the legal
    action instances are known.
    """
    ini = tuple(r for s in p.initially for r in expand_statement(s))
    alw = tuple(r for s in p.always for r in expand_statement(s))
    return p.replace(initially=ini, always=alw)
