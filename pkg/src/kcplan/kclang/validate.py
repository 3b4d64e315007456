"""Static checks: safety of rules and declarations, action acyclicity."""

from __future__ import annotations

from dataclasses import dataclass

from .ast import (
    ARITHMETIC,
    INT_PRED,
    TIME,
    ActionDecl,
    Atom,
    CausationRule,
    DatalogRule,
    ExecCondition,
    Macro,
    Program,
    Var,
    atom_vars,
)


@dataclass(frozen=True)
class Diagnostic:
    kind: str  # "safety", "acyclicity", "declaration"
    message: str
    subject: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.message} [{self.subject}]"


def bindable(generators: list[Atom], builtins: list[Atom], bound: set[Var] | None = None) -> set[Var]:
    """Variables that a left-to-right join can bind.

    ``generators`` bind all their variables; ``#int`` binds its argument;
    ``=`` and the arithmetic built-ins bind their result once the operands
    are bound.
    """
    b = set(bound or ())
    b |= atom_vars(generators)
    changed = True
    while changed:
        changed = False
        for at in builtins:
            new: set[Var] = set()
            if at.pred == INT_PRED:
                new = set(at.variables())
            elif at.pred in ARITHMETIC:
                ops = [a for a in at.args[1:] if isinstance(a, Var)]
                if all(v in b for v in ops) and isinstance(at.args[0], Var):
                    new = {at.args[0]}
            elif at.pred == "=":
                x, y = at.args
                if not isinstance(x, Var) or x in b:
                    new = {y} if isinstance(y, Var) else set()
                if not isinstance(y, Var) or y in b:
                    new |= {x} if isinstance(x, Var) else set()
            if new - b:
                b |= new
                changed = True
    return b


def _split_types(atoms, p: Program):
    dyn, typ, blt = [], [], []
    for at in atoms:
        if at.is_builtin:
            blt.append(at)
        elif p.kind_of(at.pred) in ("fluent", "action"):
            dyn.append(at)
        else:
            typ.append(at)
    return dyn, typ, blt


def _rule_safety(s, p: Program) -> list[Diagnostic]:
    if isinstance(s, ExecCondition):
        head = [s.action]
        pos, neg = list(s.pre_pos), list(s.pre_neg)
    else:
        head = [s.head] if s.head is not None else []
        pos = [*s.post_pos, *s.pre_pos]
        neg = [*s.post_neg, *s.pre_neg]
    pdyn, ptyp, pblt = _split_types(pos, p)
    ndyn, ntyp, nblt = _split_types(neg, p)
    out: list[Diagnostic] = []
    # fluent and action literals bind over legal instances, default-negated or not
    gen = head + pdyn + ndyn + ptyp
    b = bindable(gen, pblt)
    for at in pblt:
        missing = set(at.variables()) - b
        if missing:
            out.append(Diagnostic("safety", f"built-in {at} has unbound variables {_names(missing)}", str(s)))
    positive_vars = bindable(head + pdyn + ptyp, pblt)
    for at in ntyp + nblt:
        missing = set(at.variables()) - positive_vars
        if missing:
            out.append(
                Diagnostic(
                    "safety",
                    f"variables {_names(missing)} of default-negated type literal not {at} "
                    "do not occur in a positive literal",
                    str(s),
                )
            )
    return out


def _datalog_safety(r: DatalogRule) -> list[Diagnostic]:
    gens = [a for a in r.body_pos if not a.is_builtin]
    blts = [a for a in r.body_pos if a.is_builtin]
    b = bindable(gens, blts)
    need = set(r.head.variables()) | atom_vars(r.body_neg) | atom_vars(blts)
    missing = need - b
    if missing:
        return [Diagnostic("safety", f"unsafe variables {_names(missing)}", str(r))]
    return []


def _decl_checks(d, p: Program) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    gens = [a for a in d.requires if not a.is_builtin]
    blts = [a for a in d.requires if a.is_builtin]
    req_bound = bindable(gens, blts)
    for x in d.params:
        if x not in req_bound:
            out.append(Diagnostic("declaration", f"parameter {x} does not occur in the requires part", str(d)))
    if any(TIME in a.args for a in d.requires):
        out.append(Diagnostic("declaration", "time may not occur in the requires part", str(d)))
    for a in blts:
        if set(a.variables()) - req_bound:
            out.append(Diagnostic("safety", f"built-in {a} has unbound variables", str(d)))
    if isinstance(d, ActionDecl) and d.cost is not None:
        wg = [a for a in d.where if not a.is_builtin]
        wb = [a for a in d.where if a.is_builtin]
        all_bound = bindable(gens + wg, blts + wb, {TIME})
        if isinstance(d.cost, Var) and d.cost not in all_bound:
            out.append(Diagnostic("declaration", f"cost variable {d.cost} is not bound by requires/where", str(d)))
        for a in wb:
            if set(a.variables()) - all_bound:
                out.append(Diagnostic("safety", f"built-in {a} in the where part has unbound variables", str(d)))
    return out


def _action_cycles(p: Program) -> list[Diagnostic]:
    edges: dict[str, set[str]] = {}
    for s in p.statements():
        if isinstance(s, ExecCondition):
            deps = {a.pred for a in s.pre_pos if p.kind_of(a.pred) == "action"}
            edges.setdefault(s.action.pred, set()).update(deps)
    out: list[Diagnostic] = []
    state: dict[str, int] = {}
    stack: list[str] = []

    def visit(u: str) -> None:
        state[u] = 1
        stack.append(u)
        for v in sorted(edges.get(u, ())):
            if state.get(v) == 1:
                cyc = stack[stack.index(v):] + [v]
                out.append(
                    Diagnostic("acyclicity", "positive cyclic dependency among actions", " -> ".join(cyc))
                )
            elif v not in state:
                visit(v)
        stack.pop()
        state[u] = 2

    for u in sorted(edges):
        if u not in state:
            visit(u)
    return out


def _names(vs) -> str:
    return ", ".join(sorted(v.name for v in vs))


def validate(p: Program) -> list[Diagnostic]:
    """Return safety, declaration and acyclicity diagnostics (empty if clean)."""
    out: list[Diagnostic] = []
    for r in p.background:
        out += _datalog_safety(r)
    for d in (*p.fluent_decls, *p.action_decls):
        out += _decl_checks(d, p)
    for s in p.statements():
        if isinstance(s, Macro):
            continue
        if isinstance(s, CausationRule) and s.scope == "initially" and (s.pre_pos or s.pre_neg):
            out.append(Diagnostic("safety", "initial state constraints cannot have an after part", str(s)))
        out += _rule_safety(s, p)
    out += _action_cycles(p)
    return out
