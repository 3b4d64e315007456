"""Recursive-descent parser for K^c planning problems.

Each source text starts in background mode (plain Datalog rules).  The
section keywords ``fluents:``, ``actions:``, ``initially:``, ``always:`` and
``goal:`` switch modes; ``noConcurrency.`` may appear in any K^c section.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from ..errors import KcSemanticError
from .ast import (
    ARITHMETIC,
    COMPARISONS,
    INT_PRED,
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
    Term,
    Var,
)
from .lexer import Token, TokenStream, tokenize

SECTIONS = ("fluents", "actions", "initially", "always", "goal")
_CMP_TOKENS = ("<", "<=", ">", ">=", "!=")


class _Anon:
    """Fresh names for ``_`` occurrences, unique within one parse."""

    def __init__(self):
        self._n = itertools.count(1)

    def fresh(self) -> Var:
        return Var(f"_{next(self._n)}")


class TermParser:
    """Terms, atoms and body literals; shared with the logic-program reader."""

    def __init__(self, ts: TokenStream, anon: _Anon | None = None):
        self.ts = ts
        self.anon = anon or _Anon()

    def term(self) -> Term:
        t = self.ts.cur
        if t.kind == "INT":
            self.ts.advance()
            return Const(int(t.text))
        if t.kind == "VAR":
            self.ts.advance()
            return self.anon.fresh() if t.text == "_" else Var(t.text)
        if t.kind == "ID":
            self.ts.advance()
            return Const(t.text)
        if t.text == "-" and self.ts.peek().kind == "INT":
            self.ts.error("negative integer constants are not allowed")
        self.ts.error(f"expected a term, found {t}")

    def args(self) -> tuple:
        if not self.ts.accept("("):
            return ()
        out = [self.term()]
        while self.ts.accept(","):
            out.append(self.term())
        self.ts.expect(")")
        return tuple(out)

    def classical_atom(self) -> Atom:
        neg = self.ts.accept("-")
        t = self.ts.cur
        if t.kind != "ID":
            self.ts.error(f"expected a predicate name, found {t}")
        self.ts.advance()
        return Atom(t.text, self.args(), neg)

    def _starts_builtin(self) -> bool:
        t, nxt = self.ts.cur, self.ts.peek()
        if t.text == INT_PRED:
            return True
        if t.kind in ("VAR", "INT"):
            return True
        return t.kind == "ID" and nxt.text in _CMP_TOKENS + ("=",)

    def atom_or_builtin(self) -> Atom:
        if self.ts.at(INT_PRED):
            self.ts.advance()
            self.ts.expect("(")
            x = self.term()
            self.ts.expect(")")
            return Atom(INT_PRED, (x,))
        if self._starts_builtin():
            left = self.term()
            op = self.ts.cur.text
            if op in _CMP_TOKENS:
                self.ts.advance()
                return Atom(op, (left, self.term()))
            if op == "=":
                self.ts.advance()
                b = self.term()
                if self.ts.cur.text in ARITHMETIC:
                    ar = self.ts.advance().text
                    c = self.term()
                    return Atom(ar, (left, b, c))
                return Atom("=", (left, b))
            self.ts.error(f"expected a comparison after {left}, found {self.ts.cur}")
        return self.classical_atom()

    def body_literal(self) -> tuple[Atom, bool]:
        """Returns (atom, default_negated)."""
        naf = False
        if self.ts.at_kw("not") and self.ts.peek().text not in ("(", ",", ".") + tuple(COMPARISONS):
            self.ts.advance()
            naf = True
        return self.atom_or_builtin(), naf

    def body(self) -> tuple[list[Atom], list[Atom]]:
        pos: list[Atom] = []
        neg: list[Atom] = []
        while True:
            at, naf = self.body_literal()
            (neg if naf else pos).append(at)
            if not self.ts.accept(","):
                break
        return pos, neg


class _SourceParser(TermParser):
    def __init__(self, text: str, source: str | None, anon: _Anon):
        super().__init__(TokenStream(tokenize(text, source), source), anon)
        self.mode = "background"
        self.background: list[DatalogRule] = []
        self.fluents: list[FluentDecl] = []
        self.actions: list[ActionDecl] = []
        self.initially: list = []
        self.always: list = []
        self.no_concurrency = False
        self.query: Query | None = None

    def run(self) -> None:
        ts = self.ts
        while ts.cur.kind != "EOF":
            t = ts.cur
            if t.kind == "ID" and t.text in SECTIONS and ts.peek().text == ":":
                ts.advance()
                ts.advance()
                self.mode = t.text
                if t.text == "goal":
                    self._goal()
                continue
            if t.kind == "ID" and t.text == "noConcurrency" and ts.peek().text == ".":
                if self.mode == "background":
                    ts.error("noConcurrency outside a planning section")
                ts.advance()
                ts.advance()
                self.no_concurrency = True
                continue
            if self.mode == "background":
                self._datalog_rule()
            elif self.mode == "fluents":
                self._fluent_decl()
            elif self.mode == "actions":
                self._action_decl()
            elif self.mode in ("initially", "always"):
                stmt = self._statement(self.mode)
                (self.initially if self.mode == "initially" else self.always).append(stmt)
            else:
                ts.error(f"unexpected {t} after the goal query")

    # -- background -------------------------------------------------------
    def _datalog_rule(self) -> None:
        head = self.classical_atom()
        pos: list[Atom] = []
        neg: list[Atom] = []
        if self.ts.accept(":-"):
            pos, neg = self.body()
        self.ts.expect(".")
        self.background.append(DatalogRule(head, tuple(pos), tuple(neg)))

    # -- declarations -----------------------------------------------------
    def _decl_head(self) -> tuple[Token, tuple]:
        t = self.ts.cur
        if t.kind != "ID":
            self.ts.error(f"expected a declaration, found {t}")
        self.ts.advance()
        params = self.args()
        for p in params:
            if not isinstance(p, Var) or p.name.startswith("_"):
                self.ts.error(f"declaration parameters must be named variables, found {p}", t)
        return t, params

    def _type_list(self, time_is_var: bool) -> tuple:
        out = []
        while True:
            at, naf = self.body_literal()
            if naf:
                self.ts.error("default negation is not allowed in requires/where parts")
            if time_is_var:
                at = _time_to_var(at)
            out.append(at)
            if not self.ts.accept(","):
                return tuple(out)

    def _fluent_decl(self) -> None:
        t, params = self._decl_head()
        req: tuple = ()
        if self.ts.at_kw("requires"):
            self.ts.advance()
            req = self._type_list(False)
        self.ts.expect(".")
        self.fluents.append(FluentDecl(t.text, params, req))

    def _action_decl(self) -> None:
        t, params = self._decl_head()
        req: tuple = ()
        cost = None
        where: tuple = ()
        if self.ts.at_kw("requires"):
            self.ts.advance()
            req = self._type_list(False)
        if self.ts.at_kw("costs"):
            self.ts.advance()
            cost = self.term()
            if cost == Const("time"):
                cost = TIME
            if self.ts.at_kw("where"):
                self.ts.advance()
                where = self._type_list(True)
        self.ts.expect(".")
        self.actions.append(ActionDecl(t.text, params, req, cost, where))

    # -- rules ------------------------------------------------------------
    def _split(self) -> tuple[tuple, tuple]:
        pos, neg = self.body()
        return tuple(pos), tuple(neg)

    def _if_after(self) -> tuple[tuple, tuple, tuple, tuple]:
        post_pos = post_neg = pre_pos = pre_neg = ()
        if self.ts.at_kw("if"):
            self.ts.advance()
            post_pos, post_neg = self._split()
        if self.ts.at_kw("after"):
            self.ts.advance()
            pre_pos, pre_neg = self._split()
        return post_pos, post_neg, pre_pos, pre_neg

    def _head_literal(self) -> Atom | None:
        if self.ts.at_kw("false") and self.ts.peek().text != "(":
            self.ts.advance()
            return None
        return self.classical_atom()

    def _statement(self, scope: str):
        ts = self.ts
        if ts.at_kw("caused"):
            ts.advance()
            head = self._head_literal()
            stmt = CausationRule(head, *self._if_after(), scope=scope)
        elif ts.at_kw("executable") and ts.peek().kind == "ID":
            ts.advance()
            act = self.classical_atom()
            pre_pos = pre_neg = ()
            if ts.at_kw("if"):
                ts.advance()
                pre_pos, pre_neg = self._split()
            stmt = ExecCondition(act, pre_pos, pre_neg)
        elif ts.at_kw("nonexecutable") and ts.peek().kind == "ID":
            ts.advance()
            act = self.classical_atom()
            pre_pos = pre_neg = ()
            if ts.at_kw("if"):
                ts.advance()
                pre_pos, pre_neg = self._split()
            stmt = Macro("nonexecutable", act, pre_pos=pre_pos, pre_neg=pre_neg, scope=scope)
        elif ts.at_kw("forbidden") and ts.peek().text not in ("(", ".", ","):
            ts.advance()
            post_pos, post_neg = self._split()
            pre_pos = pre_neg = ()
            if ts.at_kw("after"):
                ts.advance()
                pre_pos, pre_neg = self._split()
            stmt = Macro("forbidden", None, post_pos, post_neg, pre_pos, pre_neg, scope)
        elif ts.cur.kind == "ID" and ts.cur.text in ("inertial", "default", "total") and (
            ts.peek().kind == "ID" or ts.peek().text == "-"
        ):
            kind = ts.advance().text
            head = self.classical_atom()
            stmt = Macro(kind, head, *self._if_after(), scope=scope)
        else:
            # short form "f." / "f if B after A." stands for a caused rule
            head = self._head_literal()
            stmt = CausationRule(head, *self._if_after(), scope=scope)
        ts.expect(".")
        return stmt

    def _goal(self) -> None:
        ts = self.ts
        pos: list[Atom] = []
        neg: list[Atom] = []
        if not ts.at("?"):
            while True:
                naf = False
                if ts.at_kw("not") and ts.peek().text != "(":
                    ts.advance()
                    naf = True
                at = self.classical_atom()
                if not at.is_ground:
                    ts.error(f"goal literal {at} is not ground")
                (neg if naf else pos).append(at)
                if not ts.accept(","):
                    break
        ts.expect("?")
        length = None
        if ts.accept("("):
            t = ts.cur
            if t.kind != "INT":
                ts.error(f"plan length must be a non-negative integer, found {t}")
            ts.advance()
            length = int(t.text)
            ts.expect(")")
        ts.accept(".")
        if self.query is not None:
            ts.error("more than one goal query")
        self.query = Query(tuple(pos), tuple(neg), length)
        self.mode = "done"


def _time_to_var(at: Atom) -> Atom:
    if Const("time") not in at.args:
        return at
    return Atom(at.pred, tuple(TIME if a == Const("time") else a for a in at.args), at.neg)


def constant_order(atoms: Iterable[Atom]) -> tuple:
    """Symbolic constants in order of first occurrence."""
    seen: dict[str, None] = {}
    for at in atoms:
        for a in at.args:
            if isinstance(a, Const) and isinstance(a.value, str):
                seen.setdefault(a.value)
    return tuple(seen)


def program_atoms(bg: Iterable[DatalogRule], decls: Iterable, stmts: Iterable, query: Query | None):
    for r in bg:
        yield r.head
        yield from r.body_pos
        yield from r.body_neg
    for d in decls:
        yield from d.requires
        yield from getattr(d, "where", ())
    for s in stmts:
        yield from s.atoms()
    if query is not None:
        yield from query.goal_pos
        yield from query.goal_neg


def parse_program(sources: Sequence[str] | str, names: Sequence[str] | None = None, check: bool = True) -> Program:
    """Parse one or more source texts into a single :class:`Program`.

    ``names`` are used in error locations.  With ``check`` the result is
    checked for declaration clashes and undeclared fluents/actions.
    """
    if isinstance(sources, str):
        sources = [sources]
    anon = _Anon()
    bg: list = []
    fl: list = []
    ac: list = []
    ini: list = []
    alw: list = []
    noconc = False
    query = None
    for k, text in enumerate(sources):
        name = names[k] if names and k < len(names) else None
        sp = _SourceParser(text, name, anon)
        sp.run()
        bg += sp.background
        fl += sp.fluents
        ac += sp.actions
        ini += sp.initially
        alw += sp.always
        noconc = noconc or sp.no_concurrency
        if sp.query is not None:
            if query is not None:
                raise KcSemanticError("more than one goal query in the input")
            query = sp.query
    order = constant_order(program_atoms(bg, fl + ac, ini + alw, query))
    prog = Program(tuple(bg), tuple(fl), tuple(ac), tuple(ini), tuple(alw), noconc, query, order)
    if check:
        check_declarations(prog)
    return prog


def check_declarations(p: Program) -> None:
    arity: dict[str, tuple[str, int]] = {}
    for kind, decls in (("fluent", p.fluent_decls), ("action", p.action_decls)):
        for d in decls:
            prev = arity.get(d.name)
            if prev is not None and prev != (kind, len(d.params)):
                pk, pa = prev
                raise KcSemanticError(
                    f"{kind} {d.name}/{len(d.params)} clashes with earlier declaration as {pk} {d.name}/{pa}"
                )
            arity[d.name] = (kind, len(d.params))
    defined = {r.head.pred for r in p.background}
    for name in defined & set(arity):
        raise KcSemanticError(f"{name} is declared as {arity[name][0]} but also defined in the background")
    for r in p.background:
        for at in (*r.body_pos, *r.body_neg):
            if at.pred in arity:
                raise KcSemanticError(f"background rule {r} refers to {arity[at.pred][0]} {at.pred}")

    def check_atom(at: Atom, want: str | None, where) -> None:
        if at.is_builtin:
            if want is not None:
                raise KcSemanticError(f"built-in {at} cannot be used as a {want} in {where}")
            return
        info = arity.get(at.pred)
        if info is None:
            if want is not None:
                raise KcSemanticError(f"undeclared {want} {at.pred} in {where}")
            if at.pred not in defined:
                raise KcSemanticError(f"undeclared predicate {at.pred} in {where}")
            return
        kind, n = info
        if want is not None and kind != want:
            raise KcSemanticError(f"{at.pred} is a {kind}, expected a {want} in {where}")
        if n != len(at.args):
            raise KcSemanticError(f"{at.pred} has arity {n} but is used with {len(at.args)} arguments in {where}")
        if kind == "action" and at.neg:
            raise KcSemanticError(f"strong negation of action {at.pred} in {where}")

    for d in (*p.fluent_decls, *p.action_decls):
        for at in (*d.requires, *getattr(d, "where", ())):
            if not at.is_builtin and at.pred in arity:
                raise KcSemanticError(f"declaration of {d.name} uses non-type literal {at}")
            check_atom(at, None, d)
    for s in p.statements():
        if isinstance(s, ExecCondition):
            check_atom(s.action, "action", s)
            rest = (*s.pre_pos, *s.pre_neg)
        elif isinstance(s, Macro) and s.kind == "nonexecutable":
            check_atom(s.head, "action", s)
            rest = (*s.pre_pos, *s.pre_neg)
        else:
            if s.head is not None:
                check_atom(s.head, "fluent", s)
            rest = (*s.post_pos, *s.post_neg, *s.pre_pos, *s.pre_neg)
            for at in (*s.post_pos, *s.post_neg):
                if not at.is_builtin and arity.get(at.pred, ("",))[0] == "action":
                    raise KcSemanticError(f"action {at.pred} in the if-part of {s}")
        for at in rest:
            check_atom(at, None, s)
    if p.query is not None:
        for at in (*p.query.goal_pos, *p.query.goal_neg):
            check_atom(at, "fluent", "the goal")
