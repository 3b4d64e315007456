"""Translation of K^c planning problems into disjunctive logic programs.

``translate_lpw`` produces a program with weak constraints whose optimal
answer sets correspond to optimal plans; ``translate_minimize`` produces the
variant that uses a minimize statement and a negation-based action guess.
Neither program is solved here.  The planner implements the semantics
directly, and ``weak_cost_of_image`` checks the cost correspondence by
evaluating the weak constraints on the image of a planner trajectory.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .background import ArithContext, SymbolOrder, eval_builtin
from .errors import KcError
from .kclang.ast import (
    ARITHMETIC,
    BUILTINS,
    COMPARISONS,
    INT_PRED,
    TIME,
    Atom,
    CausationRule,
    Const,
    ExecCondition,
    Program,
    Var,
)
from .kclang.macros import expand_macros

ANON = Var("_")


class TranslationError(KcError):
    pass


# -- the target language ----------------------------------------------------


def _conj(pos: Iterable[Atom], neg: Iterable[Atom]) -> str:
    return ", ".join([*map(str, pos), *(f"not {a}" for a in neg)])


@dataclass(frozen=True)
class LPRule:
    """``h1 v ... v hn :- pos, not neg.``; no head means a strong constraint."""

    head: tuple = ()
    pos: tuple = ()
    neg: tuple = ()

    @property
    def is_constraint(self) -> bool:
        return not self.head

    @property
    def is_fact(self) -> bool:
        return len(self.head) == 1 and not self.pos and not self.neg

    def __str__(self) -> str:
        body = _conj(self.pos, self.neg)
        head = " v ".join(map(str, self.head))
        if not body:
            return f"{head}."
        return f"{head} :- {body}." if head else f":- {body}."


@dataclass(frozen=True)
class WeakConstraint:
    pos: tuple
    neg: tuple
    weight: object  # Var or Const
    level: object = None

    def __str__(self) -> str:
        lvl = "" if self.level is None else str(self.level)
        return f":~ {_conj(self.pos, self.neg)}. [{self.weight}:{lvl}]"


@dataclass(frozen=True)
class Minimize:
    """``minimize[lit : cond = w]`` with one element per tuple entry."""

    elements: tuple = ()  # of (Atom, Atom, term)

    def __str__(self) -> str:
        return "minimize[" + ", ".join(f"{a} : {c} = {w}" for a, c, w in self.elements) + "]."


@dataclass(frozen=True)
class LPProgram:
    statements: tuple = ()  # LPRule and WeakConstraint in emission order
    minimize: Minimize | None = None
    names: Mapping = field(default_factory=dict, compare=False)

    @property
    def rules(self) -> list[LPRule]:
        return [s for s in self.statements if isinstance(s, LPRule) and not s.is_constraint]

    @property
    def strong_constraints(self) -> list[LPRule]:
        return [s for s in self.statements if isinstance(s, LPRule) and s.is_constraint]

    @property
    def weak_constraints(self) -> list[WeakConstraint]:
        return [s for s in self.statements if isinstance(s, WeakConstraint)]

    @property
    def text(self) -> str:
        lines = [str(s) for s in self.statements]
        if self.minimize is not None:
            lines.append(str(self.minimize))
        return "\n".join(lines) + "\n"

    def __str__(self) -> str:
        return self.text


# -- building blocks --------------------------------------------------------


def _norm(at: Atom) -> Atom:
    """Parser-generated anonymous variables print as ``_``."""
    if not any(isinstance(a, Var) and a.name.startswith("_") for a in at.args):
        return at
    return Atom(at.pred, tuple(ANON if isinstance(a, Var) and a.name.startswith("_") else a for a in at.args), at.neg)


def _stamp(at: Atom, t) -> Atom:
    return Atom(at.pred, (*at.args, t), at.neg)


def _dedup(atoms: Iterable[Atom]) -> tuple:
    seen, out = set(), []
    for a in atoms:
        k = str(a)
        if k not in seen:
            seen.add(k)
            out.append(a)
    return tuple(out)


def _fresh_pred(name: str, taken: set[str]) -> str:
    cand, n = name, 0
    while cand in taken:
        n += 1
        cand = f"kc_{name}" if n == 1 else f"kc_{name}{n}"
    taken.add(cand)
    return cand


def _fresh_vars(used: set[str], *bases: str) -> list[Var]:
    out = []
    for b in bases:
        cand, n = b, 0
        while cand in used:
            n += 1
            cand = f"{b}_{n}"
        used.add(cand)
        out.append(Var(cand))
    return out


def _var_names(atoms: Iterable[Atom]) -> set[str]:
    return {v.name for a in atoms for v in a.variables()}


def _all_predicates(p: Program) -> set[str]:
    names = {d.name for d in (*p.fluent_decls, *p.action_decls)}
    for r in p.background:
        names.update(a.pred for a in (r.head, *r.body_pos, *r.body_neg))
    for d in (*p.fluent_decls, *p.action_decls):
        names.update(a.pred for a in d.requires)
    for d in p.action_decls:
        names.update(a.pred for a in d.where)
    for s in p.statements():
        names.update(a.pred for a in s.atoms() if a is not None)
    return names


class _Ctx:
    def __init__(self, p: Program, plan_length: int | None):
        q = p.query
        length = plan_length if plan_length is not None else (q.plan_length if q else None)
        if q is None:
            raise TranslationError("the program has no goal to translate")
        if length is None:
            raise TranslationError("the goal has no plan length; pass plan_length")
        self.p = expand_macros(p)
        self.l = length
        self.decls = {d.name: d for d in (*p.fluent_decls, *p.action_decls)}
        self.actions = [d.name for d in p.action_decls]
        taken = _all_predicates(p)
        self.taken = taken
        self.time = _fresh_pred("time", taken)
        self.next = _fresh_pred("next", taken)
        self.goal = _fresh_pred("goal_reached", taken)

    def is_dyn(self, at: Atom) -> bool:
        return at.pred in self.decls and not at.is_builtin

    def types(self, lits: Iterable[Atom], used: set[str]) -> list[Atom]:
        """Requires-atoms of every fluent or action literal, instantiated."""
        out: list[Atom] = []
        for lit in lits:
            d = self.decls.get(lit.pred)
            if d is None or not d.requires:
                continue
            theta = dict(zip(d.params, lit.args))
            extra = [v for r in d.requires for v in r.variables() if v not in theta]
            in_builtin = {v for r in d.requires if r.is_builtin for v in r.variables()}
            for v in dict.fromkeys(extra):
                if v not in in_builtin and (v.name.startswith("_") or extra.count(v) == 1):
                    theta[v] = ANON
                else:
                    theta[v] = _fresh_vars(used, v.name)[0]
            out += [_norm(r.substitute(theta)) for r in d.requires]
        return out

    def stamp(self, lits: Iterable[Atom], t) -> list[Atom]:
        return [_stamp(_norm(a), t) if self.is_dyn(a) else _norm(a) for a in lits]


def _background(p: Program) -> list[LPRule]:
    return [LPRule((_norm(r.head),), tuple(map(_norm, r.body_pos)), tuple(map(_norm, r.body_neg))) for r in p.background]


def _time_facts(c: _Ctx) -> list[LPRule]:
    out = [LPRule((Atom(c.time, (Const(t),)),)) for t in range(c.l + 1)]
    out += [LPRule((Atom(c.next, (Const(t), Const(t + 1))),)) for t in range(c.l)]
    return out


def _causation(c: _Ctx, r: CausationRule, initial: bool) -> LPRule:
    lits = [*(() if r.head is None else (r.head,)), *r.post_pos, *r.post_neg, *r.pre_pos, *r.pre_neg]
    used = _var_names(lits)
    if initial:
        now, before, tail = Const(0), None, []
    elif r.is_static:
        (now,) = _fresh_vars(used, "T")
        before, tail = None, [Atom(c.time, (now,))]
    else:
        before, now = _fresh_vars(used, "T0", "T1")
        tail = [Atom(c.next, (before, now))]
    types = c.types(lits, used)
    pos = [*c.stamp(r.post_pos, now), *c.stamp(r.pre_pos, before)]
    neg = [*c.stamp(r.post_neg, now), *c.stamp(r.pre_neg, before)]
    head = () if r.head is None else (_stamp(_norm(r.head), now),)
    return LPRule(head, _dedup([*pos, *types, *tail]), _dedup(neg))


def _guess_body(c: _Ctx, e: ExecCondition) -> tuple[Atom, tuple, tuple]:
    used = _var_names(e.atoms())
    t0, t1 = _fresh_vars(used, "T0", "T1")
    types = c.types([e.action, *e.pre_pos, *e.pre_neg], used)
    pos = _dedup([*c.stamp(e.pre_pos, t0), *types, Atom(c.next, (t0, t1))])
    return _stamp(_norm(e.action), t0), pos, _dedup(c.stamp(e.pre_neg, t0))


def _no_concurrency(c: _Ctx) -> list[LPRule]:
    if not c.p.no_concurrency:
        return []
    decls = c.p.action_decls
    out = []
    for i, a in enumerate(decls):
        for b in decls[i:]:
            used: set[str] = set()
            xs = _fresh_vars(used, *(f"X{k}" for k in range(1, len(a.params) + 1)))
            ys = _fresh_vars(used, *(f"Y{k}" for k in range(1, len(b.params) + 1)))
            (t,) = _fresh_vars(used, "T")
            pa, pb = Atom(a.name, (*xs, t)), Atom(b.name, (*ys, t))
            if a is not b:
                out.append(LPRule((), (pa, pb)))
                continue
            for x, y in zip(xs, ys):
                out.append(LPRule((), (pa, pb, Atom("!=", (x, y)))))
    return out


def _goal(c: _Ctx) -> list[LPRule]:
    q = c.p.query
    at = Const(c.l)
    g = Atom(c.goal)
    return [
        LPRule((g,), tuple(c.stamp(q.goal_pos, at)), tuple(c.stamp(q.goal_neg, at))),
        LPRule((), (), (g,)),
    ]


def _cost_parts(c: _Ctx, d) -> tuple[Var, Var, tuple, object]:
    """Shared pieces of the cost rule: T, U, requires+where body, cost term."""
    used = _var_names([d.atom, *d.requires, *d.where]) | ({d.cost.name} if isinstance(d.cost, Var) else set())
    t, u = _fresh_vars(used, "T", "U")
    theta = {TIME: u}
    where = [_norm(w.substitute(theta)) for w in d.where]
    cost = theta.get(d.cost, d.cost) if isinstance(d.cost, Var) else d.cost
    body = [*map(_norm, d.requires), *where]
    if u.name in _var_names(body) or cost == u:
        body.append(Atom("+", (u, t, Const(1))))
    return t, u, tuple(body), cost


def _shared_prefix(c: _Ctx) -> list:
    """Rules common to both translations, up to the causation rules."""
    out: list = _background(c.p) + _time_facts(c)
    out += [_causation(c, r, False) for r in c.p.always if isinstance(r, CausationRule)]
    return out


def translate_lpw(p: Program, plan_length: int | None = None) -> LPProgram:
    """The weak-constraint translation of ``p`` at its goal's plan length."""
    c = _Ctx(p, plan_length)
    out = _shared_prefix(c)
    for e in c.p.always:
        if isinstance(e, ExecCondition):
            a, pos, neg = _guess_body(c, e)
            out.append(LPRule((a, a.negate()), pos, neg))
    out += _no_concurrency(c)
    out += [_causation(c, r, True) for r in c.p.initially]
    out += _goal(c)
    names = {"time": c.time, "next": c.next, "goal_reached": c.goal}
    for d in c.p.action_decls:
        if d.cost is None:
            continue
        name = _fresh_pred(f"cost_{d.name}", c.taken)
        names[f"cost_{d.name}"] = name
        t, _, body, cost = _cost_parts(c, d)
        head = Atom(name, (*d.params, t, cost))
        out.append(LPRule((head,), (Atom(d.name, (*d.params, t)), *body)))
        out.append(WeakConstraint((head,), (), cost))
    return LPProgram(tuple(out), None, names)


def translate_minimize(p: Program, plan_length: int | None = None) -> LPProgram:
    """The minimize-statement variant.

    Actions are guessed with a pair of rules through default negation, and
    the costs of all actions flow into one ``cost`` predicate whose argument
    lists are padded with ``0`` to the largest action arity.
    """
    c = _Ctx(p, plan_length)
    out = _shared_prefix(c)
    for e in c.p.always:
        if isinstance(e, ExecCondition):
            a, pos, neg = _guess_body(c, e)
            out.append(LPRule((a,), pos, (*neg, a.negate())))
            out.append(LPRule((a.negate(),), pos, (*neg, a)))
    out += _no_concurrency(c)
    out += [_causation(c, r, True) for r in c.p.initially]
    out += _goal(c)
    width = max((len(d.params) for d in c.p.action_decls), default=0)
    cost_p = _fresh_pred("cost", c.taken)
    occurs = _fresh_pred("occurs", c.taken)
    any_cost = False
    for d in c.p.action_decls:
        if d.cost is None:
            continue
        any_cost = True
        t, _, body, cost = _cost_parts(c, d)
        key = (Const(d.name), *d.params, *(Const(0),) * (width - len(d.params)))
        out.append(LPRule((Atom(cost_p, (*key, t, cost)),), (*body, Atom(c.time, (t,)))))
        types = tuple(c.types([d.atom], _var_names([d.atom])))
        out.append(LPRule((Atom(occurs, (*key, t)),), (Atom(d.name, (*d.params, t)), *types)))
    elements = ()
    if any_cost:
        xs = [Var(f"X{k}") for k in range(1, width + 1)]
        a, t, w = Var("A"), Var("T"), Var("C")
        elements = ((Atom(occurs, (a, *xs, t)), Atom(cost_p, (a, *xs, t, w)), w),)
    names = {"time": c.time, "next": c.next, "goal_reached": c.goal, "cost": cost_p, "occurs": occurs}
    return LPProgram(tuple(out), Minimize(elements), names)


# -- trajectory images and weak-constraint cost ----------------------------


@dataclass(frozen=True)
class TrajectoryImage:
    """Time-stamped literals of a trajectory together with the background model."""

    literals: frozenset
    horizon: int
    order: SymbolOrder = field(default_factory=SymbolOrder, compare=False)
    int_bound: int = 0

    def actions(self, j: int, action_names: Iterable[str]) -> frozenset:
        """The action set executed in step ``j`` (1-based)."""
        names = set(action_names)
        return frozenset(
            Atom(a.pred, a.args[:-1], a.neg)
            for a in self.literals
            if a.pred in names and not a.neg and a.args and a.args[-1] == Const(j - 1)
        )

    def state(self, j: int, fluent_names: Iterable[str]) -> frozenset:
        names = set(fluent_names)
        return frozenset(
            Atom(a.pred, a.args[:-1], a.neg) for a in self.literals if a.pred in names and a.args and a.args[-1] == Const(j)
        )


def trajectory_image(gd, trajectory) -> TrajectoryImage:
    """The answer-set candidate corresponding to a planner trajectory."""
    lits = set(gd.background.atoms())
    for j, s in enumerate(trajectory.states):
        lits.update(_stamp(f.to_atom(), Const(j)) for f in s)
    for j, t in enumerate(trajectory.transitions):
        lits.update(_stamp(a.to_atom(), Const(j)) for a in t.actions)
    return TrajectoryImage(frozenset(lits), len(trajectory.transitions), gd.background.order, gd.background.int_bound)


def _value(t, theta):
    if isinstance(t, Const):
        return t.value
    return theta.get(t.name)


class _Facts:
    def __init__(self, atoms: Iterable[Atom] = ()):
        self.by_key: dict[tuple, set[tuple]] = {}
        for a in atoms:
            self.add(a)

    def add(self, a: Atom) -> bool:
        s = self.by_key.setdefault((a.pred, a.neg, len(a.args)), set())
        t = tuple(x.value for x in a.args)
        if t in s:
            return False
        s.add(t)
        return True

    def holds(self, a: Atom, theta) -> bool:
        t = tuple(_value(x, theta) for x in a.args)
        return t in self.by_key.get((a.pred, a.neg, len(a.args)), ())

    def tuples(self, a: Atom) -> Iterable[tuple]:
        return self.by_key.get((a.pred, a.neg, len(a.args)), ())


def _builtin_ready(b: Atom, theta) -> bool | Var:
    """True if ``b`` can be tested, a Var if it can bind that variable, else False."""
    vals = [_value(x, theta) for x in b.args]
    missing = [x for x, v in zip(b.args, vals) if v is None]
    if not missing:
        return True
    if len(missing) == 1 and missing[0] != ANON:
        if b.pred in ARITHMETIC and missing[0] == b.args[0]:
            return missing[0]
        if b.pred == "=":
            return missing[0]
    return False


def _match(pos: tuple, neg: tuple, facts: _Facts, theta: dict, order: SymbolOrder, int_bound: int) -> Iterator[dict]:
    arith = ArithContext(None)
    todo = list(pos)

    def step(todo: list, theta: dict) -> Iterator[dict]:
        for i, b in enumerate(todo):
            if b.pred not in BUILTINS:
                continue
            r = _builtin_ready(b, theta)
            if r is True:
                if not eval_builtin(b, [_value(x, theta) for x in b.args], order, int_bound, arith):
                    return
                yield from step(todo[:i] + todo[i + 1 :], theta)
                return
            if isinstance(r, Var):
                if b.pred == "=":
                    other = b.args[1] if b.args[0] == r else b.args[0]
                    v = _value(other, theta)
                else:
                    v = arith.combine(b.pred, _value(b.args[1], theta), _value(b.args[2], theta))
                if v is None:
                    return
                yield from step(todo[:i] + todo[i + 1 :], {**theta, r.name: v})
                return
        for i, a in enumerate(todo):
            if a.pred in BUILTINS:
                continue
            rest = todo[:i] + todo[i + 1 :]
            for t in facts.tuples(a):
                th = dict(theta)
                for x, v in zip(a.args, t):
                    if isinstance(x, Const):
                        if x.value != v:
                            break
                    elif x == ANON:
                        continue
                    elif x.name in th:
                        if th[x.name] != v:
                            break
                    else:
                        th[x.name] = v
                else:
                    yield from step(rest, th)
            return
        if todo:
            raise TranslationError(f"unsafe body: cannot evaluate {', '.join(map(str, todo))}")
        if not any(facts.holds(n, theta) for n in neg):
            yield theta

    yield from step(todo, theta)


def _ground(a: Atom, theta) -> Atom:
    return Atom(a.pred, tuple(Const(_value(x, theta)) for x in a.args), a.neg)


def weak_cost_of_image(lp: LPProgram, image: TrajectoryImage) -> int:
    """Sum of the violation values of ``lp``'s weak constraints on ``image``.

    The image is closed under the program's facts and under the normal rules
    whose heads feed the weak constraints (the cost rules); every other
    literal must already be in the image.
    """
    facts = _Facts(image.literals)
    for r in lp.rules:
        if r.is_fact:
            facts.add(r.head[0])
    wanted = {a.pred for w in lp.weak_constraints for a in w.pos}
    feeders = [r for r in lp.rules if len(r.head) == 1 and r.head[0].pred in wanted and not r.is_fact]
    changed = True
    while changed:
        changed = False
        for r in feeders:
            for th in list(_match(r.pos, r.neg, facts, {}, image.order, image.int_bound)):
                changed |= facts.add(_ground(r.head[0], th))
    total = 0
    for w in lp.weak_constraints:
        names = sorted(_var_names(w.pos) - {"_"})
        seen = set()
        for th in _match(w.pos, w.neg, facts, {}, image.order, image.int_bound):
            key = tuple(th[n] for n in names)
            if key in seen:
                continue
            seen.add(key)
            v = _value(w.weight, th)
            if not isinstance(v, int) or isinstance(v, bool):
                raise TranslationError(f"weak constraint {w} has the non-integer weight {v!r}")
            total += v
    return total


# -- reading the emitted text back ------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(%[^\n]*)|(:-|:~|!=|<=|>=|[(),.:\[\]=<>+*-])|(#int|[A-Za-z_][A-Za-z0-9_]*)|(\d+))"
)


def _tokens(text: str) -> list[str]:
    out, i = [], 0
    text = text.rstrip()
    while i < len(text):
        m = _TOKEN.match(text, i)
        if not m or m.end() == i:
            raise TranslationError(f"unexpected character {text[i]!r} at offset {i}")
        i = m.end()
        if m.group(1) is None:
            out.append(m.group(2) or m.group(3) or m.group(4))
    return out


class _LPParser:
    def __init__(self, text: str):
        self.t = _tokens(text)
        self.i = 0

    def peek(self, k: int = 0) -> str | None:
        j = self.i + k
        return self.t[j] if j < len(self.t) else None

    def take(self, want: str | None = None) -> str:
        tok = self.peek()
        if tok is None or (want is not None and tok != want):
            raise TranslationError(f"expected {want or 'a token'}, found {tok!r}")
        self.i += 1
        return tok

    def term(self):
        tok = self.take()
        if tok.isdigit():
            return Const(int(tok))
        if tok[0].isupper() or tok[0] == "_":
            return Var(tok)
        if tok[0].islower():
            return Const(tok)
        raise TranslationError(f"expected a term, found {tok!r}")

    def literal(self, builtin: bool = True) -> Atom:
        if self.peek() == "#int":
            self.take()
            self.take("(")
            x = self.term()
            self.take(")")
            return Atom(INT_PRED, (x,))
        tok = self.peek()
        if tok == "-" or (tok and tok[0].islower() and not tok.isdigit()):
            neg = tok == "-"
            if neg:
                self.take()
            name = self.take()
            args = []
            if self.peek() == "(":
                self.take()
                args.append(self.term())
                while self.peek() == ",":
                    self.take()
                    args.append(self.term())
                self.take(")")
            if builtin and not neg and not args and self.peek() in COMPARISONS:
                return self._builtin(Const(name))
            return Atom(name, tuple(args), neg)
        return self._builtin(self.term())

    def _builtin(self, left) -> Atom:
        op = self.take()
        if op not in COMPARISONS:
            raise TranslationError(f"expected a comparison, found {op!r}")
        right = self.term()
        if op == "=" and self.peek() in ARITHMETIC:
            return Atom(self.take(), (left, right, self.term()))
        return Atom(op, (left, right))

    def body(self) -> tuple[tuple, tuple]:
        pos, neg = [], []
        while True:
            if self.peek() == "not":
                self.take()
                neg.append(self.literal())
            else:
                pos.append(self.literal())
            if self.peek() != ",":
                return tuple(pos), tuple(neg)
            self.take()

    def statement(self):
        if self.peek() == "minimize":
            self.take()
            self.take("[")
            elems = []
            while self.peek() != "]":
                if elems:
                    self.take(",")
                a = self.literal(False)
                self.take(":")
                cnd = self.literal(False)
                self.take("=")
                elems.append((a, cnd, self.term()))
            self.take("]")
            self.take(".")
            return Minimize(tuple(elems))
        if self.peek() == ":~":
            self.take()
            pos, neg = self.body()
            self.take(".")
            self.take("[")
            w = self.term()
            self.take(":")
            lvl = None if self.peek() == "]" else self.term()
            self.take("]")
            return WeakConstraint(pos, neg, w, lvl)
        head = []
        if self.peek() != ":-":
            head.append(self.literal())
            while self.peek() == "v":
                self.take()
                head.append(self.literal())
        pos = neg = ()
        if self.peek() == ":-":
            self.take()
            pos, neg = self.body()
        self.take(".")
        return LPRule(tuple(head), pos, neg)


def parse_lp(text: str) -> LPProgram:
    """Parse the output of :func:`translate_lpw` or :func:`translate_minimize`."""
    ps = _LPParser(text)
    stmts, mini = [], None
    while ps.peek() is not None:
        s = ps.statement()
        if isinstance(s, Minimize):
            if mini is not None:
                raise TranslationError("more than one minimize statement")
            mini = s
        else:
            stmts.append(s)
    return LPProgram(tuple(stmts), mini)
