"""Evaluation of the background knowledge to its well-founded model.

The join machinery in this module (``Relation``, ``Join``) is shared with
the grounder and the translator's cost evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .errors import BackgroundError, IntBoundExceeded, NonTotalModelError, UnsafeRuleError
from .kclang.ast import ARITHMETIC, COMPARISONS, INT_PRED, Atom, Const, DatalogRule, Var

Value = object  # int | str


def pred_key(at: Atom) -> str:
    return "-" + at.pred if at.neg else at.pred


class SymbolOrder:
    """Total order on constants used by the comparison built-ins.

    Integers compare numerically and precede symbols.  Symbols compare by
    rank (first occurrence in the program), unranked symbols come last in
    lexicographic order.
    """

    def __init__(self, symbols: Iterable[str] = ()):
        self.rank: dict[str, int] = {}
        for s in symbols:
            self.rank.setdefault(s, len(self.rank))

    def key(self, v) -> tuple:
        if isinstance(v, int):
            return (0, v, "")
        r = self.rank.get(v)
        return (1, len(self.rank) if r is None else r, v)

    def __eq__(self, other) -> bool:
        return isinstance(other, SymbolOrder) and self.rank == other.rank

    def __hash__(self) -> int:
        return hash(tuple(self.rank))


class ArithContext:
    """Integer bound handling for the arithmetic built-ins.

    ``bound=None`` evaluates arithmetic over unbounded naturals.  Otherwise a
    result above the bound makes the built-in false and is counted; with
    ``strict`` it raises :class:`IntBoundExceeded` instead.
    """

    def __init__(self, bound: int | None, strict: bool = False):
        self.bound = bound
        self.strict = strict
        self.truncations = 0

    def combine(self, op: str, b, c):
        if not isinstance(b, int) or not isinstance(c, int):
            return None
        r = b + c if op == "+" else b * c
        if self.bound is not None and r > self.bound:
            if self.strict:
                raise IntBoundExceeded(r, self.bound, f"{b} {op} {c}")
            self.truncations += 1
            return None
        return r


def eval_builtin(at: Atom, vals: Sequence, order: SymbolOrder, int_bound: int, arith: ArithContext) -> bool:
    p = at.pred
    if p == INT_PRED:
        x = vals[0]
        return isinstance(x, int) and 0 <= x <= int_bound
    if p in ARITHMETIC:
        r = arith.combine(p, vals[1], vals[2])
        return r is not None and r == vals[0]
    a, b = vals
    if p == "=":
        return a == b
    if p == "!=":
        return a != b
    ka, kb = order.key(a), order.key(b)
    if p == "<":
        return ka < kb
    if p == "<=":
        return ka <= kb
    if p == ">":
        return ka > kb
    return ka >= kb


class Relation:
    """A set of tuples with lazily built hash indexes on bound positions."""

    __slots__ = ("tuples", "indexes")

    def __init__(self, tuples: Iterable[tuple] = ()):
        self.tuples: set[tuple] = set(tuples)
        self.indexes: dict[tuple, dict] = {}

    def __len__(self) -> int:
        return len(self.tuples)

    def __contains__(self, t) -> bool:
        return t in self.tuples

    def add(self, t: tuple) -> bool:
        if t in self.tuples:
            return False
        self.tuples.add(t)
        for pos, idx in self.indexes.items():
            idx.setdefault(tuple(t[i] for i in pos), []).append(t)
        return True

    def lookup(self, positions: tuple, key: tuple):
        if not positions:
            return self.tuples
        idx = self.indexes.get(positions)
        if idx is None:
            idx = {}
            for t in self.tuples:
                idx.setdefault(tuple(t[i] for i in positions), []).append(t)
            self.indexes[positions] = idx
        return idx.get(key, ())


EMPTY = Relation()


# -- compiled joins --------------------------------------------------------

def _val(term, theta):
    return theta[term] if isinstance(term, Var) else term.value


class Join:
    """An evaluation plan for a conjunction of literals.

    ``gens`` are positive atoms matched against relations, ``nafs`` are
    default-negated atoms checked for absence, ``builtins`` are evaluated.
    The plan orders them greedily: ready filters first, then the generator
    with the most bound arguments.  ``first`` forces a generator to the
    front (used for semi-naive deltas).
    """

    def __init__(
        self,
        gens: Sequence[Atom],
        nafs: Sequence[Atom] = (),
        builtins: Sequence[Atom] = (),
        bound: Iterable[Var] = (),
        first: int | None = None,
    ):
        self.gens = list(gens)
        self.nafs = list(nafs)
        self.builtins = list(builtins)
        self.steps: list[tuple] = []
        b = set(bound)
        todo_g = list(range(len(self.gens)))
        todo_n = list(range(len(self.nafs)))
        todo_b = list(range(len(self.builtins)))
        if first is not None:
            self._add_gen(first, b)
            todo_g.remove(first)
        while todo_g or todo_n or todo_b:
            if self._flush_ready(todo_n, todo_b, b):
                continue
            if todo_g:
                best = max(todo_g, key=lambda i: (sum(1 for a in self.gens[i].args if not isinstance(a, Var) or a in b), -i))
                self._add_gen(best, b)
                todo_g.remove(best)
                continue
            ints = [i for i in todo_b if self.builtins[i].pred == INT_PRED]
            if ints:
                i = ints[0]
                x = self.builtins[i].args[0]
                self.steps.append(("int", x))
                b.add(x)
                todo_b.remove(i)
                continue
            left = [self.builtins[i] for i in todo_b] + [self.nafs[i] for i in todo_n]
            raise UnsafeRuleError("cannot bind variables of " + ", ".join(map(str, left)))
        self.bound_after = frozenset(b)

    def _add_gen(self, i: int, b: set) -> None:
        at = self.gens[i]
        key_pos, key_terms, outs, checks = [], [], [], []
        seen: dict[Var, int] = {}
        for k, a in enumerate(at.args):
            if not isinstance(a, Var) or a in b:
                key_pos.append(k)
                key_terms.append(a)
            elif a in seen:
                checks.append((seen[a], k))
            else:
                seen[a] = k
                outs.append((k, a))
        self.steps.append(("gen", i, tuple(key_pos), tuple(key_terms), tuple(outs), tuple(checks)))
        b.update(v for _, v in outs)

    def _flush_ready(self, todo_n: list, todo_b: list, b: set) -> bool:
        for i in list(todo_b):
            at = self.builtins[i]
            vs = set(at.variables())
            if vs <= b:
                self.steps.append(("test", at))
                todo_b.remove(i)
                return True
            if at.pred in ARITHMETIC:
                res, x, y = at.args
                if isinstance(res, Var) and res not in b and not ({x, y} & (vs - b)):
                    self.steps.append(("arith", at))
                    b.add(res)
                    todo_b.remove(i)
                    return True
            elif at.pred == "=":
                x, y = at.args
                if isinstance(x, Var) and x not in b and (not isinstance(y, Var) or y in b):
                    self.steps.append(("eq", x, y))
                    b.add(x)
                    todo_b.remove(i)
                    return True
                if isinstance(y, Var) and y not in b and (not isinstance(x, Var) or x in b):
                    self.steps.append(("eq", y, x))
                    b.add(y)
                    todo_b.remove(i)
                    return True
        for i in list(todo_n):
            if set(self.nafs[i].variables()) <= b:
                self.steps.append(("naf", i))
                todo_n.remove(i)
                return True
        return False

    def run(
        self,
        gen_rels: Sequence[Relation],
        naf_test: Callable[[int, tuple], bool],
        theta: dict,
        order: SymbolOrder,
        int_bound: int,
        arith: ArithContext,
        gen_override: Mapping[int, Iterable[tuple]] | None = None,
    ) -> Iterator[dict]:
        """Yield every extension of ``theta`` satisfying the conjunction.

        ``naf_test(i, tuple)`` must return True when the i-th default-negated
        atom instance is *absent* (so the literal holds).
        """
        steps = self.steps
        n = len(steps)

        def rec(k: int, th: dict):
            if k == n:
                yield th
                return
            st = steps[k]
            op = st[0]
            if op == "gen":
                _, i, key_pos, key_terms, outs, checks = st
                key = tuple(_val(t, th) for t in key_terms)
                if gen_override is not None and i in gen_override:
                    cands = [t for t in gen_override[i] if all(t[p] == v for p, v in zip(key_pos, key))]
                else:
                    cands = gen_rels[i].lookup(key_pos, key)
                if not outs and not checks:
                    if cands:
                        yield from rec(k + 1, th)
                    return
                for t in cands:
                    if checks and any(t[a] != t[c] for a, c in checks):
                        continue
                    th2 = dict(th)
                    for p, v in outs:
                        th2[v] = t[p]
                    yield from rec(k + 1, th2)
            elif op == "test":
                at = st[1]
                if eval_builtin(at, [_val(a, th) for a in at.args], order, int_bound, arith):
                    yield from rec(k + 1, th)
            elif op == "arith":
                at = st[1]
                r = arith.combine(at.pred, _val(at.args[1], th), _val(at.args[2], th))
                if r is not None:
                    th2 = dict(th)
                    th2[at.args[0]] = r
                    yield from rec(k + 1, th2)
            elif op == "eq":
                th2 = dict(th)
                th2[st[1]] = _val(st[2], th)
                yield from rec(k + 1, th2)
            elif op == "int":
                for v in range(int_bound + 1):
                    th2 = dict(th)
                    th2[st[1]] = v
                    yield from rec(k + 1, th2)
            else:  # naf
                i = st[1]
                at = self.nafs[i]
                if naf_test(i, tuple(_val(a, th) for a in at.args)):
                    yield from rec(k + 1, th)

        yield from rec(0, dict(theta))


def ground_args(at: Atom, theta: Mapping) -> tuple:
    return tuple(theta[a] if isinstance(a, Var) else a.value for a in at.args)


# -- the model -------------------------------------------------------------

@dataclass(frozen=True)
class BackgroundModel:
    """The (total) well-founded model M of the background program."""

    relations: Mapping[str, Relation]
    int_bound: int
    order: SymbolOrder = field(default_factory=SymbolOrder)
    truncations: int = 0

    def relation(self, key: str) -> Relation:
        return self.relations.get(key, EMPTY)

    def holds(self, at: Atom) -> bool:
        if not at.is_ground:
            raise ValueError(f"holds() needs a ground atom, got {at}")
        vals = [a.value for a in at.args]
        if at.is_builtin:
            return eval_builtin(at, vals, self.order, self.int_bound, ArithContext(self.int_bound))
        return tuple(vals) in self.relation(pred_key(at))

    def atoms(self) -> Iterator[Atom]:
        for key in sorted(self.relations):
            neg = key.startswith("-")
            pred = key[1:] if neg else key
            for t in sorted(self.relations[key].tuples, key=lambda t: [self.order.key(v) for v in t]):
                yield Atom(pred, tuple(Const(v) for v in t), neg)

    def __len__(self) -> int:
        return sum(len(r) for r in self.relations.values())


# -- evaluation ------------------------------------------------------------

@dataclass
class _CRule:
    rule: DatalogRule
    head: Atom
    hkey: str
    gens: list
    gkeys: list
    nafs: list
    nkeys: list
    builtins: list
    plans: dict = field(default_factory=dict)

    def plan(self, first: int | None) -> Join:
        p = self.plans.get(first)
        if p is None:
            try:
                p = Join(self.gens, self.nafs, self.builtins, first=first)
            except UnsafeRuleError as e:
                raise UnsafeRuleError(f"unsafe rule {self.rule}: {e}") from None
            missing = set(self.head.variables()) - p.bound_after
            if missing:
                raise UnsafeRuleError(f"unsafe rule {self.rule}: head variables not bound")
            self.plans[first] = p
        return p


def _compile(r: DatalogRule) -> _CRule:
    gens = [a for a in r.body_pos if not a.is_builtin]
    blts = [a for a in r.body_pos if a.is_builtin]
    return _CRule(
        r, r.head, pred_key(r.head), gens, [pred_key(a) for a in gens],
        list(r.body_neg), [pred_key(a) for a in r.body_neg], blts,
    )


def _sccs(nodes: list[str], edges: dict[str, set[str]]) -> list[list[str]]:
    """Tarjan's algorithm; returns components with dependencies first."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on: set[str] = set()
    stack: list[str] = []
    out: list[list[str]] = []
    counter = [0]

    def strong(v: str) -> None:
        # iterative to survive long dependency chains
        work = [(v, iter(sorted(edges.get(v, ()))))]
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        on.add(v)
        while work:
            u, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on.add(w)
                    work.append((w, iter(sorted(edges.get(w, ())))))
                    advanced = True
                    break
                if w in on:
                    low[u] = min(low[u], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[u])
            if low[u] == index[u]:
                comp = []
                while True:
                    w = stack.pop()
                    on.discard(w)
                    comp.append(w)
                    if w == u:
                        break
                out.append(sorted(comp))

    for v in nodes:
        if v not in index:
            strong(v)
    return out


class _Evaluator:
    def __init__(self, int_bound: int, order: SymbolOrder, arith: ArithContext):
        self.int_bound = int_bound
        self.order = order
        self.arith = arith

    def fixpoint(self, rules: list[_CRule], db: dict[str, Relation], comp: set[str], neg_of: Callable[[str], Relation]) -> None:
        """Semi-naive least fixpoint of ``rules`` into ``db``.

        Default negation is evaluated against ``neg_of(key)``.
        """

        def derive(r: _CRule, first: int | None, delta: Relation | None, sink: dict[str, set]) -> None:
            plan = r.plan(first)
            rels = [db.get(k, EMPTY) for k in r.gkeys]
            override = {first: delta.tuples} if first is not None else None
            nrels = [None if a.is_builtin else neg_of(k) for a, k in zip(r.nafs, r.nkeys)]

            def naf_ok(i: int, t: tuple) -> bool:
                rel = nrels[i]
                if rel is None:
                    return not eval_builtin(r.nafs[i], t, self.order, self.int_bound, self.arith)
                return t not in rel

            for th in plan.run(rels, naf_ok, {}, self.order, self.int_bound, self.arith, override):
                t = ground_args(r.head, th)
                if t not in db.get(r.hkey, EMPTY):
                    sink.setdefault(r.hkey, set()).add(t)

        new: dict[str, set] = {}
        for r in rules:
            derive(r, None, None, new)
        while new:
            delta: dict[str, Relation] = {}
            for k, ts in new.items():
                rel = db.setdefault(k, Relation())
                d = Relation()
                for t in ts:
                    if rel.add(t):
                        d.add(t)
                if d.tuples:
                    delta[k] = d
            new = {}
            if not delta:
                break
            for r in rules:
                for i, k in enumerate(r.gkeys):
                    if k in comp and k in delta:
                        derive(r, i, delta[k], new)


def evaluate_background(
    rules: Sequence[DatalogRule],
    int_bound: int,
    order: SymbolOrder | Iterable[str] | None = None,
    strict_arithmetic: bool = False,
) -> BackgroundModel:
    """Compute the well-founded model of ``rules``.

    Components without internal default negation get a semi-naive least
    fixpoint; the others are solved by the alternating fixpoint.  Raises
    :class:`NonTotalModelError` if some atom stays undefined.
    """
    if int_bound < 0:
        raise ValueError("int_bound must be non-negative")
    if order is None:
        seen: list[str] = []
        for r in rules:
            for at in (r.head, *r.body_pos, *r.body_neg):
                seen += [a.value for a in at.args if isinstance(a, Const) and isinstance(a.value, str)]
        order = SymbolOrder(seen)
    elif not isinstance(order, SymbolOrder):
        order = SymbolOrder(order)
    arith = ArithContext(int_bound, strict_arithmetic)
    ev = _Evaluator(int_bound, order, arith)
    crules = [_compile(r) for r in rules]
    for cr in crules:
        cr.plan(None)  # surfaces safety errors early

    by_head: dict[str, list[_CRule]] = {}
    edges: dict[str, set[str]] = {}
    neg_edges: set[tuple[str, str]] = set()
    nodes: list[str] = []
    for cr in crules:
        if cr.hkey not in by_head:
            nodes.append(cr.hkey)
        by_head.setdefault(cr.hkey, []).append(cr)
        e = edges.setdefault(cr.hkey, set())
        for k in cr.gkeys:
            e.add(k)
        for k in cr.nkeys:
            e.add(k)
            neg_edges.add((cr.hkey, k))
    db: dict[str, Relation] = {}
    for comp in _sccs(nodes, edges):
        cset = set(comp)
        rules_c = [r for k in comp for r in by_head.get(k, ())]
        if not rules_c:
            continue
        internal_neg = any((h, k) in neg_edges for h in comp for k in comp)
        if not internal_neg:
            ev.fixpoint(rules_c, db, cset, lambda k: db.get(k, EMPTY))
            continue

        def gamma(j: dict[str, Relation]) -> dict[str, Relation]:
            local = dict(db)
            for k in comp:
                local[k] = Relation()
            ev.fixpoint(rules_c, local, cset, lambda k: j.get(k, EMPTY) if k in cset else db.get(k, EMPTY))
            return {k: local[k] for k in comp}

        under: dict[str, Relation] = {k: Relation() for k in comp}
        while True:
            over = gamma(under)
            under2 = gamma(over)
            if all(under2[k].tuples == under[k].tuples for k in comp):
                break
            under = under2
        undefined = [
            Atom(k.lstrip("-"), tuple(Const(v) for v in t), k.startswith("-"))
            for k in comp
            for t in over[k].tuples - under[k].tuples
        ]
        if undefined:
            raise NonTotalModelError(undefined)
        for k in comp:
            db[k] = under[k]

    for k in list(db):
        if not k.startswith("-") and ("-" + k) in db:
            clash = db[k].tuples & db["-" + k].tuples
            if clash:
                t = sorted(clash, key=str)[0]
                raise BackgroundError(f"background model is inconsistent: both {k}{t} and -{k}{t} hold")
    rels = {k: v for k, v in db.items() if v.tuples}
    return BackgroundModel(rels, int_bound, order, arith.truncations)


def holds(m: BackgroundModel, at: Atom) -> bool:
    return m.holds(at)
