"""Program rewritings for shortest and cheapest planning.

All three rewritings add a fluent ``gr`` ("goal reached") and an action
``finish`` that may fire once the goal holds.  ``finish`` costs its time
step, so an optimal plan of length ``i+1`` finishes as early as possible:

* beta: original program without costs; optimal plans are shortest plans.
* gamma: original costs are scaled by ``i+1`` so that cost dominates and
  the finish time only breaks ties (cheapest, then shortest).
* delta: the finish cost is scaled by a factor ``F`` exceeding any total
  action cost, so length dominates (shortest, then cheapest).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .background import SymbolOrder, evaluate_background
from .errors import RewriteError
from .kclang.ast import TIME, ActionDecl, Atom, CausationRule, Const, ExecCondition, FluentDecl, Macro, Program, Query, Var

KINDS = ("beta", "gamma", "delta")
RESERVED_PREFIX = "kc_"


@dataclass(frozen=True)
class Decoded:
    steps: int  # length of the plan for the original problem
    cost: int  # its cost under the original action costs
    finish_time: int


@dataclass(frozen=True)
class RewriteResult:
    program: Program
    kind: str
    horizon: int  # plan length of the rewritten query, i + 1
    factor: int  # i + 1 for gamma, F for delta, 1 for beta
    gr: str = "gr"
    finish: str = "finish"
    notes: tuple = field(default=())

    def finish_time(self, steps: Iterable[Iterable]) -> int | None:
        """1-based step at which ``finish`` occurs in a plan, if any."""
        for j, acts in enumerate(steps, 1):
            if any(getattr(a, "pred", None) == self.finish for a in acts):
                return j
        return None

    def decode(self, cost: int, finish_time: int | None = None) -> Decoded:
        """Recover (steps, original cost) from an optimal rewritten cost."""
        k = self.factor
        if self.kind == "beta":
            ft = cost if finish_time is None else finish_time
            return Decoded(ft - 1, 0, ft)
        if self.kind == "gamma":
            if finish_time is None:
                finish_time = cost % k or k
            moves, rem = divmod(cost - finish_time, k)
            if rem:
                raise RewriteError(f"cost {cost} is not of the form {k} * c + t with finish time {finish_time}")
            return Decoded(finish_time - 1, moves, finish_time)
        if finish_time is None:
            finish_time = cost // k
        moves = cost - finish_time * k
        if not 0 <= moves < k:
            raise RewriteError(f"cost {cost} is not of the form t * {k} + c with finish time {finish_time}")
        return Decoded(finish_time - 1, moves, finish_time)

    def required_int_bound(self, int_bound: int) -> int:
        """Integer bound a DLV-style system would need for this program.

        That is the largest cost value or time step that arithmetic has to
        produce at horizon ``i+1``; this implementation evaluates cost
        arithmetic without a bound, so the number is informational.
        """
        from .grounder import ground

        p = self.program
        m = evaluate_background(p.background, int_bound, SymbolOrder(p.constant_order))
        gd = ground(p, m, self.horizon)
        top = max(gd.cost_table.values(), default=0)
        return max(top, self.horizon, int_bound)


def _predicates(p: Program) -> set[str]:
    names = {d.name for d in p.fluent_decls} | {d.name for d in p.action_decls}
    for r in p.background:
        for at in (r.head, *r.body_pos, *r.body_neg):
            names.add(at.pred)
    for d in (*p.fluent_decls, *p.action_decls):
        names.update(a.pred for a in d.requires)
    for d in p.action_decls:
        names.update(a.pred for a in d.where)
    for s in p.statements():
        names.update(a.pred for a in s.atoms())
    return names


def _fresh(name: str, taken: set[str], on_clash: str) -> str:
    if name not in taken:
        return name
    if on_clash != "rename":
        raise RewriteError(f"the program already uses the symbol {name!r}; pass on_clash='rename' to use a fresh name")
    cand = RESERVED_PREFIX + name
    n = 1
    while cand in taken:
        cand = f"{RESERVED_PREFIX}{name}{n}"
        n += 1
    return cand


def _fresh_var(taken: Iterable[Var], base: str = "C") -> Var:
    names = {v.name for v in taken}
    if base not in names:
        return Var(base)
    n = 1
    while f"{base}{n}" in names:
        n += 1
    return Var(f"{base}{n}")


def _add_not_gr(s, gr: Atom):
    if isinstance(s, ExecCondition):
        return ExecCondition(s.action, s.pre_pos, (*s.pre_neg, gr))
    if isinstance(s, CausationRule):
        return CausationRule(s.head, s.post_pos, (*s.post_neg, gr), s.pre_pos, s.pre_neg, s.scope)
    if isinstance(s, Macro) and s.kind != "nonexecutable":
        return Macro(s.kind, s.head, s.post_pos, (*s.post_neg, gr), s.pre_pos, s.pre_neg, s.scope)
    return s


def _beta_core(p: Program, i: int, on_clash: str, finish_cost, finish_where: tuple = ()) -> tuple[Program, str, str]:
    if i < 0:
        raise RewriteError("the horizon must be non-negative")
    if p.query is None:
        raise RewriteError("the program has no goal to rewrite")
    taken = _predicates(p)
    gr_name = _fresh("gr", taken, on_clash)
    fin_name = _fresh("finish", taken | {gr_name}, on_clash)
    gr = Atom(gr_name)
    fin = Atom(fin_name)
    always = [_add_not_gr(s, gr) for s in p.always]
    q = p.query
    always.append(ExecCondition(fin, q.goal_pos, (*q.goal_neg, gr)))
    always.append(CausationRule(gr, pre_pos=(fin,)))
    always.append(CausationRule(gr, pre_pos=(gr,)))
    for d in p.action_decls:
        always.append(Macro("nonexecutable", d.atom, pre_pos=(fin,)))
    out = p.replace(
        fluent_decls=(*p.fluent_decls, FluentDecl(gr_name)),
        action_decls=(*p.action_decls, ActionDecl(fin_name, cost=finish_cost, where=finish_where)),
        always=tuple(always),
        query=Query((gr,), (), i + 1),
    )
    return out, gr_name, fin_name


def rewrite_beta(p: Program, i: int, *, on_clash: str = "error") -> RewriteResult:
    """Shortest plans up to length ``i`` for a program without costs."""
    costed = [d.name for d in p.action_decls if d.cost is not None]
    if costed:
        raise RewriteError(
            f"the beta rewriting expects no action costs, but {costed[0]} has one; use gamma or delta instead"
        )
    out, gr, fin = _beta_core(p, i, on_clash, TIME)
    return RewriteResult(out, "beta", i + 1, 1, gr, fin)


def rewrite_gamma(p: Program, i: int, *, on_clash: str = "error") -> RewriteResult:
    """Cheapest plans up to length ``i``, shortest among those."""
    k = i + 1
    decls = []
    for d in p.action_decls:
        if d.cost is None:
            decls.append(d)
            continue
        used = set(d.params)
        for a in (*d.requires, *d.where):
            used.update(a.variables())
        if isinstance(d.cost, Var):
            used.add(d.cost)
        c = _fresh_var(used)
        eq = Atom("*", (c, Const(k), d.cost))
        decls.append(ActionDecl(d.name, d.params, d.requires, c, (eq, *d.where)))
    out, gr, fin = _beta_core(p.replace(action_decls=tuple(decls)), i, on_clash, TIME)
    return RewriteResult(out, "gamma", k, k, gr, fin)


def cost_sum_bound(p: Program, horizon: int, int_bound: int) -> int:
    """Sum of the costs of all legal action instances over steps 1..horizon."""
    from .grounder import ground

    m = evaluate_background(p.background, int_bound, SymbolOrder(p.constant_order))
    gd = ground(p, m, horizon)
    return sum(gd.action_cost(a, t) for a in gd.legal_actions for t in range(1, horizon + 1))


def rewrite_delta(
    p: Program,
    i: int,
    factor: int | None = None,
    *,
    int_bound: int = 20,
    on_clash: str = "error",
    allow_tight_factor: bool = False,
) -> RewriteResult:
    """Shortest plans up to length ``i``, cheapest among those.

    ``factor`` defaults to one more than the total cost of every legal
    action instance at every step, which always separates lengths.  A
    smaller domain-specific factor is accepted only with
    ``allow_tight_factor``; the caller then vouches that no plan's action
    costs reach it.
    """
    safe = cost_sum_bound(p, i + 1, int_bound) + 1
    if factor is None:
        factor = safe
    elif factor < 1:
        raise RewriteError("the delta factor must be positive")
    elif factor < safe and not allow_tight_factor:
        raise RewriteError(
            f"factor {factor} is below the safe bound {safe} (total cost of all action instances "
            f"over {i + 1} steps, plus one); pass allow_tight_factor=True if a smaller factor is known to be sound"
        )
    c = Var("C")
    out, gr, fin = _beta_core(p, i, on_clash, c, (Atom("*", (c, TIME, Const(factor))),))
    notes = () if factor >= safe else (f"factor {factor} is below the safe bound {safe}",)
    return RewriteResult(out, "delta", i + 1, factor, gr, fin, notes)


def rewrite(p: Program, kind: str, i: int, **kw) -> RewriteResult:
    if kind == "beta":
        return rewrite_beta(p, i, **kw)
    if kind == "gamma":
        return rewrite_gamma(p, i, **kw)
    if kind == "delta":
        return rewrite_delta(p, i, **kw)
    raise RewriteError(f"unknown rewriting {kind!r}; expected one of {', '.join(KINDS)}")
