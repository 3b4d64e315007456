"""Plan search: optimistic, admissible, optimal and secure planning.

The default search is A* over ``(step, node)`` pairs, where a node is a
state (optimistic planning) or the set of states the plan may have led to
(secure planning).  The heuristic is a per-goal lower bound on the cost of
the cheapest rule that can still make each open goal literal true; it is
admissible and consistent, so the reported optimum is exact.  Every
equal-cost parent of a node is kept, which lets all optimal plans be read
off the resulting graph.
"""

from __future__ import annotations

import heapq
import itertools
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from .errors import KcError, NoPlanError, SecurityCheckInconclusive
from .grounder import GAtom, GroundDomain
from .kclang.ast import Query
from .transition import Transition, TransitionSystem

INF = float("inf")
DEFAULT_STATE_CAP = 100_000
STRATEGIES = ("astar", "ucs", "dfs")


@dataclass(frozen=True)
class Plan:
    """A sequence of action sets with the cost of each action at its step."""

    steps: tuple  # tuple of tuples of GAtom, each step sorted
    costs: tuple  # parallel tuple of tuples of int

    @property
    def cost(self) -> int:
        return sum(sum(c) for c in self.costs)

    @property
    def length(self) -> int:
        return len(self.steps)

    def action_sets(self) -> list[frozenset]:
        return [frozenset(s) for s in self.steps]

    def format(self) -> str:
        parts = []
        for acts, cs in zip(self.steps, self.costs):
            parts.append(", ".join(f"{a}:{c}" if c else str(a) for a, c in zip(acts, cs)))
        return f"PLAN: {'; '.join(parts)} COST: {self.cost}"

    def __str__(self) -> str:
        return self.format()

    @classmethod
    def parse(cls, line: str) -> "Plan":
        """Read back a line written by :meth:`format`; spacing around ``:`` is free.

        A line without actions reads as the empty plan, although a plan of
        one empty step prints the same way.
        """
        m = _PLAN_LINE.match(line.strip())
        if not m:
            raise ValueError(f"not a plan line: {line!r}")
        steps, costs = [], []
        for part in _split_top(m.group(1), ";"):
            acts, cs = [], []
            for item in _split_top(part, ","):
                if not item:
                    continue
                am = _PLAN_ACTION.fullmatch(item)
                if not am:
                    raise ValueError(f"malformed action {item!r} in plan line")
                args = tuple(int(x) if x.isdigit() else x for x in _split_top(am.group(2) or "", ",") if x)
                acts.append(GAtom(am.group(1), args))
                cs.append(int(am.group(3) or 0))
            steps.append(tuple(acts))
            costs.append(tuple(cs))
        if steps == [()] and not m.group(1).strip():
            steps, costs = [], []
        plan = cls(tuple(steps), tuple(costs))
        if plan.cost != int(m.group(2)):
            raise ValueError(f"plan line states cost {m.group(2)} but its actions sum to {plan.cost}")
        return plan


_PLAN_LINE = re.compile(r"PLAN\s*:(.*?)\s*COST\s*:\s*(\d+)$", re.S)
_PLAN_ACTION = re.compile(r"(\w+)(?:\((.*)\))?(?:\s*:\s*(\d+))?")


def _split_top(text: str, sep: str) -> list[str]:
    """Split at ``sep`` outside parentheses, stripping each piece."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == sep and depth == 0:
            out.append("".join(cur).strip())
            cur = []
            continue
        depth += (ch == "(") - (ch == ")")
        cur.append(ch)
    out.append("".join(cur).strip())
    return out


@dataclass(frozen=True)
class Trajectory:
    initial: frozenset
    transitions: tuple  # of Transition

    @property
    def states(self) -> list[frozenset]:
        return [self.initial] + [t.target for t in self.transitions]

    @property
    def final(self) -> frozenset:
        return self.transitions[-1].target if self.transitions else self.initial


@dataclass(frozen=True)
class PlanVerdict:
    plan: Plan
    witness: Trajectory
    secure: bool | None = None

    @property
    def cost(self) -> int:
        return self.plan.cost


# -- helpers -----------------------------------------------------------------


def plan_cost(gd: GroundDomain, steps: Sequence[Iterable[GAtom]]) -> int:
    """Sum over steps j (from 1) of the costs of the actions at time j."""
    return sum(gd.action_cost(a, j) for j, acts in enumerate(steps, 1) for a in acts)


def _query(gd: GroundDomain, q: Query | None) -> Query:
    q = q or gd.program.query
    if q is None:
        raise KcError("the program has no goal")
    if q.plan_length is None:
        raise KcError("the query has no plan length")
    return q


class _Problem:
    """Goal, costs and heuristic for one query over a transition system."""

    def __init__(self, gd: GroundDomain, q: Query, use_h: bool = True):
        self.gd = gd
        self.ts: TransitionSystem = gd.system
        ts = self.ts
        self.l = q.plan_length
        self.reachable = True
        gp = []
        for at in q.goal_pos:
            x = ts.id_of.get(GAtom.from_atom(at))
            if x is None:
                self.reachable = False
            else:
                gp.append(x)
        self.goal_pos = tuple(gp)
        self.goal_neg = tuple(x for x in (ts.id_of.get(GAtom.from_atom(a)) for a in q.goal_neg) if x is not None)
        self._cost: dict = {}
        self.use_h = use_h
        self._hcache: dict = {}
        self._heur = _Heuristic(self) if use_h else None

    def goal(self, s: frozenset) -> bool:
        return all(x in s for x in self.goal_pos) and not any(x in s for x in self.goal_neg)

    def cost(self, a: frozenset, j: int) -> int:
        k = (a, j)
        v = self._cost.get(k)
        if v is None:
            lits = self.ts.lits
            v = self._cost[k] = sum(self.gd.action_cost(lits[x], j) for x in a)
        return v

    def h(self, j: int, s: frozenset) -> float:
        if j == self.l:
            return 0 if self.goal(s) else INF
        if not self.use_h:
            return 0
        k = (j, s)
        v = self._hcache.get(k)
        if v is None:
            v = self._hcache[k] = self._heur.node(j, s)
        return v

    def h_edge(self, j: int, s: frozenset, a: frozenset) -> float:
        if not self.use_h:
            return 0
        return self._heur.edge(j, s, a)


class _Heuristic:
    """Admissible, consistent lower bound on the remaining plan cost.

    For a literal ``g`` an achiever is a rule with head ``g`` that does not
    already need ``g``; making ``g`` true at step ``k`` costs at least the
    step-``k`` cost of the achiever's actions.  Goals whose achievers share
    no action instance are grouped apart and their bounds add up; within a
    group the maximum is taken.  For goals whose achievers have necessary
    fluent preconditions (including those common to every executability
    condition of their actions) the bound is regressed one step further.
    """

    def __init__(self, pb: _Problem):
        ts, l = pb.ts, pb.l
        nf = ts.nflu
        self.pb, self.l = pb, l
        nec = {}
        for x, conds in ts.execs.items():
            common = None
            for fp, _, _, _ in conds:
                common = set(fp) if common is None else common & set(fp)
            nec[x] = frozenset(common or ())
        ach: dict[int, list] = {}
        for h, p, _, pp, _ in ts.dyn:
            if h < 0 or h in p or h in pp:
                continue
            acts = frozenset(x for x in pp if x >= nf)
            if any(x not in nec for x in acts):
                continue  # some action is never executable
            need = frozenset(x for x in pp if x < nf).union(*(nec[x] for x in acts))
            ach.setdefault(h, []).append((acts, need))
        for h, p, _ in ts.static_rules:
            if h >= 0 and h not in p:
                ach.setdefault(h, []).append((frozenset(), frozenset()))
        goals = pb.goal_pos
        lits = set(goals)
        for g in goals:
            for _, need in ach.get(g, ()):
                lits |= need
        self.ach = {x: ach.get(x, []) for x in lits}
        # lb[x][j][t]: cheapest achiever of x over steps j+1..t
        self.lb: dict[int, list] = {}
        for x in lits:
            per_k = [INF] + [min((pb.cost(acts, k) for acts, _ in self.ach[x]), default=INF) for k in range(1, l + 1)]
            rows = []
            for j in range(l + 1):
                row = [INF] * (l + 1)
                best = INF
                for t in range(j + 1, l + 1):
                    best = min(best, per_k[t])
                    row[t] = best
                rows.append(row)
            self.lb[x] = rows
        parent: dict[int, int] = {x: x for x in lits}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        owner: dict[int, int] = {}
        for x in sorted(lits):
            for acts, _ in self.ach[x]:
                for a in acts:
                    if a in owner:
                        parent[find(x)] = find(owner[a])
                    else:
                        owner[a] = x
        self.comp = {x: find(x) for x in lits}
        self.reg_goals = [
            (g, [(acts, sorted(need)) for acts, need in self.ach[g]])
            for g in goals
            if any(need for _, need in self.ach[g])
        ]

    def _group_sum(self, vals: Iterable[tuple]) -> float:
        best: dict[int, float] = {}
        for x, v in vals:
            c = self.comp[x]
            if v > best.get(c, -1):
                best[c] = v
        return sum(best.values())

    def node(self, j: int, s: frozenset) -> float:
        l, lb = self.l, self.lb
        v = self._group_sum((g, lb[g][j][l]) for g in self.pb.goal_pos if g not in s)
        if v == INF:
            return INF
        cost = self.pb.cost
        for g, achs in self.reg_goals:
            if g in s:
                continue
            hg = INF
            for acts, need in achs:
                open_ = [x for x in need if x not in s]
                for k in range(j + 1, l + 1):
                    if open_ and k - 1 <= j:
                        continue
                    r = cost(acts, k) + self._group_sum((x, lb[x][j][k - 1]) for x in open_)
                    if r < hg:
                        hg = r
            if hg > v:
                v = hg
                if v == INF:
                    return INF
        return v

    def edge(self, j: int, s: frozenset, a: frozenset) -> float:
        """Lower bound valid for every successor reached by ``a`` from ``s``."""
        l, lb, ach = self.l, self.lb, self.ach

        def done(x: int) -> bool:
            return any(acts <= a for acts, _ in ach[x])

        v = self._group_sum((g, 0 if done(g) else lb[g][j + 1][l]) for g in self.pb.goal_pos if g not in s)
        if v == INF:
            return INF
        cost = self.pb.cost
        for g, achs in self.reg_goals:
            if g in s or done(g):
                continue
            hg = INF
            for acts, need in achs:
                open_ = [x for x in need if x not in s]
                for k in range(j + 2, l + 1):
                    r = cost(acts, k) + self._group_sum(
                        (x, 0 if done(x) else lb[x][j + 1][k - 1]) for x in open_
                    )
                    if r < hg:
                        hg = r
            if hg > v:
                v = hg
                if v == INF:
                    return INF
        return v


class _Optimistic:
    """Nodes are single states."""

    def __init__(self, pb: _Problem):
        self.pb = pb
        self.ts = pb.ts

    def starts(self) -> list:
        return list(self.ts.initial_states())

    def options(self, n: frozenset):
        return self.ts.executable_sets(n)

    def succs(self, n: frozenset, a: frozenset) -> list:
        return list(self.ts.successors(n, a))

    def goal(self, n) -> bool:
        return self.pb.goal(n)

    def h(self, j, n) -> float:
        return self.pb.h(j, n)

    def h_edge(self, j, n, a) -> float:
        return self.pb.h_edge(j, n, a)

    def key(self, n) -> tuple:
        return tuple(sorted(n))


class _Secure:
    """Nodes are sets of states; an edge needs every member to progress."""

    def __init__(self, pb: _Problem, state_cap: int):
        self.pb = pb
        self.ts = pb.ts
        self.cap = state_cap

    def starts(self) -> list:
        init = self.ts.initial_states()
        return [frozenset(init)] if init else []

    def options(self, n: frozenset):
        members = sorted(n, key=lambda s: tuple(sorted(s)))
        first = self.ts.executable_sets(members[0])
        rest = [set(self.ts.executable_sets(s)) for s in members[1:]]
        return [a for a in first if all(a in r for r in rest)]

    def succs(self, n: frozenset, a: frozenset) -> list:
        out: set = set()
        for s in n:
            nxt = self.ts.successors(s, a)
            if not nxt:
                return []
            out.update(nxt)
        if len(out) > self.cap:
            raise SecurityCheckInconclusive(self.cap)
        return [frozenset(out)]

    def goal(self, n) -> bool:
        return all(self.pb.goal(s) for s in n)

    def h(self, j, n) -> float:
        return max(self.pb.h(j, s) for s in n)

    def h_edge(self, j, n, a) -> float:
        return max(self.pb.h_edge(j, s, a) for s in n)

    def key(self, n) -> tuple:
        return tuple(sorted(tuple(sorted(s)) for s in n))


def _akey(a: frozenset) -> tuple:
    return tuple(sorted(a))


# -- optimal search ------------------------------------------------------------


def _astar(sem, pb: _Problem):
    """Return (cost*, children map, optimal start nodes) or None."""
    l = pb.l
    tick = itertools.count()
    heap: list = []
    best: dict = {}
    parents: dict = {}
    settled: set = set()
    for s in sem.starts():
        hv = sem.h(0, s)
        if hv == INF:
            continue
        best[(0, s)] = 0
        parents[(0, s)] = []
        heap.append((hv, next(tick), 0, 0, s, 0, None))
    heapq.heapify(heap)
    gstar = None
    goals = []
    while heap:
        key, _, kind, j, n, g, a = heapq.heappop(heap)
        if gstar is not None and key > gstar:
            break
        if kind == 0:
            nk = (j, n)
            if nk in settled:
                continue
            settled.add(nk)
            if j == l:
                if gstar is None:
                    gstar = g
                goals.append(nk)
                continue
            for a in sem.options(n):
                c = pb.cost(a, j + 1)
                he = sem.h_edge(j, n, a)
                if he == INF:
                    continue
                heapq.heappush(heap, (g + c + he, next(tick), 1, j, n, g + c, a))
        else:
            src = (j, n)
            for n2 in sem.succs(n, a):
                hv = sem.h(j + 1, n2)
                if hv == INF:
                    continue
                nk2 = (j + 1, n2)
                old = best.get(nk2)
                if old is None or g < old:
                    best[nk2] = g
                    parents[nk2] = [(src, a)]
                    heapq.heappush(heap, (g + hv, next(tick), 0, j + 1, n2, g, None))
                elif g == old:
                    parents[nk2].append((src, a))
    if gstar is None:
        return None
    children: dict = {}
    seen = set(goals)
    stack = list(goals)
    starts = []
    while stack:
        nk = stack.pop()
        if nk[0] == 0:
            starts.append(nk)
        for pk, a in parents.get(nk, ()):
            children.setdefault(pk, []).append((a, nk))
            if pk not in seen:
                seen.add(pk)
                stack.append(pk)
    return gstar, children, starts


def _dfs_exact(sem, pb: _Problem):
    """Memoised exact recursion; used to cross-check the A* search."""
    l = pb.l
    memo: dict = {}

    def best(j, n) -> float:
        k = (j, n)
        if k in memo:
            return memo[k][0]
        if j == l:
            v = 0 if sem.goal(n) else INF
            memo[k] = (v, [])
            return v
        v = INF
        edges = []
        for a in sem.options(n):
            c = pb.cost(a, j + 1)
            for n2 in sem.succs(n, a):
                r = c + best(j + 1, n2)
                if r < v:
                    v, edges = r, [(a, (j + 1, n2))]
                elif r == v and r < INF:
                    edges.append((a, (j + 1, n2)))
        memo[k] = (v, edges)
        return v

    vals = [(best(0, s), s) for s in sem.starts()]
    gstar = min((v for v, _ in vals), default=INF)
    if gstar == INF:
        return None
    starts = [(0, s) for v, s in vals if v == gstar]
    children = {k: e for k, (v, e) in memo.items() if e}
    return gstar, children, starts


def _plans_from_graph(children: dict, starts: list, l: int) -> Iterator[tuple]:
    """Distinct action-set sequences along start-to-layer-l paths, in order."""

    def rec(frontier: frozenset, prefix: list):
        if len(prefix) == l:
            yield tuple(prefix)
            return
        groups: dict = {}
        for nk in frontier:
            for a, nk2 in children.get(nk, ()):
                groups.setdefault(a, set()).add(nk2)
        for a in sorted(groups, key=_akey):
            prefix.append(a)
            yield from rec(frozenset(groups[a]), prefix)
            prefix.pop()

    yield from rec(frozenset(starts), [])


# -- bounded enumeration -------------------------------------------------------


def _plans_bounded(sem, pb: _Problem, bound: float) -> Iterator[tuple]:
    """Every plan of cost at most ``bound``, in lexicographic order."""
    l = pb.l

    def rec(j: int, frontier: list, g: int, prefix: list):
        if j == l:
            if any(sem.goal(n) for n in frontier):
                yield tuple(prefix), g
            return
        opts: dict = {}
        for n in frontier:
            for a in sem.options(n):
                nxt = sem.succs(n, a)
                if nxt:
                    opts.setdefault(a, []).extend(nxt)
        for a in sorted(opts, key=_akey):
            g2 = g + pb.cost(a, j + 1)
            nf = []
            seen = set()
            for n2 in opts[a]:
                if n2 in seen:
                    continue
                seen.add(n2)
                if g2 + sem.h(j + 1, n2) <= bound:
                    nf.append(n2)
            if nf:
                prefix.append(a)
                yield from rec(j + 1, nf, g2, prefix)
                prefix.pop()

    starts = [s for s in sem.starts() if sem.h(0, s) <= bound]
    if starts:
        yield from rec(0, starts, 0, [])


# -- verdict construction ------------------------------------------------------


def _make_plan(pb: _Problem, steps: Sequence[frozenset]) -> Plan:
    lits = pb.ts.lits
    acts, costs = [], []
    for j, a in enumerate(steps, 1):
        xs = sorted(a)
        acts.append(tuple(lits[x] for x in xs))
        costs.append(tuple(pb.gd.action_cost(lits[x], j) for x in xs))
    return Plan(tuple(acts), tuple(costs))


def _witness(pb: _Problem, steps: Sequence[frozenset]) -> tuple | None:
    """The lexicographically least trajectory of the plan reaching the goal."""
    ts = pb.ts
    layers = [set(ts.initial_states())]
    for a in steps:
        nxt: set = set()
        for s in layers[-1]:
            if ts.is_executable(s, a):
                nxt.update(ts.successors(s, a))
        layers.append(nxt)
    valid = [set() for _ in layers]
    valid[-1] = {s for s in layers[-1] if pb.goal(s)}
    for k in range(len(steps) - 1, -1, -1):
        a = steps[k]
        valid[k] = {
            s for s in layers[k] if ts.is_executable(s, a) and any(s2 in valid[k + 1] for s2 in ts.successors(s, a))
        }
    if not valid[0]:
        return None
    key = ts.key
    cur = min(valid[0], key=key)
    path = [cur]
    for k, a in enumerate(steps):
        cur = min((s2 for s2 in ts.successors(cur, a) if s2 in valid[k + 1]), key=key)
        path.append(cur)
    return tuple(path)


def _verdict(pb: _Problem, steps: Sequence[frozenset], secure: bool | None = None) -> PlanVerdict:
    ts = pb.ts
    path = _witness(pb, steps)
    if path is None:  # cannot happen for plans produced by the search
        raise KcError("internal error: plan without a witness trajectory")
    trans = tuple(
        Transition(ts.decode(path[k]), ts.decode(steps[k]), ts.decode(path[k + 1])) for k in range(len(steps))
    )
    return PlanVerdict(_make_plan(pb, steps), Trajectory(ts.decode(path[0]), trans), secure)


# -- public API ----------------------------------------------------------------


def _solve_optimal(sem, pb: _Problem, strategy: str):
    if strategy == "dfs":
        return _dfs_exact(sem, pb)
    if strategy in ("astar", "ucs"):
        return _astar(sem, pb)
    raise ValueError(f"unknown strategy {strategy!r}; expected one of {', '.join(STRATEGIES)}")


def find_optimal_plans(
    gd: GroundDomain,
    q: Query | None = None,
    mode: str = "all",
    *,
    strategy: str = "astar",
) -> tuple[int, Iterator[PlanVerdict]]:
    """Least plan cost and an iterator over the plans attaining it.

    ``mode='any'`` yields a single plan.  Raises :class:`NoPlanError` when
    no plan of the query's length exists.
    """
    q = _query(gd, q)
    pb = _Problem(gd, q, use_h=strategy == "astar")
    res = _solve_optimal(_Optimistic(pb), pb, strategy) if pb.reachable else None
    if res is None:
        raise NoPlanError(f"no plan of length {pb.l} exists", kind="plan")
    gstar, children, starts = res

    def it():
        for steps in _plans_from_graph(children, starts, pb.l):
            yield _verdict(pb, steps)
            if mode == "any":
                return

    return gstar, it()


def find_optimistic_plans(
    gd: GroundDomain,
    q: Query | None = None,
    mode: str = "any",
    cost_bound: int | None = None,
) -> Iterator[PlanVerdict]:
    """Optimistic plans, admissible ones when ``cost_bound`` is given.

    In ``any`` mode the plan returned is an optimal one.  ``all`` mode
    yields every plan in lexicographic order of its action sets.
    """
    q = _query(gd, q)
    if mode == "any":
        try:
            cost, it = find_optimal_plans(gd, q, "any")
        except NoPlanError:
            return
        if cost_bound is None or cost <= cost_bound:
            yield from it
        return
    pb = _Problem(gd, q)
    if not pb.reachable:
        return
    bound = INF if cost_bound is None else cost_bound
    for steps, _ in _plans_bounded(_Optimistic(pb), pb, bound):
        yield _verdict(pb, steps)


def is_secure(
    gd: GroundDomain,
    q: Query | None,
    steps: Sequence[Iterable[GAtom]],
    state_cap: int = DEFAULT_STATE_CAP,
) -> bool:
    """Whether the plan works from every legal initial state.

    Every reachable state must admit the next action set with at least one
    successor, and every state reached at the end must satisfy the goal.
    """
    q = _query(gd, q) if q is not None or gd.program.query is not None else None
    ts: TransitionSystem = gd.system
    try:
        enc = [ts.encode(a) for a in steps]
    except KeyError:
        return False
    belief = set(ts.initial_states())
    if not belief:
        return False
    for a in enc:
        nxt: set = set()
        for s in belief:
            if not ts.is_executable(s, a):
                return False
            succ = ts.successors(s, a)
            if not succ:
                return False
            nxt.update(succ)
        if len(nxt) > state_cap:
            raise SecurityCheckInconclusive(state_cap)
        belief = nxt
    pb = _Problem(gd, q.with_length(len(enc)) if q is not None else Query((), (), len(enc)), use_h=False)
    return all(pb.goal(s) for s in belief)


def find_optimal_secure_plans(
    gd: GroundDomain,
    q: Query | None = None,
    mode: str = "all",
    cost_bound: int | None = None,
    *,
    strategy: str = "astar",
    state_cap: int = DEFAULT_STATE_CAP,
) -> tuple[int, Iterator[PlanVerdict]]:
    """Least cost among secure plans, and the secure plans to report.

    Without a bound the iterator yields the optimal secure plans.  With a
    bound in ``all`` mode it yields every secure plan within the bound.
    ``strategy='filter'`` checks optimistic plans for security in order of
    increasing cost instead of searching over sets of states.
    """
    q = _query(gd, q)
    pb = _Problem(gd, q, use_h=strategy in ("astar", "filter"))
    if strategy == "filter":
        return _secure_by_filter(gd, q, pb, mode, cost_bound, state_cap)
    sem = _Secure(pb, state_cap)
    res = _solve_optimal(sem, pb, strategy) if pb.reachable else None
    if res is None:
        raise NoPlanError(f"no secure plan of length {pb.l} exists", kind="secure")
    gstar, children, starts = res
    if cost_bound is not None and gstar > cost_bound:
        raise NoPlanError(f"no secure plan of length {pb.l} with cost at most {cost_bound}", kind="admissible-secure")

    def it():
        if cost_bound is not None and mode == "all":
            for steps, _ in _plans_bounded(sem, pb, cost_bound):
                yield _verdict(pb, steps, True)
            return
        for steps in _plans_from_graph(children, starts, pb.l):
            yield _verdict(pb, steps, True)
            if mode == "any":
                return

    return gstar, it()


def _secure_by_filter(gd, q, pb, mode, cost_bound, state_cap):
    if not pb.reachable:
        raise NoPlanError(f"no secure plan of length {pb.l} exists", kind="secure")
    cands = sorted(
        _plans_bounded(_Optimistic(pb), pb, INF if cost_bound is None else cost_bound),
        key=lambda pc: (pc[1], [_akey(a) for a in pc[0]]),
    )
    lits = pb.ts.lits
    secure = [
        (steps, c)
        for steps, c in cands
        if is_secure(gd, q, [[lits[x] for x in a] for a in steps], state_cap)
    ]
    if not secure:
        raise NoPlanError(f"no secure plan of length {pb.l} exists", kind="secure")
    gstar = secure[0][1]
    if cost_bound is None or mode == "any":
        secure = [sc for sc in secure if sc[1] == gstar]
    secure.sort(key=lambda pc: [_akey(a) for a in pc[0]])

    def it():
        for steps, _ in secure:
            yield _verdict(pb, steps, True)
            if mode == "any":
                return

    return gstar, it()


def shortest_plan_length(
    gd: GroundDomain,
    q: Query | None = None,
    max_length: int = 20,
    *,
    secure: bool = False,
    min_length: int = 0,
) -> int | None:
    """Smallest plan length in ``[min_length, max_length]`` with a plan."""
    base = gd.program.query if q is None else q
    if base is None:
        raise KcError("the program has no goal")
    for l in range(min_length, max_length + 1):
        ql = base.with_length(l)
        try:
            if secure:
                find_optimal_secure_plans(gd, ql, "any")
            else:
                find_optimal_plans(gd, ql, "any")
        except NoPlanError:
            continue
        return l
    return None
