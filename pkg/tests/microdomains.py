"""Random propositional micro-domains and a brute-force planning oracle.

The oracle works from the ground rules alone.  It enumerates every
consistent set of fluent literals and every set of legal actions and
applies the definitions literally, so it shares no code with the
transition module or the planner.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

FLUENTS = ("f", "g", "h")
ACTIONS = ("a", "b", "c")


def _lit(rng: random.Random, names=FLUENTS) -> str:
    return ("-" if rng.random() < 0.3 else "") + rng.choice(names)


def _cond(rng: random.Random, names, n_max: int, naf: float = 0.2) -> list[str]:
    out = []
    for _ in range(rng.randint(0, n_max)):
        lit = _lit(rng, names)
        out.append(f"not {lit}" if rng.random() < naf else lit)
    return out


def random_domain(seed: int) -> str:
    """Program text over fluents f, g, h and actions a, b, c."""
    rng = random.Random(seed)
    acts = ACTIONS[: rng.randint(1, 3)]
    lines = ["fluents: " + " ".join(f"{f}." for f in FLUENTS)]
    decl = []
    for a in acts:
        r = rng.random()
        if r < 0.15:
            decl.append(f"{a}.")
        elif r < 0.3:
            decl.append(f"{a} costs time.")
        else:
            decl.append(f"{a} costs {rng.randint(0, 3)}.")
    lines.append("actions: " + " ".join(decl))

    ini = [f"caused {_lit(rng, (f,))}." for f in FLUENTS if rng.random() < 0.6]
    if rng.random() < 0.4:
        body = _cond(rng, FLUENTS, 1, naf=0.5)
        ini.append(f"caused {_lit(rng)}" + (f" if {', '.join(body)}" if body else "") + ".")
    if rng.random() < 0.2:
        ini.append(f"total {rng.choice(FLUENTS)}.")
    if ini:
        lines.append("initially: " + " ".join(ini))

    alw = []
    for a in acts:
        for _ in range(rng.choice((1, 1, 2))):
            pre = _cond(rng, FLUENTS, 1)
            alw.append(f"executable {a}" + (f" if {', '.join(pre)}" if pre else "") + ".")
    effects = []
    for _ in range(rng.randint(1, 4)):
        pre = [rng.choice(acts)] + _cond(rng, FLUENTS, 1)
        post = _cond(rng, FLUENTS, 1, naf=0.5) if rng.random() < 0.3 else []
        effects.append(_lit(rng))
        s = f"caused {effects[-1]}"
        if post:
            s += f" if {', '.join(post)}"
        alw.append(s + f" after {', '.join(pre)}.")
    for _ in range(rng.randint(0, 2)):
        post = [_lit(rng)] + _cond(rng, FLUENTS, 1, naf=0.4)
        alw.append(f"caused {_lit(rng)} if {', '.join(post)}.")
    if rng.random() < 0.2:
        pre = [rng.choice(acts)] + _cond(rng, FLUENTS, 1)
        alw.append(f"nonexecutable {rng.choice(acts)} if {', '.join(pre)}.")
    if rng.random() < 0.2:
        alw.append(f"total {rng.choice(FLUENTS)} after {rng.choice(acts)}.")
    if rng.random() < 0.25:
        alw.append(f"caused false if {_lit(rng)}, {_lit(rng)}.")
    inert = [f for f in FLUENTS if rng.random() < 0.7]
    alw += [f"inertial {f}." for f in inert] + [f"inertial -{f}." for f in inert if rng.random() < 0.7]
    if rng.random() < 0.3:
        alw.append("noConcurrency.")
    lines.append("always: " + " ".join(alw))

    goal = sorted({rng.choice(effects) if rng.random() < 0.8 else _lit(rng) for _ in range(rng.randint(1, 2))})
    if rng.random() < 0.15:
        goal.append(f"not {rng.choice(FLUENTS)}")
    length = 0 if rng.random() < 0.05 else rng.randint(1, 3)
    lines.append(f"goal: {', '.join(goal)}? ({length})")
    return "\n".join(lines) + "\n"


# -- the oracle -------------------------------------------------------------


def _holds(pos, neg, world) -> bool:
    return all(x in world for x in pos) and not any(x in world for x in neg)


def _closure(rules, s) -> tuple[frozenset, bool]:
    """Least model of the reduct of ``rules`` (pre already satisfied) w.r.t. ``s``."""
    red = [r for r in rules if not any(x in s for x in r.post_neg)]
    m: set = set()
    changed = True
    while changed:
        changed = False
        for r in red:
            if r.head is not None and r.head not in m and all(x in m for x in r.post_pos):
                m.add(r.head)
                changed = True
    violated = any(r.head is None and all(x in m for x in r.post_pos) for r in red)
    return frozenset(m), violated


def _consistent(s) -> bool:
    return not any(x.negate() in s for x in s)


@dataclass
class Oracle:
    gd: object

    def __post_init__(self):
        gd = self.gd
        self.lits = [x for f in gd.legal_fluents for x in (f, f.negate())]
        self.candidates = []
        for choice in itertools.product((None, False, True), repeat=len(gd.legal_fluents)):
            s = frozenset(f if c else f.negate() for f, c in zip(gd.legal_fluents, choice) if c is not None)
            self.candidates.append(s)
        self.action_sets = [
            frozenset(c) for k in range(len(gd.legal_actions) + 1) for c in itertools.combinations(gd.legal_actions, k)
        ]
        self.static = [r for r in gd.rules if not r.dynamic and r.scope == "always"]
        self.initially = [r for r in gd.rules if r.scope == "initially"]
        self.dynamic = [r for r in gd.rules if r.dynamic]
        self._succ: dict = {}

    def initial_states(self) -> list[frozenset]:
        out = []
        for s in self.candidates:
            m, bad = _closure(self.initially + self.static, s)
            if m == s and not bad:
                out.append(s)
        return out

    def executable(self, s, A) -> bool:
        world = s | A
        for a in A:
            if not any(e.action == a and _holds(e.pre_pos, e.pre_neg, world) for e in self.gd.execs):
                return False
        return True

    def successors(self, s, A) -> list[frozenset]:
        key = (s, A)
        if key in self._succ:
            return self._succ[key]
        out = []
        if self.executable(s, A):
            world = s | A
            active = [r for r in self.dynamic if _holds(r.pre_pos, r.pre_neg, world)]
            # a constraint with only an after-part fires whenever its pre holds
            if not any(r.head is None and not r.post_pos and not r.post_neg for r in active):
                rules = active + self.static
                for t in self.candidates:
                    m, bad = _closure(rules, t)
                    if m == t and not bad and _consistent(t):
                        out.append(t)
        self._succ[key] = out
        return out

    def goal(self, q, s) -> bool:
        from kcplan.grounder import GAtom

        pos = [GAtom.from_atom(a) for a in q.goal_pos]
        neg = [GAtom.from_atom(a) for a in q.goal_neg]
        return _holds(pos, neg, s)

    def cost(self, plan) -> int:
        return sum(self.gd.action_cost(a, j) for j, A in enumerate(plan, 1) for a in A)

    def plans(self, q) -> dict[tuple, int]:
        """Every optimistic plan of the query's length with its cost."""
        l = q.plan_length
        found: dict[tuple, int] = {}

        def walk(s, prefix):
            if len(prefix) == l:
                if self.goal(q, s):
                    found.setdefault(tuple(prefix), self.cost(prefix))
                return
            for A in self.action_sets:
                for t in self.successors(s, A):
                    walk(t, prefix + [A])

        for s0 in self.initial_states():
            walk(s0, [])
        return found

    def secure(self, q, plan) -> bool:
        belief = set(self.initial_states())
        if not belief:
            return False
        for A in plan:
            nxt: set = set()
            for s in belief:
                succ = self.successors(s, A)
                if not succ:
                    return False
                nxt.update(succ)
            belief = nxt
        return all(self.goal(q, s) for s in belief)
