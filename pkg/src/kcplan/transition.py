"""Knowledge-state transition semantics over a ground domain.

Internally literals are small integers: the k-th legal fluent ``f`` has id
``2k`` and ``-f`` has id ``2k+1``; actions follow after all fluent ids.  Ids
are assigned in declaration/argument order, so sorting ids sorts atoms.
The public functions at the bottom of the module speak ``GAtom`` sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .grounder import GAtom, GroundDomain, GroundExec, GroundRule

State = frozenset  # of GAtom (public) or of int ids (internal)


@dataclass(frozen=True)
class Transition:
    source: frozenset
    actions: frozenset
    target: frozenset


class _RuleSet:
    """A compiled normal program: ``head <- pos, not neg`` (head -1 = false)."""

    __slots__ = ("heads", "pos", "neg", "watch", "facts", "naf_atoms")

    def __init__(self, rules: Sequence[tuple]):
        self.heads = [r[0] for r in rules]
        self.pos = [r[1] for r in rules]
        self.neg = [r[2] for r in rules]
        watch: dict[int, list[int]] = {}
        facts = []
        naf: set[int] = set()
        for i, (_, p, n) in enumerate(rules):
            if not p:
                facts.append(i)
            for x in p:
                watch.setdefault(x, []).append(i)
            naf.update(n)
        self.watch = watch
        self.facts = facts
        self.naf_atoms = naf

    def least_model(self, naf_holds) -> tuple[set, bool]:
        """Least model with ``not x`` decided by ``naf_holds(x)``.

        Returns the model and whether a ``false``-headed rule fired.
        """
        heads, pos, neg, watch = self.heads, self.pos, self.neg, self.watch
        cnt = [len(p) for p in pos]
        model: set[int] = set()
        violated = False
        ready = list(self.facts)
        while ready:
            i = ready.pop()
            ok = True
            for x in neg[i]:
                if not naf_holds(x):
                    ok = False
                    break
            if not ok:
                continue
            h = heads[i]
            if h < 0:
                violated = True
            elif h not in model:
                model.add(h)
                for r in watch.get(h, ()):
                    cnt[r] -= 1
                    if not cnt[r]:
                        ready.append(r)
        return model, violated


def _simplify(rules: list) -> list:
    """Drop default literals whose truth value is already fixed.

    ``not x`` is true when no rule derives ``x`` and false when ``x`` is a
    fact, i.e. derived by a rule without positive body whose own default
    literals are all underivable.  One pass; the solver handles the rest.
    """
    if not any(r[2] for r in rules):
        return rules
    heads = {r[0] for r in rules}
    facts = set()
    for h, p, n in rules:
        if not p and h >= 0 and not any(x in heads for x in n):
            facts.add(h)
    out = []
    for h, p, n in rules:
        if n:
            if any(x in facts for x in n):
                continue
            n = tuple(x for x in n if x in heads)
        out.append((h, p, n))
    return out


def _consistent(lits: Iterable[int], nflu: int) -> bool:
    seen = lits if isinstance(lits, (set, frozenset)) else set(lits)
    for x in seen:
        if x < nflu and not x & 1 and (x | 1) in seen:
            return False
    return True


class TransitionSystem:
    """Integer-level engine with memoised successors and executable sets."""

    def __init__(self, gd: GroundDomain):
        self.gd = gd
        self.fluents = gd.legal_fluents
        self.actions = gd.legal_actions
        lits: list[GAtom] = []
        for f in self.fluents:
            lits += [f, f.negate()]
        self.nflu = len(lits)
        lits += list(self.actions)
        self.lits = lits
        self.id_of = {a: i for i, a in enumerate(lits)}
        self.no_concurrency = gd.no_concurrency

        init, static, dyn = [], [], []
        for r in gd.rules:
            if r.origin == "noConcurrency":
                continue  # enforced by the size cap on action sets
            c = self._compile_rule(r)
            if c is None:
                continue
            if r.scope == "initially":
                init.append(c)
            elif r.dynamic:
                dyn.append(c)
            else:
                static.append(c)
        self.static_rules = [(h, p, n) for h, p, n, _, _ in static]
        self.init_program = _RuleSet(_simplify([(h, p, n) for h, p, n, _, _ in init] + self.static_rules))
        self.dyn = dyn
        trig: dict[int, list[int]] = {}
        untriggered = []
        for i, (_, _, _, pp, _) in enumerate(dyn):
            if pp:
                # trigger on an action when possible: action sets are small
                t = max(pp)
                trig.setdefault(t, []).append(i)
            else:
                untriggered.append(i)
        self.trig = trig
        self.untriggered = untriggered
        # constraints on action combinations prune the set enumeration; those
        # without fluent conditions are folded into global conflict masks
        nf = self.nflu
        self.static_conf: dict[int, int] = {}
        self.static_big: list[int] = []
        self.static_ban: set[int] = set()
        self.ng_trig: dict[int, list] = {}
        self.ng_untrig: list = []
        for h, p, n, pp, pn in dyn:
            if h >= 0 or p or n or any(x < nf for x in pn) or any(x >= nf for x in pn):
                continue
            acts = frozenset(x for x in pp if x >= nf)
            fp = tuple(x for x in pp if x < nf)
            if fp:
                self.ng_trig.setdefault(fp[0], []).append((acts, fp, ()))
            elif not acts:
                continue
            elif len(acts) == 1:
                self.static_ban |= acts
            elif len(acts) == 2:
                x, y = sorted(acts)
                self.static_conf[x] = self.static_conf.get(x, 0) | 1 << (y - nf)
                self.static_conf[y] = self.static_conf.get(y, 0) | 1 << (x - nf)
            else:
                m = 0
                for x in acts:
                    m |= 1 << (x - nf)
                self.static_big.append(m)
        for h, p, n, pp, pn in dyn:
            if h < 0 and not p and not n and pn and all(x < nf for x in pn):
                acts = frozenset(x for x in pp if x >= nf)
                fp = tuple(x for x in pp if x < nf)
                if fp:
                    self.ng_trig.setdefault(fp[0], []).append((acts, fp, pn))
                else:
                    self.ng_untrig.append((acts, fp, pn))

        self.execs: dict[int, list[tuple]] = {}
        for e in gd.execs:
            a = self.id_of.get(e.action)
            if a is None:
                continue
            pp = [self.id_of.get(x) for x in e.pre_pos]
            if None in pp:
                continue  # precondition outside the legal instances never holds
            pn = [self.id_of[x] for x in e.pre_neg if x in self.id_of]
            self.execs.setdefault(a, []).append((
                tuple(x for x in pp if x < self.nflu),
                tuple(x for x in pn if x < self.nflu),
                tuple(x for x in pp if x >= self.nflu),
                tuple(x for x in pn if x >= self.nflu),
            ))
        self._succ_cache: dict = {}
        self._exec_cache: dict = {}
        self._initial: tuple | None = None

    def _compile_rule(self, r: GroundRule):
        ids = self.id_of
        h = -1 if r.head is None else ids.get(r.head)
        if h is None:
            return None
        # a positive literal outside the legal instances can never hold
        if any(x not in ids for x in (*r.post_pos, *r.pre_pos)):
            return None
        p = tuple(sorted({ids[x] for x in r.post_pos}))
        n = tuple(sorted({ids[x] for x in r.post_neg if x in ids}))
        pp = tuple(sorted({ids[x] for x in r.pre_pos}))
        pn = tuple(sorted({ids[x] for x in r.pre_neg if x in ids}))
        return (h, p, n, pp, pn)

    # -- conversions --------------------------------------------------------

    def encode(self, atoms: Iterable[GAtom]) -> frozenset:
        return frozenset(self.id_of[a] for a in atoms)

    def decode(self, ids: Iterable[int]) -> frozenset:
        return frozenset(self.lits[i] for i in ids)

    def key(self, ids: Iterable[int]) -> tuple:
        return tuple(sorted(ids))

    def is_state(self, s: frozenset) -> bool:
        return all(x < self.nflu for x in s) and _consistent(s, self.nflu)

    # -- stable model search ------------------------------------------------

    def _solve(self, prog: _RuleSet) -> list[frozenset]:
        nflu = self.nflu
        if not prog.naf_atoms:
            m, bad = prog.least_model(lambda x: True)
            return [] if bad or not _consistent(m, nflu) else [frozenset(m)]
        out: set[frozenset] = set()

        def search(assume: dict) -> None:
            lower: set = set()
            while True:
                upper, _ = prog.least_model(lambda x: not assume.get(x, x in lower))
                lower2, bad = prog.least_model(lambda x: not assume.get(x, x in upper))
                if bad or not _consistent(lower2, nflu):
                    return
                if lower2 == lower:
                    break
                lower = lower2
            for x, v in assume.items():
                if v and x not in upper or not v and x in lower:
                    return
            undecided = sorted(x for x in prog.naf_atoms if x not in assume and x in upper and x not in lower)
            if not undecided:
                m, bad = prog.least_model(lambda x: x not in lower)
                if not bad and m == lower:
                    out.add(frozenset(lower))
                return
            x = undecided[0]
            search({**assume, x: False})
            search({**assume, x: True})

        search({})
        return sorted(out, key=self.key)

    def initial_states(self) -> tuple:
        if self._initial is None:
            self._initial = tuple(self._solve(self.init_program))
        return self._initial

    def successors(self, s: frozenset, a: frozenset) -> tuple:
        ck = (s, a)
        hit = self._succ_cache.get(ck)
        if hit is not None:
            return hit
        known = s | a
        dyn = self.dyn
        rules = list(self.static_rules)
        cand = set(self.untriggered)
        for x in known:
            cand.update(self.trig.get(x, ()))
        for i in sorted(cand):
            h, p, n, pp, pn = dyn[i]
            if all(x in known for x in pp) and not any(x in known for x in pn):
                rules.append((h, p, n))
        res = tuple(self._solve(_RuleSet(_simplify(rules))))
        self._succ_cache[ck] = res
        return res

    def is_executable(self, s: frozenset, a: frozenset) -> bool:
        if self.no_concurrency and len(a) > 1:
            return False
        for x in a:
            for fp, fn, ap, an in self.execs.get(x, ()):
                if (
                    all(y in s for y in fp)
                    and not any(y in s for y in fn)
                    and all(y in a for y in ap)
                    and not any(y in a for y in an)
                ):
                    break
            else:
                return False
        return True

    def executable_sets(self, s: frozenset) -> tuple:
        """Every executable action set in ``s``, smallest first, ``()`` included."""
        hit = self._exec_cache.get(s)
        if hit is not None:
            return hit
        nf = self.nflu
        banned = set(self.static_ban)
        live = []
        for y in s:
            for acts, fp, fn in self.ng_trig.get(y, ()):
                if all(z in s for z in fp) and not any(z in s for z in fn):
                    if len(acts) == 1:
                        banned |= acts
                    else:
                        live.append(acts)
        for acts, fp, fn in self.ng_untrig:
            if not any(z in s for z in fn):
                if len(acts) == 1:
                    banned |= acts
                else:
                    live.append(acts)
        cands = []
        for x, conds in self.execs.items():
            if x in banned:
                continue
            ok = [
                (ap, an) for fp, fn, ap, an in conds if all(y in s for y in fp) and not any(y in s for y in fn)
            ]
            if ok:
                cands.append((x, ok))
        cands.sort()
        n = len(cands)
        pos = {x: k for k, (x, _) in enumerate(cands)}
        gmask = 0
        for x, _ in cands:
            gmask |= 1 << (x - nf)
        # conflicts as bitmasks over candidate positions
        conf = [0] * n
        big: list[list[int]] = [[] for _ in range(n)]
        sc = self.static_conf
        for k, (x, _) in enumerate(cands):
            m = sc.get(x, 0) & gmask
            while m:
                low = m & -m
                conf[k] |= 1 << pos[low.bit_length() - 1 + nf]
                m ^= low
        groups = list(live)
        for gm in self.static_big:
            if gm & gmask == gm:
                groups.append(frozenset(i + nf for i in range(gm.bit_length()) if gm >> i & 1))
        for acts in groups:
            ks = [pos.get(y) for y in acts]
            if None in ks:
                continue
            if len(ks) == 2:
                i, j = ks
                conf[i] |= 1 << j
                conf[j] |= 1 << i
            else:
                m = 0
                for k in ks:
                    m |= 1 << k
                big[max(ks)].append(m)
        free = 0
        for k, (_, conds) in enumerate(cands):
            if any(not ap and not an for ap, an in conds):
                free |= 1 << k
        cap = 1 if self.no_concurrency else n
        masks: list[int] = []

        def rec(k: int, m: int, size: int) -> None:
            if k == n:
                masks.append(m)
                return
            rec(k + 1, m, size)
            if size < cap and not conf[k] & m:
                m2 = m | 1 << k
                if not any(b & m2 == b for b in big[k]):
                    rec(k + 1, m2, size + 1)

        rec(0, 0, 0)
        out: list[frozenset] = []
        for m in masks:
            aset = frozenset(cands[k][0] for k in range(n) if m >> k & 1)
            if m & ~free:
                ok = all(
                    any(all(y in aset for y in ap) and not any(y in aset for y in an) for ap, an in cands[pos[x]][1])
                    for x in aset
                )
                if not ok:
                    continue
            out.append(aset)
        out.sort(key=lambda a: (len(a), sorted(a)))
        res = tuple(out)
        self._exec_cache[s] = res
        return res


# -- public API over GAtom sets ----------------------------------------------


def _sys(gd: GroundDomain) -> TransitionSystem:
    return gd.system


def reduct(gd: GroundDomain, t: Transition) -> list:
    """The positive ground program left by ``t``.

    A rule is dropped when a default-negated if-literal is in the target
    state or a default-negated after-literal is in the source state or the
    action set; surviving rules lose their default literals.
    """
    s, a, s2 = set(t.source), set(t.actions), set(t.target)
    before = s | a
    out: list = []
    for r in gd.rules:
        if r.origin == "noConcurrency":
            continue
        if any(x in s2 for x in r.post_neg) or any(x in before for x in r.pre_neg):
            continue
        out.append(GroundRule(r.head, r.post_pos, (), r.pre_pos, (), r.scope, r.origin, r.dynamic))
    for e in gd.execs:
        if any(x in before for x in e.pre_neg):
            continue
        out.append(GroundExec(e.action, e.pre_pos, ()))
    return out


def legal_initial_states(gd: GroundDomain) -> list[frozenset]:
    ts = _sys(gd)
    return [ts.decode(s) for s in ts.initial_states()]


def executable_action_sets(gd: GroundDomain, s: Iterable[GAtom]) -> Iterator[frozenset]:
    ts = _sys(gd)
    for a in ts.executable_sets(ts.encode(s)):
        yield ts.decode(a)


def successor_states(gd: GroundDomain, s: Iterable[GAtom], a: Iterable[GAtom]) -> list[frozenset]:
    """States ``s'`` with ``<s, a, s'>`` a legal transition; empty if ``a`` is not executable."""
    ts = _sys(gd)
    es, ea = ts.encode(s), ts.encode(a)
    if not ts.is_executable(es, ea):
        return []
    return [ts.decode(x) for x in ts.successors(es, ea)]


def is_legal_transition(gd: GroundDomain, t: Transition) -> bool:
    ts = _sys(gd)
    try:
        s, a, s2 = ts.encode(t.source), ts.encode(t.actions), ts.encode(t.target)
    except KeyError:
        return False
    if not ts.is_state(s) or not ts.is_state(s2) or any(x < ts.nflu for x in a):
        return False
    return ts.is_executable(s, a) and s2 in ts.successors(s, a)


def is_legal_initial_state(gd: GroundDomain, s: Iterable[GAtom]) -> bool:
    ts = _sys(gd)
    try:
        enc = ts.encode(s)
    except KeyError:
        return False
    return enc in ts.initial_states()


def state_key(gd: GroundDomain, s: Iterable[GAtom]) -> tuple:
    return tuple(sorted(gd.atom_key(a) for a in s))
