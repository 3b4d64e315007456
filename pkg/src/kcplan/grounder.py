"""Typed instantiation of a planning domain and its action cost table."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

from .background import ArithContext, BackgroundModel, Join, Relation, ground_args, pred_key
from .errors import GroundingLimitError, KcSemanticError, WellDefinednessError
from .kclang.ast import TIME, ActionDecl, Atom, CausationRule, Const, ExecCondition, Macro, Program, Var
from .kclang.macros import expand_macros

DEFAULT_INSTANCE_CAP = 1_000_000


class GAtom(NamedTuple):
    """A ground fluent or action atom; ``neg`` marks strong negation."""

    pred: str
    args: tuple = ()
    neg: bool = False

    def negate(self) -> "GAtom":
        return GAtom(self.pred, self.args, not self.neg)

    def positive(self) -> "GAtom":
        return GAtom(self.pred, self.args) if self.neg else self

    def __str__(self) -> str:
        sign = "-" if self.neg else ""
        if not self.args:
            return sign + self.pred
        return f"{sign}{self.pred}({','.join(map(str, self.args))})"

    def to_atom(self) -> Atom:
        return Atom(self.pred, tuple(Const(v) for v in self.args), self.neg)

    @classmethod
    def from_atom(cls, at: Atom) -> "GAtom":
        if not at.is_ground:
            raise ValueError(f"{at} is not ground")
        return cls(at.pred, tuple(a.value for a in at.args), at.neg)


@dataclass(frozen=True)
class GroundRule:
    head: GAtom | None
    post_pos: tuple = ()
    post_neg: tuple = ()
    pre_pos: tuple = ()
    pre_neg: tuple = ()
    scope: str = "always"
    origin: str = ""
    # set when the source rule has an after-part, even if grounding emptied it
    dynamic: bool = False

    @property
    def is_static(self) -> bool:
        return not self.dynamic

    def __str__(self) -> str:
        s = "caused " + ("false" if self.head is None else str(self.head))
        post = [str(a) for a in self.post_pos] + [f"not {a}" for a in self.post_neg]
        pre = [str(a) for a in self.pre_pos] + [f"not {a}" for a in self.pre_neg]
        if post:
            s += " if " + ", ".join(post)
        if pre:
            s += " after " + ", ".join(pre)
        return s + "."


@dataclass(frozen=True)
class GroundExec:
    action: GAtom
    pre_pos: tuple = ()
    pre_neg: tuple = ()

    def __str__(self) -> str:
        cond = [str(a) for a in self.pre_pos] + [f"not {a}" for a in self.pre_neg]
        return f"executable {self.action}" + (f" if {', '.join(cond)}" if cond else "") + "."


@dataclass(frozen=True)
class CostDiagnostic:
    instance: GAtom
    time: int
    kind: str  # "missing" or "conflict"
    values: tuple = ()

    def __str__(self) -> str:
        if self.kind == "missing":
            return f"{self.instance} at time {self.time}: no witness with a defined cost"
        vals = " and ".join(map(str, self.values))
        return f"{self.instance} at time {self.time}: conflicting costs {vals}"


def _val(v) -> int:
    # non-integer constants are worth 0
    return v if isinstance(v, int) else 0


@dataclass
class _CostSpec:
    decl: ActionDecl
    requires_thetas: list  # substitutions over the requires part
    where: Join | None


@dataclass
class GroundDomain:
    program: Program
    background: BackgroundModel
    horizon: int
    legal_fluents: tuple
    legal_actions: tuple
    rules: tuple
    execs: tuple
    no_concurrency: bool
    cost_table: dict = field(default_factory=dict)
    _cost_specs: dict = field(default_factory=dict, repr=False)
    _atom_rank: dict = field(default_factory=dict, repr=False)
    _system: object = field(default=None, repr=False)

    @property
    def ground_rules(self) -> tuple:
        return self.rules

    @property
    def ground_execs(self) -> tuple:
        return self.execs

    def atom_key(self, a: GAtom) -> tuple:
        """Sort key: declaration order of the predicate, then the arguments."""
        r = self._atom_rank.get(a.positive())
        if r is not None:
            return (r, a.neg)
        order = self.background.order
        return (len(self._atom_rank), a.pred, tuple(order.key(v) for v in a.args), a.neg)

    def sort_atoms(self, atoms: Iterable[GAtom]) -> list:
        return sorted(atoms, key=self.atom_key)

    def cost_values(self, a: GAtom, i: int) -> set:
        spec = self._cost_specs.get(a)
        if spec is None:
            raise KeyError(f"{a} is not a legal action instance")
        d = spec.decl
        if d.cost is None:
            return {0}
        vals: set = set()
        arith = ArithContext(None)
        m = self.background
        for th in spec.requires_thetas:
            base = dict(th)
            base[TIME] = i
            if spec.where is None:
                sols: Iterable = [base]
            else:
                sols = spec.where.run(
                    [m.relation(pred_key(g)) for g in spec.where.gens],
                    lambda k, t: t not in m.relation(pred_key(spec.where.nafs[k])),
                    base,
                    m.order,
                    m.int_bound,
                    arith,
                )
            for s in sols:
                c = d.cost
                vals.add(_val(s[c] if isinstance(c, Var) else c.value))
        return vals

    def action_cost(self, a: GAtom, i: int) -> int:
        key = (a, i)
        v = self.cost_table.get(key)
        if v is not None:
            return v
        spec = self._cost_specs.get(a)
        if spec is not None and not spec.decl.time_dependent and (a, 1) in self.cost_table:
            return self.cost_table[(a, 1)]
        vals = self.cost_values(a, i)
        if len(vals) != 1:
            raise WellDefinednessError([CostDiagnostic(a, i, "missing" if not vals else "conflict", tuple(sorted(vals)))])
        v = next(iter(vals))
        self.cost_table[key] = v
        return v

    def set_cost(self, a: GAtom, i: int) -> int:
        return self.action_cost(a, i)

    @property
    def system(self):
        if self._system is None:
            from .transition import TransitionSystem

            self._system = TransitionSystem(self)
        return self._system


def _split(atoms: Iterable[Atom], p: Program):
    dyn, typ, blt = [], [], []
    for at in atoms:
        if at.is_builtin:
            blt.append(at)
        elif p.kind_of(at.pred) in ("fluent", "action"):
            dyn.append(at)
        else:
            typ.append(at)
    return dyn, typ, blt


def _legal_instances(decls, m: BackgroundModel) -> tuple[dict, dict]:
    """Map each legal instance to the requires-substitutions that type it."""
    out: dict[GAtom, list] = {}
    decl_of: dict[GAtom, object] = {}
    arith = ArithContext(m.int_bound)
    for d in decls:
        gens = [a for a in d.requires if not a.is_builtin]
        blts = [a for a in d.requires if a.is_builtin]
        j = Join(gens, (), blts)
        rels = [m.relation(pred_key(g)) for g in gens]
        for th in j.run(rels, lambda k, t: True, {}, m.order, m.int_bound, arith):
            a = GAtom(d.name, tuple(th[x] for x in d.params))
            out.setdefault(a, []).append(th)
            decl_of.setdefault(a, d)
    return out, decl_of


def ground(
    p: Program,
    m: BackgroundModel,
    plan_length: int | None = None,
    *,
    check: bool = True,
    instance_cap: int = DEFAULT_INSTANCE_CAP,
) -> GroundDomain:
    """Instantiate ``p`` over the legal instances determined by ``m``.

    Macros are expanded first if still present.  The cost table is filled for
    times ``1..plan_length``; with ``check`` a well-definedness violation
    raises :class:`WellDefinednessError`.
    """
    if any(isinstance(s, Macro) for s in p.statements()):
        p = expand_macros(p)
    if plan_length is None:
        plan_length = p.query.plan_length if p.query and p.query.plan_length is not None else 0
    names = [d.name for d in p.action_decls]
    dup = {n for n in names if names.count(n) > 1}
    if dup:
        raise KcSemanticError(f"action {sorted(dup)[0]} is declared more than once")

    fl_inst, _ = _legal_instances(p.fluent_decls, m)
    ac_inst, ac_decl = _legal_instances(p.action_decls, m)

    # ranks give the deterministic order used everywhere downstream
    rank: dict[GAtom, int] = {}
    order = m.order
    for decls, inst in ((p.fluent_decls, fl_inst), (p.action_decls, ac_inst)):
        pos = {}
        for d in decls:
            pos.setdefault(d.name, len(pos))
        for a in sorted(inst, key=lambda a: (pos[a.pred], tuple(order.key(v) for v in a.args))):
            rank[a] = len(rank)
    legal_fluents = tuple(a for a in rank if a.pred in p.fluent_arity)
    legal_actions = tuple(a for a in rank if a.pred in p.action_arity)

    dyn_rel: dict[str, Relation] = {}
    for a in (*legal_fluents, *legal_actions):
        dyn_rel.setdefault(a.pred, Relation()).add(a.args)

    def rel_for(at: Atom) -> Relation:
        if p.kind_of(at.pred) in ("fluent", "action"):
            return dyn_rel.get(at.pred, Relation())
        return m.relation(pred_key(at))

    arith = ArithContext(m.int_bound)
    rules: dict[GroundRule, None] = {}
    execs: dict[GroundExec, None] = {}

    def instantiate(head: Atom | None, parts: list[tuple[list, list]]) -> Iterator[tuple[dict, list]]:
        """parts: [(pos_atoms, neg_atoms), ...]; yields theta and ground parts."""
        gens: list[Atom] = [] if head is None else [head]
        nafs: list[Atom] = []
        blts: list[Atom] = []
        kept: list[tuple[list, list]] = []
        for pos, neg in parts:
            pd, pt, pb = _split(pos, p)
            nd, nt, nb = _split(neg, p)
            gens += pd + pt + nd
            blts += pb
            nafs += nt + nb
            kept.append((pd, nd))
        j = Join(gens, nafs, blts)
        rels = [rel_for(g) for g in gens]

        def naf_ok(k: int, t: tuple) -> bool:
            at = nafs[k]
            if at.is_builtin:
                from .background import eval_builtin

                return not eval_builtin(at, t, order, m.int_bound, arith)
            return t not in m.relation(pred_key(at))

        for th in j.run(rels, naf_ok, {}, order, m.int_bound, arith):
            yield th, kept

    def g(at: Atom, th: dict) -> GAtom:
        return GAtom(at.pred, ground_args(at, th), at.neg)

    for s in p.statements():
        if isinstance(s, ExecCondition):
            for th, kept in instantiate(s.action, [(list(s.pre_pos), list(s.pre_neg))]):
                (pd, nd), = kept
                e = GroundExec(g(s.action, th), tuple(g(a, th) for a in pd), tuple(g(a, th) for a in nd))
                execs[e] = None
        else:
            parts = [(list(s.post_pos), list(s.post_neg)), (list(s.pre_pos), list(s.pre_neg))]
            for th, kept in instantiate(s.head, parts):
                (qd, qn), (rd, rn) = kept
                r = GroundRule(
                    None if s.head is None else g(s.head, th),
                    tuple(g(a, th) for a in qd),
                    tuple(g(a, th) for a in qn),
                    tuple(g(a, th) for a in rd),
                    tuple(g(a, th) for a in rn),
                    s.scope,
                    str(s),
                    bool(s.pre_pos or s.pre_neg),
                )
                rules[r] = None
                if len(rules) > instance_cap:
                    raise GroundingLimitError(
                        f"more than {instance_cap} ground rules; the instance is beyond desk scale"
                    )
    if p.no_concurrency:
        acts = legal_actions
        for x in range(len(acts)):
            for y in range(x + 1, len(acts)):
                rules[GroundRule(None, (), (), (acts[x], acts[y]), (), "always", "noConcurrency", True)] = None
        if len(rules) > instance_cap:
            raise GroundingLimitError(f"more than {instance_cap} ground rules; the instance is beyond desk scale")

    specs: dict[GAtom, _CostSpec] = {}
    for a, thetas in ac_inst.items():
        d = ac_decl[a]
        wj = None
        if d.cost is not None and d.where:
            gens = [w for w in d.where if not w.is_builtin]
            blts = [w for w in d.where if w.is_builtin]
            bound = set().union(*(th.keys() for th in thetas)) | {TIME}
            wj = Join(gens, (), blts, bound=bound)
        specs[a] = _CostSpec(d, thetas, wj)

    gd = GroundDomain(
        program=p,
        background=m,
        horizon=plan_length,
        legal_fluents=legal_fluents,
        legal_actions=legal_actions,
        rules=tuple(rules),
        execs=tuple(execs),
        no_concurrency=p.no_concurrency,
        _cost_specs=specs,
        _atom_rank=rank,
    )
    diags = _fill_costs(gd, plan_length)
    if check and diags:
        raise WellDefinednessError(diags)
    return gd


def _fill_costs(gd: GroundDomain, horizon: int) -> list[CostDiagnostic]:
    diags: list[CostDiagnostic] = []
    for a in gd.legal_actions:
        spec = gd._cost_specs[a]
        first_vals = None
        for i in range(1, horizon + 1):
            if first_vals is not None and not spec.decl.time_dependent:
                vals = first_vals
            else:
                vals = gd.cost_values(a, i)
                first_vals = vals
            if len(vals) == 1:
                gd.cost_table[(a, i)] = next(iter(vals))
            else:
                diags.append(CostDiagnostic(a, i, "missing" if not vals else "conflict", tuple(sorted(vals))))
    return diags


def check_well_defined(gd: GroundDomain, horizon: int | None = None) -> list[CostDiagnostic]:
    """Diagnostics for every instance and time 1..horizon without a unique cost."""
    h = gd.horizon if horizon is None else horizon
    diags: list[CostDiagnostic] = []
    for a in gd.legal_actions:
        spec = gd._cost_specs[a]
        cache = None
        for i in range(1, h + 1):
            if cache is not None and not spec.decl.time_dependent:
                vals = cache
            else:
                vals = cache = gd.cost_values(a, i)
            if len(vals) != 1:
                diags.append(CostDiagnostic(a, i, "missing" if not vals else "conflict", tuple(sorted(vals))))
    return diags


def action_cost(gd: GroundDomain, a: GAtom, i: int) -> int:
    return gd.action_cost(a, i)
