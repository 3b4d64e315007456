"""Abstract syntax for K^c programs and their Datalog background."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Mapping, Union


@dataclass(frozen=True, order=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    value: Union[int, str]

    def __str__(self) -> str:
        return str(self.value)


Term = Union[Var, Const]

# The reserved cost variable.  It is spelled in lowercase in source text.
TIME = Var("time")

COMPARISONS = frozenset({"<", "<=", ">", ">=", "!=", "="})
ARITHMETIC = frozenset({"+", "*"})
INT_PRED = "#int"
BUILTINS = COMPARISONS | ARITHMETIC | {INT_PRED}


@dataclass(frozen=True)
class Atom:
    """A classical atom, optionally strongly negated, or a built-in.

    Built-ins reuse the same shape: ``X < Y`` is ``Atom("<", (X, Y))``,
    ``A = B + C`` is ``Atom("+", (A, B, C))`` and ``#int(X)`` is
    ``Atom("#int", (X,))``.
    """

    pred: str
    args: tuple = ()
    neg: bool = False

    @property
    def is_builtin(self) -> bool:
        return self.pred in BUILTINS

    @property
    def signature(self) -> tuple[str, int]:
        return (self.pred, len(self.args))

    @property
    def is_ground(self) -> bool:
        return all(isinstance(a, Const) for a in self.args)

    def negate(self) -> "Atom":
        return replace(self, neg=not self.neg)

    def positive(self) -> "Atom":
        return replace(self, neg=False) if self.neg else self

    def variables(self) -> Iterator[Var]:
        for a in self.args:
            if isinstance(a, Var):
                yield a

    def substitute(self, theta: Mapping[Var, Term]) -> "Atom":
        if not theta:
            return self
        return Atom(self.pred, tuple(theta.get(a, a) if isinstance(a, Var) else a for a in self.args), self.neg)

    def __str__(self) -> str:
        p, a = self.pred, self.args
        if p in COMPARISONS:
            return f"{a[0]} {p} {a[1]}"
        if p in ARITHMETIC:
            return f"{a[0]} = {a[1]} {p} {a[2]}"
        sign = "-" if self.neg else ""
        if not a:
            return sign + p
        return f"{sign}{p}({','.join(map(str, a))})"


def atom_vars(atoms: Iterable[Atom]) -> set[Var]:
    out: set[Var] = set()
    for at in atoms:
        out.update(at.variables())
    return out


def _conj(pos: Iterable[Atom], neg: Iterable[Atom]) -> list[str]:
    return [str(a) for a in pos] + [f"not {a}" for a in neg]


@dataclass(frozen=True)
class DatalogRule:
    head: Atom
    body_pos: tuple = ()
    body_neg: tuple = ()

    def __str__(self) -> str:
        body = _conj(self.body_pos, self.body_neg)
        return f"{self.head} :- {', '.join(body)}." if body else f"{self.head}."


@dataclass(frozen=True)
class FluentDecl:
    name: str
    params: tuple = ()
    requires: tuple = ()

    @property
    def atom(self) -> Atom:
        return Atom(self.name, self.params)

    def __str__(self) -> str:
        req = f" requires {', '.join(map(str, self.requires))}" if self.requires else ""
        return f"{self.atom}{req}."


@dataclass(frozen=True)
class ActionDecl:
    name: str
    params: tuple = ()
    requires: tuple = ()
    cost: Term | None = None
    where: tuple = ()

    @property
    def atom(self) -> Atom:
        return Atom(self.name, self.params)

    @property
    def time_dependent(self) -> bool:
        return self.cost == TIME or any(TIME in w.args for w in self.where)

    def __str__(self) -> str:
        s = str(self.atom)
        if self.requires:
            s += " requires " + ", ".join(map(str, self.requires))
        if self.cost is not None:
            s += f" costs {self.cost}"
            if self.where:
                s += " where " + ", ".join(map(str, self.where))
        return s + "."


@dataclass(frozen=True)
class CausationRule:
    """``caused head if post after pre``; ``head`` is None for ``false``."""

    head: Atom | None
    post_pos: tuple = ()
    post_neg: tuple = ()
    pre_pos: tuple = ()
    pre_neg: tuple = ()
    scope: str = "always"

    @property
    def is_static(self) -> bool:
        return not self.pre_pos and not self.pre_neg

    def atoms(self) -> Iterator[Atom]:
        if self.head is not None:
            yield self.head
        yield from self.post_pos
        yield from self.post_neg
        yield from self.pre_pos
        yield from self.pre_neg

    def __str__(self) -> str:
        s = "caused " + ("false" if self.head is None else str(self.head))
        post = _conj(self.post_pos, self.post_neg)
        pre = _conj(self.pre_pos, self.pre_neg)
        if post:
            s += " if " + ", ".join(post)
        if pre:
            s += " after " + ", ".join(pre)
        return s + "."


@dataclass(frozen=True)
class ExecCondition:
    action: Atom
    pre_pos: tuple = ()
    pre_neg: tuple = ()

    def atoms(self) -> Iterator[Atom]:
        yield self.action
        yield from self.pre_pos
        yield from self.pre_neg

    def __str__(self) -> str:
        cond = _conj(self.pre_pos, self.pre_neg)
        return f"executable {self.action}" + (f" if {', '.join(cond)}" if cond else "") + "."


MACRO_KINDS = ("inertial", "default", "total", "forbidden", "nonexecutable")


@dataclass(frozen=True)
class Macro:
    """An unexpanded macro statement.

    For ``nonexecutable a if B`` the condition ``B`` refers to the state in
    which ``a`` is executed, so it is stored in the ``pre`` fields.
    """

    kind: str
    head: Atom | None = None
    post_pos: tuple = ()
    post_neg: tuple = ()
    pre_pos: tuple = ()
    pre_neg: tuple = ()
    scope: str = "always"

    def atoms(self) -> Iterator[Atom]:
        if self.head is not None:
            yield self.head
        yield from self.post_pos
        yield from self.post_neg
        yield from self.pre_pos
        yield from self.pre_neg

    def __str__(self) -> str:
        post = _conj(self.post_pos, self.post_neg)
        pre = _conj(self.pre_pos, self.pre_neg)
        if self.kind == "nonexecutable":
            return f"nonexecutable {self.head}" + (f" if {', '.join(pre)}" if pre else "") + "."
        s = self.kind
        if self.kind == "forbidden":
            s += " " + ", ".join(post)
        else:
            s += f" {self.head}"
            if post:
                s += " if " + ", ".join(post)
        if pre:
            s += " after " + ", ".join(pre)
        return s + "."


Statement = Union[CausationRule, ExecCondition, Macro]


@dataclass(frozen=True)
class Query:
    goal_pos: tuple = ()
    goal_neg: tuple = ()
    plan_length: int | None = None

    def with_length(self, length: int) -> "Query":
        return replace(self, plan_length=length)

    def __str__(self) -> str:
        lits = ", ".join(_conj(self.goal_pos, self.goal_neg))
        n = "" if self.plan_length is None else f" ({self.plan_length})"
        return f"{lits}?{n}"


@dataclass(frozen=True)
class Program:
    background: tuple = ()
    fluent_decls: tuple = ()
    action_decls: tuple = ()
    initially: tuple = ()
    always: tuple = ()
    no_concurrency: bool = False
    query: Query | None = None
    # Symbolic constants in order of first occurrence; fixes comparison order.
    constant_order: tuple = field(default=(), compare=False)

    @property
    def fluent_arity(self) -> dict[str, int]:
        return {d.name: len(d.params) for d in self.fluent_decls}

    @property
    def action_arity(self) -> dict[str, int]:
        return {d.name: len(d.params) for d in self.action_decls}

    def kind_of(self, pred: str) -> str:
        if pred in BUILTINS:
            return "builtin"
        if pred in self.fluent_arity:
            return "fluent"
        if pred in self.action_arity:
            return "action"
        return "type"

    def statements(self) -> Iterator[Statement]:
        yield from self.initially
        yield from self.always

    def replace(self, **changes) -> "Program":
        return replace(self, **changes)
