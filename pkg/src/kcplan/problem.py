"""Loading a planning problem from source text: parse, check, evaluate, ground."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .background import BackgroundModel, SymbolOrder, evaluate_background
from .errors import KcError, KcSemanticError
from .grounder import GroundDomain, ground
from .kclang import Program, Query, parse_program, validate

DEFAULT_INT_BOUND = 20


@dataclass(frozen=True)
class Problem:
    program: Program
    model: BackgroundModel
    domain: GroundDomain

    @property
    def query(self) -> Query:
        q = self.program.query
        if q is None:
            raise KcError("the program has no goal")
        return q

    @property
    def plan_length(self) -> int | None:
        return self.query.plan_length

    def at_length(self, length: int) -> "Problem":
        """The same problem with the goal's plan length replaced."""
        p = self.program.replace(query=self.query.with_length(length))
        return Problem(p, self.model, ground(p, self.model, length))


def check_program(p: Program) -> None:
    diags = validate(p)
    if diags:
        raise KcSemanticError("\n".join(map(str, diags)))


def from_program(
    p: Program,
    *,
    plan_length: int | None = None,
    int_bound: int = DEFAULT_INT_BOUND,
    strict_arithmetic: bool = False,
    check: bool = True,
    well_defined: bool = True,
) -> Problem:
    """Ground ``p``; ``check`` runs the static checks and ``well_defined`` the cost check."""
    if check:
        check_program(p)
    if plan_length is not None:
        if p.query is None:
            raise KcError("a plan length was given but the program has no goal")
        p = p.replace(query=p.query.with_length(plan_length))
    m = evaluate_background(p.background, int_bound, SymbolOrder(p.constant_order), strict_arithmetic)
    return Problem(p, m, ground(p, m, check=well_defined))


def load_texts(texts: Sequence[str], names: Sequence[str] | None = None, **kw) -> Problem:
    return from_program(parse_program(list(texts), list(names) if names else None), **kw)


def load_files(paths: Sequence[str | Path], **kw) -> Problem:
    paths = [Path(x) for x in paths]
    return load_texts([x.read_text() for x in paths], [str(x) for x in paths], **kw)
