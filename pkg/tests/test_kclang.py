from __future__ import annotations

import pytest

from kcplan import fixtures
from kcplan.errors import KcSemanticError, KcSyntaxError
from kcplan.kclang import (
    Atom,
    CausationRule,
    Const,
    Macro,
    Var,
    expand_macros,
    format_program,
    parse_program,
    validate,
)

SMALL = """
item(x).
fluents: have(I) requires item(I).
actions: get(I) requires item(I) costs 2.
initially: -have(x).
always: executable get(I) if not have(I).
        caused have(I) after get(I).
        inertial have(I).
goal: have(x)? (1)
"""


def test_parse_sections():
    p = parse_program([SMALL])
    assert [d.name for d in p.fluent_decls] == ["have"]
    assert p.action_decls[0].cost == Const(2)
    assert p.query.plan_length == 1
    assert p.query.goal_pos == (Atom("have", (Const("x"),)),)
    assert isinstance(p.always[-1], Macro) and p.always[-1].kind == "inertial"


@pytest.mark.parametrize("name", sorted(fixtures.FIXTURES))
def test_printer_round_trip(name):
    p = fixtures.program(name)
    again = parse_program([format_program(p)])
    assert again == p


def test_constant_order_follows_first_occurrence():
    p = parse_program(["b(zed). b(alpha).\n" + SMALL])
    order = list(p.constant_order)
    assert order.index("zed") < order.index("alpha")


def test_macros_expand_to_rules():
    p = expand_macros(parse_program([SMALL]))
    inert = p.always[-1]
    h = Atom("have", (Var("I"),))
    assert inert == CausationRule(h, (), (h.negate(),), (h,), ())


def test_total_needs_positive_literal():
    with pytest.raises(KcSemanticError):
        expand_macros(parse_program(["fluents: f. always: total -f."]))


def test_syntax_error_has_position():
    with pytest.raises(KcSyntaxError) as e:
        parse_program(["fluents: f.\nalways: caused f if ."], ["bad.plan"])
    assert e.value.line == 2 and "bad.plan" in str(e.value)


def test_undeclared_predicate_is_rejected():
    with pytest.raises(KcSemanticError):
        parse_program(["fluents: f. always: caused g after f."])


def test_validate_clean_fixtures():
    for name in fixtures.FIXTURES:
        assert validate(fixtures.program(name)) == [], name


def test_validate_reports_action_cycle():
    p = parse_program(["actions: a. b. always: executable a if b. executable b if a."])
    kinds = [d.kind for d in validate(p)]
    assert kinds == ["acyclicity"]


def test_validate_reports_unsafe_background_rule():
    p = parse_program(["t(1). u(X) :- not t(X)."])
    assert [d.kind for d in validate(p)] == ["safety"]


def test_typed_literals_bind_their_variables():
    p = parse_program(["t(1). fluents: f(X) requires t(X). always: caused f(X) if not f(Y)."])
    assert validate(p) == []
