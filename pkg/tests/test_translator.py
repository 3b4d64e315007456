from __future__ import annotations

import pytest

from kcplan import fixtures
from kcplan.planner import find_optimal_plans
from kcplan.problem import load_texts
from kcplan.translator import (
    parse_lp,
    trajectory_image,
    translate_lpw,
    translate_minimize,
    weak_cost_of_image,
)

GOLDEN = [
    ("bridge", translate_lpw, "bridge.lpw"),
    ("buying", translate_lpw, "buying.lpw"),
    ("bridge", translate_minimize, "bridge.min"),
    ("buying", translate_minimize, "buying.min"),
]


@pytest.mark.parametrize("name,fn,gold", GOLDEN)
def test_golden_output(golden, name, fn, gold):
    assert fn(fixtures.program(name)).text == (golden / gold).read_text()


def test_bridge_rules():
    lines = translate_lpw(fixtures.program("bridge")).text.splitlines()
    for expected in (
        "cost_cross(X,T,WX) :- cross(X,T), person(X), walk(X,WX).",
        ":~ cost_cross(X,T,WX). [WX:]",
        "-across(X,0) :- person(X).",
        "hasLamp(joe,0) :- person(joe).",
        ":- not goal_reached.",
        "takeLamp(X,T0) v -takeLamp(X,T0) :- person(X), next(T0,T1).",
    ):
        assert expected in lines


def test_plan_length_override():
    text = translate_lpw(fixtures.program("bridge"), plan_length=3).text
    assert "time(3)." in text and "time(4)." not in text
    assert "across(joe,3)" in text


def test_next_variable_only_where_needed():
    # static rules live at one time point and use time(T); dynamic ones use next
    for r in translate_lpw(fixtures.program("bridge")).rules:
        s = str(r)
        if "T1" in s:
            assert "next(T0,T1)" in s


def test_minimize_pads_arguments():
    lp = translate_minimize(fixtures.program("bridge"))
    (a, cond, w), = lp.minimize.elements
    # crossTogether has two parameters, so cross is padded with a zero
    assert len(a.args) == 4 and len(cond.args) == 5
    assert "cost(cross,X,0,T,WX) :- person(X), walk(X,WX), time(T)." in lp.text


def test_clashing_cost_predicate_is_renamed():
    lp = translate_minimize(fixtures.program("tsp-we"))
    assert lp.names["cost"] == "kc_cost"
    assert "kc_cost(" in str(lp.minimize)


def test_no_costs_gives_empty_minimize():
    lp = translate_minimize(fixtures.program("blocks-p0-k"))
    assert lp.minimize is not None and lp.minimize.elements == ()
    assert not translate_lpw(fixtures.program("blocks-p0-k")).weak_constraints


@pytest.mark.parametrize("name", ["bridge", "buying", "tsp-we", "blocks-p0", "bridge-secure"])
@pytest.mark.parametrize("fn", [translate_lpw, translate_minimize])
def test_parse_round_trip(name, fn):
    lp = fn(fixtures.program(name))
    back = parse_lp(lp.text)
    assert back.text == lp.text
    assert back.statements == lp.statements


@pytest.mark.parametrize("name", ["bridge", "buying", "tsp", "tsp-we", "tsp-lwe", "blocks-p0"])
def test_weak_cost_matches_plan_cost(load, name):
    pr = load(name)
    lp = translate_lpw(pr.program)
    _, it = find_optimal_plans(pr.domain)
    for v in it:
        assert weak_cost_of_image(lp, trajectory_image(pr.domain, v.witness)) == v.cost


def test_weak_cost_of_a_suboptimal_plan(load):
    from kcplan.planner import find_optimistic_plans

    pr = load("bridge", 5)
    lp = translate_lpw(pr.program)
    for v in find_optimistic_plans(pr.domain, mode="all", cost_bound=25):
        assert weak_cost_of_image(lp, trajectory_image(pr.domain, v.witness)) == v.cost


def test_empty_plan_costs_nothing():
    pr = load_texts(["fluents: f. actions: a costs 3. initially: caused f. always: inertial f. goal: f? (0)"])
    _, it = find_optimal_plans(pr.domain)
    v = next(it)
    assert weak_cost_of_image(translate_lpw(pr.program), trajectory_image(pr.domain, v.witness)) == 0
