from __future__ import annotations

import pytest

from kcplan import fixtures
from kcplan.errors import NoPlanError
from kcplan.grounder import GAtom
from kcplan.planner import (
    Plan,
    find_optimal_plans,
    find_optimal_secure_plans,
    find_optimistic_plans,
    is_secure,
    plan_cost,
    shortest_plan_length,
)
from kcplan.problem import load_texts


@pytest.mark.parametrize("strategy", ["astar", "ucs", "dfs"])
def test_strategies_agree_on_bridge(load, strategy):
    gd = load("bridge").domain
    cost, it = find_optimal_plans(gd, strategy=strategy)
    assert cost == 17
    assert all(v.cost == 17 for v in it)


@pytest.mark.parametrize("strategy", ["astar", "ucs", "dfs"])
def test_secure_strategies_agree(load, strategy):
    gd = load("bridge-secure", 8).domain
    cost, _ = find_optimal_secure_plans(gd, mode="any", strategy=strategy)
    assert cost == 17


@pytest.mark.slow
def test_secure_filter_agrees(load):
    # filtering enumerates every optimistic plan within the bound first
    gd = load("bridge-secure", 7).domain
    cost, it = find_optimal_secure_plans(gd, cost_bound=19, strategy="filter")
    ref, ref_it = find_optimal_secure_plans(gd, cost_bound=19)
    assert cost == ref == 19
    assert [v.plan for v in it] == [v.plan for v in ref_it]


def test_bridge_length_five(load):
    cost, it = find_optimal_plans(load("bridge", 5).domain)
    plans = list(it)
    assert cost == 19 and len(plans) == 6


def test_plans_are_reported_with_witness(load):
    gd = load("bridge").domain
    _, it = find_optimal_plans(gd, mode="any")
    (v,) = list(it)
    assert len(v.witness.transitions) == 7
    assert all(GAtom("across", (p,)) in v.witness.final for p in ("joe", "jack", "william", "averell"))
    assert plan_cost(gd, v.plan.action_sets()) == v.cost


def test_admissible_bound(load):
    gd = load("buying").domain
    assert list(find_optimistic_plans(gd, cost_bound=6)) == []
    (v,) = list(find_optimistic_plans(gd, cost_bound=7))
    assert v.cost == 7


def test_all_admissible_plans_are_within_bound(load):
    gd = load("bridge", 5).domain
    plans = list(find_optimistic_plans(gd, mode="all", cost_bound=20))
    assert plans and all(v.cost <= 20 for v in plans)
    assert min(v.cost for v in plans) == 19
    assert sum(v.cost == 19 for v in plans) == 6


def test_optimistic_plans_are_not_secure(load):
    gd = load("bridge-secure", 8).domain
    # an optimal plan of the certain version relies on joe having the lamp
    plan = next(find_optimal_plans(load("bridge").domain, mode="any")[1]).plan
    assert not is_secure(gd, None, plan.action_sets() + [frozenset()])
    _, it = find_optimal_secure_plans(gd, mode="any")
    v = next(it)
    assert v.secure and is_secure(gd, None, v.plan.action_sets())


def test_secure_bridge_at_seven(load):
    gd = load("bridge-secure", 7).domain
    with pytest.raises(NoPlanError):
        find_optimal_secure_plans(gd, cost_bound=17)
    cost, _ = find_optimal_secure_plans(gd)
    assert cost == 19


def test_shortest_length(load):
    assert shortest_plan_length(load("blocks-p0").domain) == 2
    assert shortest_plan_length(load("bridge").domain) == 5


def test_unsatisfiable_goal():
    pr = load_texts(["fluents: f. actions: a. always: executable a. caused f after a. goal: f, not f? (1)"])
    with pytest.raises(NoPlanError):
        find_optimal_plans(pr.domain)
    assert shortest_plan_length(pr.domain, max_length=3) is None


def test_zero_length_plan():
    pr = load_texts(["fluents: f. actions: a. initially: caused f. always: inertial f. goal: f? (0)"])
    cost, it = find_optimal_plans(pr.domain)
    (v,) = list(it)
    assert cost == 0 and v.plan.steps == ()


def test_plan_format_round_trip(load):
    for name in ("bridge", "buying", "tsp"):
        for v in find_optimal_plans(load(name).domain)[1]:
            assert Plan.parse(v.plan.format()) == v.plan


def test_plan_parse_accepts_loose_spacing():
    p = Plan.parse("PLAN: buy(ticket) : 2, buy(magazine):3 ; ; go COST : 5")
    assert p.steps == ((GAtom("buy", ("ticket",)), GAtom("buy", ("magazine",))), (), (GAtom("go"),))
    assert p.cost == 5
    with pytest.raises(ValueError):
        Plan.parse("PLAN: a:1 COST: 2")


def test_tsp_plan_count(load):
    cost, it = find_optimal_plans(load("tsp").domain)
    assert cost == 15 and len(list(it)) == 10


@pytest.mark.parametrize("name,cost", [("tsp-exc", 15), ("tsp-we", 12), ("tsp-lwe", 11)])
def test_tsp_variants(name, cost):
    assert find_optimal_plans(fixtures.load(name).domain, mode="any")[0] == cost
