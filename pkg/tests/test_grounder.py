from __future__ import annotations

import pytest

from kcplan import fixtures
from kcplan.errors import KcSemanticError, WellDefinednessError
from kcplan.grounder import GAtom, action_cost, check_well_defined
from kcplan.problem import load_texts


def test_bridge_legal_instances(load):
    gd = load("bridge").domain
    preds = [a.pred for a in gd.legal_actions]
    assert (preds.count("cross"), preds.count("crossTogether"), preds.count("takeLamp")) == (4, 6, 4)
    assert len(gd.legal_fluents) == 4 + 16 + 4
    # X < Y follows first occurrence, so joe comes before jack
    assert GAtom("crossTogether", ("joe", "jack")) in gd.legal_actions
    assert GAtom("crossTogether", ("jack", "joe")) not in gd.legal_actions


def test_bridge_costs(load):
    gd = load("bridge").domain
    assert gd.action_cost(GAtom("cross", ("averell",)), 1) == 10
    assert gd.action_cost(GAtom("crossTogether", ("joe", "william")), 3) == 5
    assert gd.action_cost(GAtom("takeLamp", ("joe",)), 2) == 0


def test_time_dependent_costs(load):
    gd = load("tsp-we").domain
    trip = GAtom("travel", ("ibk", "vie"))
    # step 1 is a Monday; steps 6 and 7 fall on the weekend
    assert [gd.action_cost(trip, i) for i in range(1, 9)] == [5, 5, 5, 5, 5, 2, 2, 5]


def test_costs_beyond_the_horizon_are_computed_on_demand(load):
    gd = load("tsp-we", 2).domain
    trip = GAtom("travel", ("ibk", "vie"))
    assert action_cost(gd, trip, 7) == 2
    # weekday arithmetic past the integer bound has no witness
    with pytest.raises(WellDefinednessError):
        action_cost(gd, trip, 13)


def test_bundled_fixtures_are_well_defined():
    for name in fixtures.FIXTURES:
        if not name.startswith("bad-"):
            assert check_well_defined(fixtures.load(name).domain) == [], name


def test_conflicting_cost_is_diagnosed():
    with pytest.raises(WellDefinednessError) as e:
        fixtures.load("bad-conflicting-cost")
    (d,) = e.value.diagnostics
    assert (d.instance, d.kind, d.values) == (GAtom("buy", ("ticket",)), "conflict", (2, 3))


def test_missing_witness_is_diagnosed():
    pr = fixtures.load("bad-missing-witness", well_defined=False)
    (d,) = check_well_defined(pr.domain)
    assert (d.instance, d.kind, d.time) == (GAtom("buy", ("pass",)), "missing", 1)
    with pytest.raises(WellDefinednessError):
        pr.domain.action_cost(GAtom("buy", ("pass",)), 1)


def test_duplicate_action_declaration():
    with pytest.raises(KcSemanticError):
        load_texts(["actions: a costs 1. a costs 2. always: executable a. goal: ? (1)"], check=False)


def test_no_concurrency_adds_pair_constraints(load):
    gd = load("tsp").domain
    pairs = [r for r in gd.rules if r.origin == "noConcurrency"]
    n = len(gd.legal_actions)
    assert len(pairs) == n * (n - 1) // 2
