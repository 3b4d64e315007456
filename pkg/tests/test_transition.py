from __future__ import annotations

from kcplan.grounder import GAtom
from kcplan.planner import Transition
from kcplan.transition import (
    executable_action_sets,
    is_legal_initial_state,
    is_legal_transition,
    legal_initial_states,
    successor_states,
)

PEOPLE = ("joe", "jack", "william", "averell")


def _start():
    return frozenset([GAtom("across", (p,), True) for p in PEOPLE] + [GAtom("hasLamp", ("joe",))])


def test_bridge_has_one_initial_state(load):
    gd = load("bridge").domain
    (s0,) = legal_initial_states(gd)
    assert s0 == _start()
    assert is_legal_initial_state(gd, s0)
    assert not is_legal_initial_state(gd, s0 - {GAtom("hasLamp", ("joe",))})


def test_bridge_secure_variant_is_uncertain_about_the_lamp(load):
    gd = load("bridge-secure").domain
    states = legal_initial_states(gd)
    # any nonempty set of people may hold a lamp
    holders = {frozenset(a.args[0] for a in s if a.pred == "hasLamp" and not a.neg) for s in states}
    assert len(states) == len(holders) == 15
    assert frozenset() not in holders


def test_bridge_executable_sets(load):
    gd = load("bridge").domain
    sets = set(executable_action_sets(gd, _start()))
    # noConcurrency: only singletons, and only joe holds the lamp
    assert frozenset() in sets
    assert frozenset({GAtom("cross", ("joe",))}) in sets
    assert frozenset({GAtom("cross", ("jack",))}) not in sets
    assert all(len(a) <= 1 for a in sets)
    walkers = {a for A in sets for a in A if a.pred != "takeLamp"}
    assert walkers == {GAtom("cross", ("joe",))} | {
        GAtom("crossTogether", ("joe", p)) for p in PEOPLE[1:]
    }
    # nobody is across yet, so anyone may take the lamp
    assert {a.args[0] for A in sets for a in A if a.pred == "takeLamp"} == set(PEOPLE)


def test_bridge_successor(load):
    gd = load("bridge").domain
    a = frozenset({GAtom("crossTogether", ("joe", "william"))})
    (t,) = successor_states(gd, _start(), a)
    assert GAtom("across", ("joe",)) in t and GAtom("across", ("william",)) in t
    assert GAtom("differentSides", ("joe", "jack")) in t
    assert GAtom("hasLamp", ("joe",)) in t
    assert is_legal_transition(gd, Transition(_start(), a, t))
    assert not is_legal_transition(gd, Transition(_start(), a, _start()))


def test_non_executable_action_has_no_successor(load):
    gd = load("bridge").domain
    assert successor_states(gd, _start(), {GAtom("cross", ("jack",))}) == []
