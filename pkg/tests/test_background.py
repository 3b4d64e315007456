from __future__ import annotations

import pytest

from kcplan import fixtures
from kcplan.background import SymbolOrder, evaluate_background
from kcplan.errors import IntBoundExceeded, NonTotalModelError
from kcplan.kclang import Atom, Const, parse_program


def model(text: str, n: int = 10, **kw):
    p = parse_program([text])
    return evaluate_background(p.background, n, SymbolOrder(p.constant_order), **kw)


def atom(pred, *args, neg=False):
    return Atom(pred, tuple(Const(a) for a in args), neg)


def test_recursion_and_negation():
    m = model("e(1,2). e(2,3). r(X,Y) :- e(X,Y). r(X,Z) :- r(X,Y), e(Y,Z). n(X) :- e(X,Y), not r(Y,3).")
    assert m.holds(atom("r", 1, 3))
    assert m.holds(atom("n", 2))
    assert not m.holds(atom("n", 1))


def test_int_ranges_over_bound():
    m = model("d(X) :- #int(X), X < 4.", n=6)
    assert {a.args[0].value for a in m.atoms() if a.pred == "d"} == {0, 1, 2, 3}


def test_arithmetic_above_bound_is_dropped_and_counted():
    m = model("s(X) :- #int(Y), X = Y + 3.", n=5)
    assert max(a.args[0].value for a in m.atoms() if a.pred == "s") == 5
    assert m.truncations == 3


def test_strict_arithmetic_raises():
    with pytest.raises(IntBoundExceeded):
        model("s(X) :- #int(Y), X = Y + 3.", n=5, strict_arithmetic=True)


def test_non_total_model_is_rejected():
    with pytest.raises(NonTotalModelError):
        model("p :- not q. q :- not p.")


def test_odd_loop_through_negation_but_total():
    # cost/ecost form a negative cycle that is still total.
    pr = fixtures.load("tsp-exc")
    m = pr.model
    assert m.holds(atom("cost", "stp", "eis", 2, 10))
    assert not m.holds(atom("cost", "stp", "eis", 2, 2))
    assert m.holds(atom("cost", "stp", "eis", 3, 2))


def test_comparison_uses_first_occurrence_order():
    m = model("c(joe). c(jack). lt(X,Y) :- c(X), c(Y), X < Y.")
    assert m.holds(atom("lt", "joe", "jack"))
    assert not m.holds(atom("lt", "jack", "joe"))


def test_integers_sort_before_symbols():
    m = model("c(a). c(3). lt(X,Y) :- c(X), c(Y), X < Y.")
    assert m.holds(atom("lt", 3, "a"))


def test_strong_negation_in_background():
    m = model("-p(1). q(X) :- -p(X).")
    assert m.holds(atom("p", 1, neg=True)) and m.holds(atom("q", 1))


def test_raising_bound_keeps_facts():
    small = model("t(X) :- #int(X), X < 3. u(X) :- t(X).", n=4)
    big = model("t(X) :- #int(X), X < 3. u(X) :- t(X).", n=9)
    keep = {a for a in small.atoms()}
    assert keep <= set(big.atoms())
