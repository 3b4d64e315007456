from __future__ import annotations

import pytest

from kcplan import fixtures
from kcplan.errors import RewriteError
from kcplan.planner import find_optimal_plans
from kcplan.problem import from_program, load_texts
from kcplan.rewriter import cost_sum_bound, rewrite, rewrite_beta, rewrite_delta, rewrite_gamma


def _solve(res):
    gd = from_program(res.program).domain
    cost, it = find_optimal_plans(gd, mode="any")
    v = next(it)
    return cost, res.decode(cost, res.finish_time(v.plan.steps))


def test_gamma_on_blocks():
    res = rewrite_gamma(fixtures.program("blocks-p0"), 6)
    assert (res.horizon, res.factor) == (7, 7)
    cost, d = _solve(res)
    assert cost == 39
    assert (d.cost, d.steps) == (5, 3)


def test_gamma_agrees_with_hand_written_version():
    gd = fixtures.load("blocks-p0-gamma").domain
    assert find_optimal_plans(gd, mode="any")[0] == 39


def test_gamma_decode_without_a_plan():
    res = rewrite_gamma(fixtures.program("blocks-p0"), 6)
    d = res.decode(39)
    assert (d.cost, d.steps, d.finish_time) == (5, 3, 4)


def test_delta_on_blocks():
    p = fixtures.program("blocks-p0")
    res = rewrite_delta(p, 6, 42, allow_tight_factor=True)
    assert res.notes
    cost, d = _solve(res)
    assert cost == 132
    assert (d.cost, d.steps) == (6, 2)


def test_delta_refuses_a_tight_factor():
    p = fixtures.program("blocks-p0")
    assert cost_sum_bound(p, 7, 20) + 1 == 295
    with pytest.raises(RewriteError, match="safe bound 295"):
        rewrite_delta(p, 6, 42)


def test_delta_default_factor_decodes_the_same():
    res = rewrite_delta(fixtures.program("blocks-p0"), 6)
    assert res.factor == 295 and not res.notes
    _, d = _solve(res)
    assert (d.cost, d.steps) == (6, 2)


def test_beta_finds_the_shortest_plan():
    res = rewrite_beta(fixtures.program("blocks-p0-k"), 6)
    cost, d = _solve(res)
    assert d.steps == 2 and cost == 3


def test_beta_rejects_costs():
    with pytest.raises(RewriteError, match="no action costs"):
        rewrite_beta(fixtures.program("blocks-p0"), 6)


def test_clash_with_reserved_names():
    src = "fluents: gr. actions: a. always: executable a. caused gr after a. goal: gr? (1)"
    p = load_texts([src]).program
    with pytest.raises(RewriteError, match="already uses"):
        rewrite(p, "beta", 2)
    res = rewrite(p, "beta", 2, on_clash="rename")
    assert res.gr == "kc_gr" and res.finish == "finish"
    _, d = _solve(res)
    assert d.steps == 1


def test_unknown_kind():
    with pytest.raises(RewriteError):
        rewrite(fixtures.program("blocks-p0"), "epsilon", 3)
