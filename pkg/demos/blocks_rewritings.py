"""Blocks world: trading plan length against the number of moves.

Each move costs 1.  Asking for a plan at a fixed length gives the fewest
moves at that length; the rewritings search all lengths up to a horizon
instead, favouring either fewer moves or fewer steps.
Run with: python3 demos/blocks_rewritings.py
"""

from __future__ import annotations

from kcplan import find_optimal_plans, fixtures, from_program, rewrite_delta, rewrite_gamma, shortest_plan_length

pr = fixtures.load("blocks-p0")
for l in (2, 3):
    cost, _ = find_optimal_plans(pr.at_length(l).domain, mode="any")
    print(f"fixed length {l}: {cost} moves")
print(f"shortest length found by deepening: {shortest_plan_length(pr.domain)}\n")


def solve(res, label):
    cost, it = find_optimal_plans(from_program(res.program).domain, mode="any")
    v = next(it)
    d = res.decode(cost, res.finish_time(v.plan.steps))
    print(f"{label}: rewritten cost {cost} -> {d.cost} moves in {d.steps} steps")


solve(rewrite_gamma(pr.program, 6), "fewest moves, then fewest steps")
solve(rewrite_delta(pr.program, 6), "fewest steps, then fewest moves")
tight = rewrite_delta(pr.program, 6, 42, allow_tight_factor=True)
print(f"  (the same with factor 42; note: {tight.notes[0]})")
solve(tight, "fewest steps, factor 42")
