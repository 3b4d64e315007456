"""Buying a newspaper and two magazines in one step.

Admissible planning asks for any plan within a cost bound.
Run with: python3 demos/buying.py
"""

from __future__ import annotations

from kcplan import find_optimal_plans, find_optimistic_plans, fixtures

gd = fixtures.load("buying").domain
for bound in (6, 7):
    found = list(find_optimistic_plans(gd, cost_bound=bound))
    print(f"bound {bound}: " + (str(found[0].plan) if found else "no plan"))
cost, _ = find_optimal_plans(gd, mode="any")
print(f"optimal cost without a bound: {cost}")
