"""Four people cross a narrow bridge at night with one lamp.

Each walking time is the cost of a crossing, so the cheapest plan is the
fastest crossing.  Run with: python3 demos/bridge.py
"""

from __future__ import annotations

from kcplan import find_optimal_plans, fixtures

pr = fixtures.load("bridge")
print(f"Plan length {pr.plan_length}; walking times are action costs.\n")

cost, plans = find_optimal_plans(pr.domain, mode="any")
best = next(plans)
print("A cheapest plan:")
for j, step in enumerate(best.plan.steps, 1):
    print(f"  step {j}: {', '.join(map(str, step)) or '(nothing)'}")
print(f"Total time: {cost} minutes.\n")

# fewer steps force costlier moves
cost5, plans5 = find_optimal_plans(pr.at_length(5).domain)
print(f"With only 5 steps the best is {cost5}, reached by {len(list(plans5))} plans.")
