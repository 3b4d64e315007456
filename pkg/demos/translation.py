"""Translating a program to a disjunctive logic program.

The weak-constraint translation charges each executed action its cost.
Here the weights are summed over the answer-set image of every optimal
bridge trajectory and compared with the plan cost.
Run with: python3 demos/translation.py
"""

from __future__ import annotations

from kcplan import find_optimal_plans, fixtures, trajectory_image, translate_lpw, translate_minimize, weak_cost_of_image

pr = fixtures.load("bridge")
lp = translate_lpw(pr.program)
print(f"{len(lp.rules)} rules, {len(lp.strong_constraints)} constraints, {len(lp.weak_constraints)} weak constraints")
for w in lp.weak_constraints:
    print(f"  {w}")
print("\nminimize form:", translate_minimize(pr.program).minimize)

print("\nweak cost of each optimal trajectory:")
for v in find_optimal_plans(pr.domain)[1]:
    print(f"  plan cost {v.cost}, weak cost {weak_cost_of_image(lp, trajectory_image(pr.domain, v.witness))}")
