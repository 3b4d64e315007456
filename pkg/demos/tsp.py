"""A round trip through the Austrian state capitals.

Road distances are costs.  Three variants make travel cheaper on some
days: an exception for one leg, weekend discounts, and a discount that
also depends on the road.  Run with: python3 demos/tsp.py
"""

from __future__ import annotations

from kcplan import find_optimal_plans, fixtures

cost, plans = find_optimal_plans(fixtures.load("tsp").domain)
plans = list(plans)
print(f"Shortest round trip: {cost}, reached by {len(plans)} tours.")
print(f"  e.g. {plans[0].plan}\n")

for name, what in (("tsp-exc", "one expensive exception"), ("tsp-we", "weekend halving"), ("tsp-lwe", "road-specific weekend")):
    c, it = find_optimal_plans(fixtures.load(name).domain, mode="any")
    print(f"{what:24s} {c:3d}  {next(it).plan}")
