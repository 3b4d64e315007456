"""The bridge again, but nobody knows who holds the lamp.

A secure plan has to work whatever the initial holder is, so someone
has to fetch the lamp first.  Run with: python3 demos/secure_bridge.py
"""

from __future__ import annotations

from kcplan import NoPlanError, find_optimal_secure_plans, fixtures, is_secure

for length in (7, 8):
    gd = fixtures.load("bridge-secure", plan_length=length).domain
    try:
        cost, plans = find_optimal_secure_plans(gd, mode="any")
    except NoPlanError:
        print(f"l={length}: no secure plan")
        continue
    v = next(plans)
    print(f"l={length}: cheapest secure plan costs {cost}")
    print(f"   {v.plan}")
    print(f"   secure by an independent check: {is_secure(gd, None, v.plan.action_sets())}")
