"""Search for blocks-world instances with given shortest-plan statistics.

Only the statistics of the P1 and P2 instances are known: the number of
blocks, the least number of parallel steps, the least number of moves at
that length, and the least number of moves overall.  This script walks
(initial, goal) tower configurations in a fixed pseudo-random order and
prints the first pair that matches, as .bk/.plan text.

    PYTHONPATH=src python3 tools/reconstruct_blocks.py 4 3 4 4
    PYTHONPATH=src python3 tools/reconstruct_blocks.py 5 5 6 6

Pass 0 for a move count that should not be checked; the stress
instances P3-P5 only match the block and step counts.
"""

from __future__ import annotations

import argparse
import random

from kcplan.errors import NoPlanError
from kcplan.fixtures import read
from kcplan.planner import find_optimal_plans
from kcplan.problem import load_texts


def towers(n: int, rng: random.Random) -> list[list[int]]:
    blocks = list(range(1, n + 1))
    rng.shuffle(blocks)
    out: list[list[int]] = []
    for b in blocks:
        if out and rng.random() < 0.6:
            rng.choice(out).append(b)
        else:
            out.append([b])
    return out


def facts(ts: list[list[int]]) -> list[str]:
    """``on`` atoms, each tower listed bottom first."""
    out = []
    for t in ts:
        below = "table"
        for b in t:
            out.append(f"on({b},{below})")
            below = str(b)
    return sorted(out)


def texts(n: int, init: list[str], goal: list[str], length: int) -> tuple[str, str]:
    bk = " ".join(f"block({b})." for b in range(1, n + 1)) + "\nlocation(table).\nlocation(B) :- block(B).\n"
    plan = f"initially: {'. '.join(init)}.\ngoal:      {', '.join(goal)} ? ({length})\n"
    return bk, plan


def least_moves(bk: str, plan: str, rules: str, length: int) -> int | None:
    pr = load_texts([bk, rules, plan], plan_length=length)
    try:
        return find_optimal_plans(pr.domain, mode="any")[0]
    except NoPlanError:
        return None


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("blocks", type=int)
    ap.add_argument("steps", type=int, help="least number of parallel steps")
    ap.add_argument("moves_at_steps", type=int, help="least number of moves at that length")
    ap.add_argument("moves", type=int, help="least number of moves at any length")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--tries", type=int, default=5000)
    a = ap.parse_args()
    rng = random.Random(a.seed)
    rules = read("blocks/blocks.plan")
    for k in range(a.tries):
        init, goal = facts(towers(a.blocks, rng)), facts(towers(a.blocks, rng))
        if init == goal:
            continue
        bk, plan = texts(a.blocks, init, goal, a.steps)
        if least_moves(bk, plan, rules, a.steps - 1) is not None:
            continue
        at_steps = least_moves(bk, plan, rules, a.steps)
        if at_steps is None or a.moves_at_steps and at_steps != a.moves_at_steps:
            continue
        if a.moves and least_moves(bk, plan, rules, a.moves) != a.moves:
            continue
        print(f"% found after {k + 1} tries (seed {a.seed})")
        print(bk + plan, end="")
        return
    raise SystemExit("no matching instance found")


if __name__ == "__main__":
    main()
