"""Regenerate the weekday exception files of the Austria TSP fixtures.

Weekend files halve (rounding down) the cost of every connection, in both
directions, on the listed days.  Random files draw exceptions with a fixed
seed so the fixtures are reproducible.
"""

from __future__ import annotations

import random
import re
from pathlib import Path

DATA = Path(__file__).resolve().parents[1] / "src" / "kcplan" / "data" / "tsp"


def connections() -> list[tuple[str, str, int]]:
    text = (DATA / "austria.bk").read_text()
    return [(a, b, int(c)) for a, b, c in re.findall(r"conn\((\w+), (\w+), (\d+)\)\.", text)]


def halved(days: tuple[int, ...], label: str) -> str:
    lines = [f"% {label}: half price (rounded down) in both directions on days {', '.join(map(str, days))}."]
    for a, b, c in connections():
        facts = [f"cost({x},{y},{d},{c // 2})." for d in days for x, y in ((a, b), (b, a))]
        lines.append(" ".join(facts))
    return "\n".join(lines) + "\n"


def random_exceptions(n: int, seed: int) -> str:
    rng = random.Random(seed)
    conns = connections()
    chosen: dict[tuple[str, str, int], int] = {}
    while len(chosen) < n:
        a, b, _ = rng.choice(conns)
        if rng.random() < 0.5:
            a, b = b, a
        chosen.setdefault((a, b, rng.randint(1, 7)), rng.randint(0, 10))
    lines = [f"% {n} random exceptions (seed {seed}), costs between 0 and 10."]
    lines += [f"cost({a},{b},{d},{c})." for (a, b, d), c in chosen.items()]
    return "\n".join(lines) + "\n"


def main() -> None:
    (DATA / "we.bk").write_text(halved((6, 7), "Weekends"))
    (DATA / "lwe.bk").write_text(halved((5, 6, 7), "Long weekends"))
    for n in (10, 50, 100, 200):
        (DATA / f"rnd{n}.bk").write_text(random_exceptions(n, seed=n))


if __name__ == "__main__":
    main()
