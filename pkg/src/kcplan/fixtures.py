"""The bundled example problems, addressable by name."""

from __future__ import annotations

from importlib import resources

from .kclang import Program, parse_program
from .problem import DEFAULT_INT_BOUND, Problem, load_texts

_TSP = ("tsp/austria.bk", "tsp/weekdays.bk")

FIXTURES: dict[str, tuple[tuple[str, ...], int]] = {
    "bridge": (("bridge/crossing.bk", "bridge/crossing.plan"), DEFAULT_INT_BOUND),
    "bridge-k": (("bridge/crossing.bk", "bridge/crossing_k.plan"), DEFAULT_INT_BOUND),
    "bridge-secure": (("bridge/crossing.bk", "bridge/crossing_secure.plan"), DEFAULT_INT_BOUND),
    "blocks-p0": (("blocks/p0.bk", "blocks/blocks.plan", "blocks/p0.plan"), DEFAULT_INT_BOUND),
    "blocks-p0-k": (("blocks/p0.bk", "blocks/blocks_k.plan", "blocks/p0.plan"), DEFAULT_INT_BOUND),
    "blocks-p0-gamma": (("blocks/p0.bk", "blocks/gamma_p0.plan"), DEFAULT_INT_BOUND),
    "blocks-p1": (("blocks/p1.bk", "blocks/blocks.plan", "blocks/p1.plan"), DEFAULT_INT_BOUND),
    "blocks-p2": (("blocks/p2.bk", "blocks/blocks.plan", "blocks/p2.plan"), DEFAULT_INT_BOUND),
    "blocks-p3": (("stress/p3.bk", "blocks/blocks.plan", "stress/p3.plan"), DEFAULT_INT_BOUND),
    "blocks-p4": (("stress/p4.bk", "blocks/blocks.plan", "stress/p4.plan"), DEFAULT_INT_BOUND),
    "blocks-p5": (("stress/p5.bk", "blocks/blocks.plan", "stress/p5.plan"), DEFAULT_INT_BOUND),
    "buying": (("buying/buying.bk", "buying/buying.plan"), 10),
    "tsp": (("tsp/austria.bk", "tsp/austria.plan"), 10),
    "tsp-exc": ((*_TSP, "tsp/exc.bk", "tsp/austria_weekdays.plan"), 10),
    "tsp-we": ((*_TSP, "tsp/we.bk", "tsp/austria_weekdays.plan"), 10),
    "tsp-lwe": ((*_TSP, "tsp/lwe.bk", "tsp/austria_weekdays.plan"), 10),
    "tsp-rnd10": ((*_TSP, "tsp/rnd10.bk", "tsp/austria_weekdays.plan"), 10),
    "tsp-rnd50": ((*_TSP, "tsp/rnd50.bk", "tsp/austria_weekdays.plan"), 10),
    "tsp-rnd100": ((*_TSP, "tsp/rnd100.bk", "tsp/austria_weekdays.plan"), 10),
    "tsp-rnd200": ((*_TSP, "tsp/rnd200.bk", "tsp/austria_weekdays.plan"), 10),
    "bad-conflicting-cost": (("wd/conflict.plan",), DEFAULT_INT_BOUND),
    "bad-missing-witness": (("wd/missing.plan",), DEFAULT_INT_BOUND),
}


def data_path(name: str):
    """A traversable for a file below the package's data directory."""
    path = resources.files("kcplan") / "data"
    for part in name.split("/"):
        path = path / part
    return path


def read(name: str) -> str:
    return data_path(name).read_text()


def files(name: str) -> tuple[str, ...]:
    try:
        return FIXTURES[name][0]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}") from None


def program(name: str) -> Program:
    fs = files(name)
    return parse_program([read(f) for f in fs], list(fs))


def load(name: str, **kw) -> Problem:
    fs = files(name)
    kw.setdefault("int_bound", FIXTURES[name][1])
    return load_texts([read(f) for f in fs], fs, **kw)
