"""Pretty printer producing text that parses back to an equal Program."""

from __future__ import annotations

from .ast import Program


def format_program(p: Program, include_background: bool = True) -> str:
    out: list[str] = []
    if include_background and p.background:
        out += [str(r) for r in p.background]
        out.append("")
    if p.fluent_decls:
        out.append("fluents:")
        out += [f"  {d}" for d in p.fluent_decls]
    if p.action_decls:
        out.append("actions:")
        out += [f"  {d}" for d in p.action_decls]
    if p.initially:
        out.append("initially:")
        out += [f"  {s}" for s in p.initially]
    if p.always or p.no_concurrency:
        out.append("always:")
        out += [f"  {s}" for s in p.always]
        if p.no_concurrency:
            out.append("  noConcurrency.")
    if p.query is not None:
        out.append("")
        out.append(f"goal: {p.query}")
    return "\n".join(out) + "\n"


def format_background(p: Program) -> str:
    return "".join(f"{r}\n" for r in p.background)
