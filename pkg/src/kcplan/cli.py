"""Command-line driver.

Exit status: 0 when a plan was found (or a rewrite, translation or check
succeeded), 1 when no plan exists under the requested conditions, 2 on
usage, parse, validation or well-definedness errors.  Plans go to stdout,
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import itertools
import sys
from pathlib import Path
from typing import Callable, Iterator, Sequence, TextIO

from . import fixtures
from .errors import KcError, NoPlanError, SecurityCheckInconclusive
from .grounder import check_well_defined
from .kclang import Program, format_program, parse_program
from .planner import (
    DEFAULT_STATE_CAP,
    STRATEGIES,
    PlanVerdict,
    find_optimal_plans,
    find_optimal_secure_plans,
    find_optimistic_plans,
    is_secure,
)
from .problem import DEFAULT_INT_BOUND, Problem, check_program, from_program
from .rewriter import KINDS, rewrite
from .translator import translate_lpw, translate_minimize

EXIT_PLAN, EXIT_NO_PLAN, EXIT_ERROR = 0, 1, 2


class _Out:
    def __init__(self, out: TextIO, err: TextIO):
        self.out, self.err = out, err

    def line(self, s: str = "") -> None:
        print(s, file=self.out, flush=True)

    def note(self, s: str) -> None:
        print(s, file=self.err, flush=True)


# -- input ------------------------------------------------------------------


def _read_program(args) -> Program:
    if args.fixture:
        if args.files:
            raise KcError("give either input files or --fixture, not both")
        return fixtures.program(args.fixture)
    if not args.files:
        raise KcError("no input files")
    texts = []
    for f in args.files:
        try:
            texts.append(Path(f).read_text())
        except OSError as e:
            raise KcError(f"cannot read {f}: {e.strerror}") from None
    return parse_program(texts, list(args.files))


def _int_bound(args) -> int:
    if args.int_bound is not None:
        return args.int_bound
    if args.fixture:
        return fixtures.FIXTURES[args.fixture][1]
    return DEFAULT_INT_BOUND


def _load(args, plan_length: int | None, well_defined: bool = True) -> Problem:
    return from_program(
        _read_program(args),
        plan_length=plan_length,
        int_bound=_int_bound(args),
        strict_arithmetic=args.strict_arithmetic,
        well_defined=well_defined,
    )


# -- plan -------------------------------------------------------------------


def _format_trajectory(pr: Problem, v: PlanVerdict) -> list[str]:
    gd = pr.domain
    fmt = lambda atoms: ", ".join(map(str, gd.sort_atoms(atoms)))  # noqa: E731
    out = [f"STATE 0: {fmt(v.witness.initial)}"]
    for j, t in enumerate(v.witness.transitions, 1):
        out.append(f"ACTIONS {j}: {fmt(t.actions)}")
        out.append(f"STATE {j}: {fmt(t.target)}")
    return out


def _ask(prompt: str, o: _Out, stdin: TextIO) -> bool:
    print(prompt + " [y/N] ", end="", file=o.err, flush=True)
    ans = stdin.readline()
    return ans.strip().lower() in ("y", "yes")


def _search(pr: Problem, args) -> tuple[int | None, Iterator[PlanVerdict]]:
    """Cost* (None in admissible optimistic mode) and the plans to report.

    Raises NoPlanError when nothing qualifies.
    """
    gd, q = pr.domain, pr.query
    enum = "all" if args.all or args.confirm else "any"
    if args.mode == "secure":
        return find_optimal_secure_plans(
            gd, q, enum, args.costbound, strategy=args.strategy, state_cap=args.state_cap
        )
    if args.costbound is None:
        return find_optimal_plans(gd, q, enum, strategy=args.strategy)
    it = find_optimistic_plans(gd, q, enum, args.costbound)
    first = next(it, None)
    if first is None:
        raise NoPlanError(f"no admissible plan of length {q.plan_length} with cost at most {args.costbound}", "admissible")
    return None, itertools.chain([first], it)


def _report(pr: Problem, args, o: _Out, stdin: TextIO, found=None) -> int:
    cost, plans = found or _search(pr, args)
    n = 0
    for v in plans:
        n += 1
        if args.trajectory:
            for s in _format_trajectory(pr, v):
                o.line(s)
        o.line(v.plan.format())
        if not args.confirm:
            continue
        if args.mode == "optimistic" and _ask("Check whether this plan is secure?", o, stdin):
            ok = is_secure(pr.domain, pr.query, v.plan.steps, args.state_cap)
            o.line("SECURE" if ok else "NOT SECURE")
        if not _ask("Look for further plans?", o, stdin):
            break
    if cost is not None:
        o.line(f"OPTIMAL COST: {cost}")
    o.note(f"{n} plan{'s' if n != 1 else ''} reported at plan length {pr.query.plan_length}")
    return EXIT_PLAN


def cmd_plan(args, o: _Out, stdin: TextIO) -> int:
    if args.deepen is None:
        return _report(_load(args, args.planlength), args, o, stdin)
    base = _load(args, args.planlength if args.planlength is not None else 0)
    start = args.planlength or 0
    for l in range(start, args.deepen + 1):
        pr = base.at_length(l)
        try:
            cost, plans = _search(pr, args)
            first = next(plans)
        except (NoPlanError, StopIteration):
            continue
        o.line(f"PLAN LENGTH: {l}")
        return _report(pr, args, o, stdin, (cost, itertools.chain([first], plans)))
    what = "secure plan" if args.mode == "secure" else "plan"
    if args.costbound is not None:
        what = f"{'secure ' if args.mode == 'secure' else 'admissible '}plan with cost at most {args.costbound}"
    o.note(f"no {what} of length {start} to {args.deepen}")
    return EXIT_NO_PLAN


# -- rewrite, translate, check ----------------------------------------------


def _emit(text: str, args, o: _Out) -> None:
    if args.output:
        Path(args.output).write_text(text)
        o.note(f"wrote {args.output}")
    else:
        o.out.write(text)
        o.out.flush()


def cmd_rewrite(args, o: _Out, stdin: TextIO) -> int:
    p = _read_program(args)
    check_program(p)
    kw: dict = {"on_clash": "rename" if args.rename else "error"}
    if args.kind == "delta":
        kw.update(factor=args.factor, int_bound=_int_bound(args), allow_tight_factor=args.allow_tight_factor)
    elif args.factor is not None:
        raise KcError("--factor only applies to the delta rewriting")
    res = rewrite(p, args.kind, args.horizon, **kw)
    for n in res.notes:
        o.note(f"warning: {n}")
    if not args.solve:
        _emit(format_program(res.program), args, o)
        return EXIT_PLAN
    pr = from_program(res.program, int_bound=_int_bound(args), strict_arithmetic=args.strict_arithmetic)
    cost, plans = find_optimal_plans(pr.domain, mode="any")
    v = next(plans)
    d = res.decode(cost, res.finish_time(v.plan.steps))
    o.line(v.plan.format())
    o.line(f"DECODED: steps={d.steps} cost={d.cost} finish={d.finish_time}")
    return EXIT_PLAN


def cmd_translate(args, o: _Out, stdin: TextIO) -> int:
    p = _read_program(args)
    check_program(p)
    fn = translate_minimize if args.minimize else translate_lpw
    _emit(fn(p, args.planlength).text, args, o)
    return EXIT_PLAN


def cmd_check(args, o: _Out, stdin: TextIO) -> int:
    pr = _load(args, args.planlength, well_defined=False)
    diags = check_well_defined(pr.domain)
    for d in diags:
        o.line(f"well-definedness: {d}")
    if pr.model.truncations:
        o.note(f"note: {pr.model.truncations} arithmetic results exceeded the integer bound {pr.model.int_bound}")
    if diags:
        return EXIT_ERROR
    o.line(f"OK: {len(pr.domain.legal_fluents)} fluent and {len(pr.domain.legal_actions)} action instances")
    return EXIT_PLAN


# -- argument parsing ---------------------------------------------------------


def _inputs(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("files", nargs="*", help="background and program files, read in order")
    sp.add_argument("--fixture", choices=sorted(fixtures.FIXTURES), help="use a bundled example instead of files")
    sp.add_argument("-N", "--int-bound", type=int, metavar="N", help="largest integer (default 20, or the fixture's)")
    sp.add_argument(
        "--strict-arithmetic", action="store_true", help="fail instead of dropping arithmetic results above N"
    )


def _planlength(sp: argparse.ArgumentParser) -> None:
    sp.add_argument(
        "-planlength", "--planlength", "--plan-length", type=int, metavar="I", help="override the goal's plan length"
    )


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kcplan", description="Planning with action costs in the action language K^c.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("plan", help="find optimal, admissible or secure plans")
    _inputs(sp)
    _planlength(sp)
    sp.add_argument("-costbound", "--costbound", "--cost-bound", type=_nonneg, metavar="C", help="admissible plans only")
    sp.add_argument("--mode", choices=("optimistic", "secure"), default="optimistic")
    sp.add_argument("--secure", dest="mode", action="store_const", const="secure", help="same as --mode=secure")
    sp.add_argument("--all", action="store_true", help="report every qualifying plan, not only the first")
    sp.add_argument("--deepen", type=_nonneg, metavar="L", help="try plan lengths from 0 (or -planlength) up to L")
    sp.add_argument("--confirm", action="store_true", help="ask before security checks and further plans")
    sp.add_argument("--trajectory", action="store_true", help="print a supporting trajectory before each plan")
    sp.add_argument("--strategy", choices=STRATEGIES, default="astar", help=argparse.SUPPRESS)
    sp.add_argument("--state-cap", type=int, default=DEFAULT_STATE_CAP, help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_plan)

    sp = sub.add_parser("rewrite", help="emit the shortest or cheapest-plan rewriting of a program")
    _inputs(sp)
    g = sp.add_mutually_exclusive_group(required=True)
    for k in KINDS:
        g.add_argument(f"--{k}", dest="kind", action="store_const", const=k)
    sp.add_argument("--horizon", type=_nonneg, required=True, metavar="I", help="largest plan length considered")
    sp.add_argument("--factor", type=int, metavar="F", help="delta only: weight of one time step")
    sp.add_argument("--allow-tight-factor", action="store_true", help="accept a factor below the safe bound")
    sp.add_argument("--rename", action="store_true", help="rename gr/finish if the program already uses them")
    sp.add_argument("--solve", action="store_true", help="plan on the rewritten program and decode the result")
    sp.add_argument("-o", "--output", metavar="FILE")
    sp.set_defaults(func=cmd_rewrite)

    sp = sub.add_parser("translate", help="emit the logic-program translation")
    _inputs(sp)
    _planlength(sp)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--weak", action="store_true", help="weak constraints (default)")
    g.add_argument("--minimize", action="store_true", help="a minimize statement instead of weak constraints")
    sp.add_argument("-o", "--output", metavar="FILE")
    sp.set_defaults(func=cmd_translate)

    sp = sub.add_parser("check", help="static checks and cost well-definedness")
    _inputs(sp)
    _planlength(sp)
    sp.set_defaults(func=cmd_check)
    return ap


def main(argv: Sequence[str] | None = None, *, stdout: TextIO | None = None, stderr: TextIO | None = None,
         stdin: TextIO | None = None) -> int:
    o = _Out(stdout or sys.stdout, stderr or sys.stderr)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_PLAN
    func: Callable = args.func
    try:
        return func(args, o, stdin or sys.stdin)
    except NoPlanError as e:
        o.note(str(e))
        return EXIT_NO_PLAN
    except SecurityCheckInconclusive as e:
        o.note(f"error: {e}")
        return EXIT_ERROR
    except KcError as e:
        o.note(f"error: {e}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
