"""Planning with action costs in the action language K^c.

Typical use::

    from kcplan import fixtures, find_optimal_plans
    pr = fixtures.load("bridge")
    cost, plans = find_optimal_plans(pr.domain)
"""

from __future__ import annotations

from .background import BackgroundModel, SymbolOrder, evaluate_background
from .errors import (
    KcError,
    KcSemanticError,
    KcSyntaxError,
    NoPlanError,
    RewriteError,
    SecurityCheckInconclusive,
    WellDefinednessError,
)
from .grounder import GAtom, GroundDomain, check_well_defined, ground
from .kclang import Program, Query, format_program, parse_program, validate
from .planner import (
    Plan,
    PlanVerdict,
    Trajectory,
    find_optimal_plans,
    find_optimal_secure_plans,
    find_optimistic_plans,
    is_secure,
    plan_cost,
    shortest_plan_length,
)
from .problem import Problem, from_program, load_files, load_texts
from .rewriter import RewriteResult, rewrite, rewrite_beta, rewrite_delta, rewrite_gamma
from .translator import LPProgram, parse_lp, trajectory_image, translate_lpw, translate_minimize, weak_cost_of_image

__version__ = "0.1.0"

__all__ = [
    "BackgroundModel",
    "GAtom",
    "GroundDomain",
    "KcError",
    "KcSemanticError",
    "KcSyntaxError",
    "LPProgram",
    "NoPlanError",
    "Plan",
    "PlanVerdict",
    "Problem",
    "Program",
    "Query",
    "RewriteError",
    "RewriteResult",
    "SecurityCheckInconclusive",
    "SymbolOrder",
    "Trajectory",
    "WellDefinednessError",
    "check_well_defined",
    "evaluate_background",
    "find_optimal_plans",
    "find_optimal_secure_plans",
    "find_optimistic_plans",
    "format_program",
    "from_program",
    "ground",
    "is_secure",
    "load_files",
    "load_texts",
    "parse_lp",
    "parse_program",
    "plan_cost",
    "rewrite",
    "rewrite_beta",
    "rewrite_delta",
    "rewrite_gamma",
    "shortest_plan_length",
    "trajectory_image",
    "translate_lpw",
    "translate_minimize",
    "validate",
    "weak_cost_of_image",
]
