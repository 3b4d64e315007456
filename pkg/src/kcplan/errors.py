"""Exception hierarchy shared by every kcplan module."""

from __future__ import annotations


class KcError(Exception):
    """Base class for all errors raised by kcplan."""


class KcSyntaxError(KcError):
    def __init__(self, message: str, line: int, column: int, source: str | None = None):
        self.line = line
        self.column = column
        self.source = source
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{line}:{column}: {message}")


class KcSemanticError(KcError):
    """Declaration clashes, undeclared predicates, illegal macro use."""


class BackgroundError(KcError):
    pass


class NonTotalModelError(BackgroundError):
    def __init__(self, undefined):
        self.undefined = sorted(undefined, key=str)
        shown = ", ".join(map(str, self.undefined[:5]))
        more = "" if len(self.undefined) <= 5 else f" (+{len(self.undefined) - 5} more)"
        super().__init__(f"background has no total well-founded model; undefined: {shown}{more}")


class IntBoundExceeded(BackgroundError):
    def __init__(self, value: int, bound: int, expr: str = ""):
        self.value = value
        self.bound = bound
        super().__init__(
            f"arithmetic result {value} exceeds the integer bound {bound}"
            + (f" in {expr}" if expr else "")
            + "; raise -N"
        )


class UnsafeRuleError(KcError):
    pass


class GroundingLimitError(KcError):
    pass


class WellDefinednessError(KcError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        lines = "\n".join(f"  {d}" for d in self.diagnostics[:10])
        super().__init__(f"action costs are not well-defined:\n{lines}")


class RewriteError(KcError):
    pass


class NoPlanError(KcError):
    """No plan (or no admissible / no secure plan) exists for the query."""

    def __init__(self, message: str = "no plan exists", kind: str = "plan"):
        self.kind = kind
        super().__init__(message)


class SecurityCheckInconclusive(KcError):
    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"security check inconclusive: state-set cap {cap} exceeded")
