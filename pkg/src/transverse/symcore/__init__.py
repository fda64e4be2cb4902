"""Exact rational-function kernel: arithmetic, calculus, parsing, printing."""

from .chart import Chart, eval_at
from .errors import DivisionByZeroError, ParseError, PoleError, SymbolicError, UnknownVariableError
from .logsum import LogSum, LogTerm, Truth
from .parser import parse
from .poly import Poly
from .quadrature import integrate_density
from .ratexpr import RatExpr

__all__ = [
    "Chart",
    "DivisionByZeroError",
    "LogSum",
    "LogTerm",
    "ParseError",
    "Poly",
    "PoleError",
    "RatExpr",
    "SymbolicError",
    "Truth",
    "UnknownVariableError",
    "arith",
    "diff",
    "eval_at",
    "integrate_density",
    "parse",
]


def arith(op: str, a, b) -> RatExpr:
    a, b = RatExpr.coerce(a), RatExpr.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def diff(f: RatExpr, var: str, names=None) -> RatExpr:
    """Partial derivative; ``names`` (default ``f.vars``) bounds the allowed variables."""
    allowed = f.vars if names is None else tuple(names)
    if var not in allowed:
        raise UnknownVariableError(var)
    return f.diff(var)
