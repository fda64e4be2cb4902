from __future__ import annotations

import sympy

from transverse.symcore import RatExpr


def to_sympy(r: RatExpr, names=None):
    """Independent route: hand the printed form to sympy."""
    names = names or sorted(r.variables())
    syms = {n: sympy.Symbol(n) for n in names}
    return sympy.sympify(str(r).replace("^", "**"), locals=syms)


def sympy_equal(r: RatExpr, expr) -> bool:
    return sympy.simplify(to_sympy(r) - expr) == 0


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
