"""Printing of rational functions in the input grammar, minimal parentheses.

Leading signs only ever attach to integer literals (``-1*x``, never ``-x``),
because the grammar has no unary minus.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import Poly


def _mono_text(m) -> str:
    return "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)


def _coef_text(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _term_text(m, c: Fraction) -> str:
    """Text of ``c*m``; ``c`` may be negative only for the first term."""
    if not m:
        return _coef_text(c)
    mono = _mono_text(m)
    if c == 1:
        return mono
    return f"{_coef_text(c)}*{mono}"


def poly_text(p: Poly, order) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for i, (m, c) in enumerate(p.sorted_terms(order)):
        if i == 0:
            parts.append(_term_text(m, c))
        elif c < 0:
            parts.append("-" + _term_text(m, -c))
        else:
            parts.append("+" + _term_text(m, c))
    return "".join(parts)


def _is_plain_factor(p: Poly) -> bool:
    """True if ``p`` prints as one factor that can follow ``/`` unparenthesized."""
    if len(p.terms) != 1:
        return False
    (m, c), = p.terms.items()
    if c != 1:
        return False
    return len(m) == 1


def to_text(expr) -> str:
    order = expr.vars
    num = poly_text(expr.num, order)
    if expr.den == Poly.const(1):
        return num
    den = poly_text(expr.den, order)
    if len(expr.num.terms) > 1:
        num = f"({num})"
    if not _is_plain_factor(expr.den):
        den = f"({den})"
    return f"{num}/{den}"
