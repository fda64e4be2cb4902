"""Midpoint-rule measure of a box under a rational density.

Pole detection samples the grid nodes and cell midpoints only; a pole that
avoids every sample goes unnoticed.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Sequence

from .errors import PoleError
from .ratexpr import RatExpr


def integrate_density(rho: RatExpr, box: Sequence[tuple], resolution: int, names: Sequence[str] | None = None) -> Fraction:
    """Approximate ``int_box rho`` with ``resolution`` cells per coordinate.

    ``box`` lists one ``(lo, hi)`` rational interval per coordinate, in the
    order of ``names`` (default: ``rho.vars``).
    """
    if resolution < 1:
        raise ValueError("resolution must be a positive integer")
    names = tuple(rho.vars if names is None else names)
    if len(box) != len(names):
        raise ValueError(f"box has {len(box)} intervals for {len(names)} coordinates")
    extra = rho.variables() - set(names)
    if extra:
        raise ValueError(f"density depends on undeclared variables {sorted(extra)}")
    intervals = [(Fraction(lo), Fraction(hi)) for lo, hi in box]
    steps = [(hi - lo) / resolution for lo, hi in intervals]

    axes_nodes = [[lo + k * h for k in range(resolution + 1)] for (lo, _), h in zip(intervals, steps)]
    axes_mid = [[lo + (k + Fraction(1, 2)) * h for k in range(resolution)] for (lo, _), h in zip(intervals, steps)]

    den = rho.den
    if not den.is_constant():
        for grid in (axes_nodes, axes_mid):
            for pt in product(*grid):
                point = dict(zip(names, pt))
                if den.evaluate(point) == 0:
                    raise PoleError(f"density {rho} has a pole at {tuple(str(c) for c in pt)}", pt)

    cell = Fraction(1)
    for h in steps:
        cell *= h
    total = Fraction(0)
    for pt in product(*axes_mid):
        total += rho.evaluate(dict(zip(names, pt)))
    return total * cell
