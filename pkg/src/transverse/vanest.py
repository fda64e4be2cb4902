"""Degree-one Van Est map for Lie group action models.

Cocycles are differentiated at the units along the group directions.  The
induced algebroid uses right-invariant generators, which is what makes the
differentiated groupoid cocycles closed and turns the groupoid modular
cocycle into the algebroid one.
"""

from __future__ import annotations

from .algebroid import AlgCocycle1, LieAlgebroid, _require_valid
from .groupoid import AdditiveCocycle, LieActionModel
from .symcore import PoleError, RatExpr, SymbolicError


class VanEstError(ValueError):
    """The cocycle has a pole at the units."""


def induced_algebroid(G: LieActionModel, validate: bool = True) -> LieAlgebroid:
    """Action algebroid of a Lie action model.

    ``rho^j_k = da^j/du_k (0, x)`` and
    ``C^c_ab = -(d2 mul_c/du_a dv_b - d2 mul_c/du_b dv_a)(0, 0)``.
    """
    G.validate()
    r, n = G.rank, G.chart.dim
    at_unit = {c: 0 for c in G.coords}
    anchor = [[G.action_exprs[j].diff(G.coords[k]).subs(at_unit) for k in range(r)] for j in range(n)]
    at_origin = {v: 0 for v in G.left + G.right}
    brackets = {}
    for a in range(r):
        for b in range(a + 1, r):
            vec = []
            for c in range(r):
                m = G.mul_exprs[c]
                ab = m.diff(G.left[a]).diff(G.right[b]).subs(at_origin)
                ba = m.diff(G.left[b]).diff(G.right[a]).subs(at_origin)
                vec.append(ba - ab)
            if any(not e.is_zero() for e in vec):
                brackets[(a, b)] = tuple(vec)
    A = LieAlgebroid(G.chart, r, anchor, brackets, name=f"induced({','.join(G.coords)})")
    if validate:
        _require_valid(A)
    return A


def van_est1(G: LieActionModel, c: AdditiveCocycle) -> AlgCocycle1:
    """VE(c)(e_k)(x) = dc/du_k at u = 0."""
    if c.model is not G:
        raise ValueError("cocycle belongs to a different model")
    (g,) = G.generic_arrows()
    value = c.value(g)
    at_unit = {name: 0 for name in G.coords}
    out = []
    for k in G.coords:
        try:
            out.append(value.diff(k).subs(at_unit))
        except (PoleError, SymbolicError, ZeroDivisionError) as exc:
            raise VanEstError(f"cocycle is singular at the units: {exc}") from exc
    return AlgCocycle1(tuple(RatExpr.coerce(v) for v in out))
