"""Random polynomials for property suites (seeded, exact coefficients)."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

from .poly import Poly
from .ratexpr import RatExpr


def random_poly(names: Sequence[str], max_degree: int, rng: random.Random, *, terms: int = 4, coef_range: int = 5) -> RatExpr:
    names = tuple(names)
    monos = [()]
    for d in range(1, max_degree + 1):
        for combo in combinations_with_replacement(names, d):
            exps: dict = {}
            for v in combo:
                exps[v] = exps.get(v, 0) + 1
            monos.append(tuple(sorted(exps.items())))
    chosen = rng.sample(monos, min(terms, len(monos)))
    data = {}
    for m in chosen:
        c = 0
        while c == 0:
            c = rng.randint(-coef_range, coef_range)
        data[m] = Fraction(c)
    return RatExpr(Poly(data), None, names)


def random_ratexpr(names: Sequence[str], max_degree: int, rng: random.Random) -> RatExpr:
    den = RatExpr.const(0)
    while den.is_zero():
        den = random_poly(names, max(1, max_degree // 2), rng, terms=2)
    return random_poly(names, max_degree, rng) / den
