"""Sparse multivariate polynomials with exact rational coefficients.

Monomials are stored as tuples of ``(name, exponent)`` pairs sorted by name,
so a polynomial does not depend on any declared variable order.  Orders only
matter for choosing a leading term (normalization) and for printing.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from sympy import QQ, ring

Monomial = tuple  # tuple[tuple[str, int], ...]

ONE_MONOMIAL: Monomial = ()


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def grlex_key(m: Monomial, order: Sequence[str]):
    """Sort key for graded lex over ``order`` (larger key = larger monomial)."""
    exps = dict(m)
    return (mono_degree(m), tuple(exps.get(v, 0) for v in order))


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"expected an exact rational, got {type(c).__name__}")


class Poly:
    """Immutable sparse polynomial over the rationals."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                if c:
                    clean[m] = _as_fraction(c)
        self.terms: dict = clean
        self._hash = None

    # construction -----------------------------------------------------
    @classmethod
    def const(cls, c) -> "Poly":
        return cls({ONE_MONOMIAL: _as_fraction(c)})

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls({((name, 1),): Fraction(1)})

    # queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and ONE_MONOMIAL in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get(ONE_MONOMIAL, Fraction(0))

    def variables(self) -> set[str]:
        return {v for m in self.terms for v, _ in m}

    def degree(self) -> int:
        return max((mono_degree(m) for m in self.terms), default=-1)

    def leading(self, order: Sequence[str]) -> tuple[Monomial, Fraction]:
        m = max(self.terms, key=lambda mm: grlex_key(mm, order))
        return m, self.terms[m]

    def sorted_terms(self, order: Sequence[str]) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0], order), reverse=True)

    def content_denominator(self) -> int:
        return lcm(*(c.denominator for c in self.terms.values())) if self.terms else 1

    def content_numerator(self) -> int:
        return gcd(*(c.numerator for c in self.terms.values())) if self.terms else 0

    # arithmetic -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Poly.const(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out)

    def __sub__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) - c
        return Poly(out)

    def __mul__(self, other: "Poly") -> "Poly":
        if not self.terms or not other.terms:
            return Poly()
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(out)

    def scale(self, c) -> "Poly":
        c = _as_fraction(c)
        if not c:
            return Poly()
        return Poly({m: c * k for m, k in self.terms.items()})

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative exponent")
        result, base = Poly.const(1), self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def diff(self, name: str) -> "Poly":
        out: dict = {}
        for m, c in self.terms.items():
            exps = dict(m)
            e = exps.get(name, 0)
            if not e:
                continue
            if e == 1:
                del exps[name]
            else:
                exps[name] = e - 1
            nm = tuple(sorted(exps.items()))
            out[nm] = out.get(nm, 0) + c * e
        return Poly(out)

    def evaluate(self, point: Mapping[str, Fraction]) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            t = c
            for v, e in m:
                t *= point[v] ** e
            total += t
        return total

    def partial_evaluate(self, point: Mapping[str, Fraction]) -> "Poly":
        out: dict = {}
        for m, c in self.terms.items():
            keep = []
            for v, e in m:
                if v in point:
                    c = c * point[v] ** e
                else:
                    keep.append((v, e))
            nm = tuple(keep)
            out[nm] = out.get(nm, 0) + c
        return Poly(out)

    def degree_in(self, name: str) -> int:
        return max((dict(m).get(name, 0) for m in self.terms), default=0)

    def __repr__(self):
        return f"Poly({self.terms!r})"


def poly_sum(polys: Iterable[Poly]) -> Poly:
    out: dict = {}
    for p in polys:
        for m, c in p.terms.items():
            out[m] = out.get(m, 0) + c
    return Poly(out)


# gcd via sympy's sparse polynomial rings ------------------------------------

@lru_cache(maxsize=64)
def _ring(names: tuple):
    return ring(",".join(names), QQ)[0] if names else None


def _to_sympy(p: Poly, R, index: dict):
    n = len(index)
    data = {}
    for m, c in p.terms.items():
        exps = [0] * n
        for v, e in m:
            exps[index[v]] = e
        data[tuple(exps)] = QQ(c.numerator, c.denominator)
    return R.from_dict(data)


def _from_sympy(sp, names: tuple) -> Poly:
    out = {}
    for exps, c in sp.items():
        m = tuple((names[i], e) for i, e in enumerate(exps) if e)
        out[m] = Fraction(int(c.numerator), int(c.denominator))
    return Poly(out)


def cancel_common(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    """Divide out ``gcd(num, den)``; the returned pair is coprime."""
    if num.is_zero():
        return num, Poly.const(1)
    if den.is_constant() or num.is_constant():
        return num, den
    names = tuple(sorted(num.variables() | den.variables()))
    R = _ring(names)
    index = {v: i for i, v in enumerate(names)}
    _, cf, cg = _to_sympy(num, R, index).cofactors(_to_sympy(den, R, index))
    return _from_sympy(cf, names), _from_sympy(cg, names)
