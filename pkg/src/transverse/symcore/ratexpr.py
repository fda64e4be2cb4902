"""Canonical-form rational functions over the rationals."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

from .errors import DivisionByZeroError, PoleError
from .poly import Poly, cancel_common

Number = int | Fraction


def merge_orders(*orders: Sequence[str]) -> tuple[str, ...]:
    out: list[str] = []
    seen: set[str] = set()
    for order in orders:
        for v in order:
            if v not in seen:
                seen.add(v)
                out.append(v)
    return tuple(out)


def _complete_order(order: tuple[str, ...], *polys: Poly) -> tuple[str, ...]:
    used: set[str] = set()
    for p in polys:
        used |= p.variables()
    missing = sorted(used - set(order))
    return order + tuple(missing) if missing else order


class RatExpr:
    """A rational function ``numerator / denominator`` in canonical form.

    Canonical form: numerator and denominator are coprime, the denominator
    has integer coefficients with content 1, and its leading coefficient
    (graded lex over ``vars``) is positive.  ``vars`` is the declared
    variable order; it may list variables that do not occur.
    """

    __slots__ = ("num", "den", "vars", "_hash")

    def __init__(self, num: Poly, den: Poly | None = None, vars: Iterable[str] = (), *, _normalized=False):
        den = Poly.const(1) if den is None else den
        order = _complete_order(tuple(vars), num, den)
        if not _normalized:
            if den.is_zero():
                raise DivisionByZeroError("division by the zero rational function")
            num, den = _normalize(num, den, order)
        self.num = num
        self.den = den
        self.vars = order
        self._hash = None

    # construction -----------------------------------------------------
    @classmethod
    def const(cls, c: Number) -> "RatExpr":
        c = Fraction(c)
        return cls(Poly.const(c), Poly.const(1), (), _normalized=True)

    @classmethod
    def var(cls, name: str, vars: Iterable[str] = ()) -> "RatExpr":
        return cls(Poly.var(name), Poly.const(1), merge_orders(tuple(vars), (name,)), _normalized=True)

    @classmethod
    def coerce(cls, value) -> "RatExpr":
        if isinstance(value, RatExpr):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.const(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to RatExpr")

    def with_vars(self, vars: Iterable[str]) -> "RatExpr":
        """Same function, re-declared over ``vars`` (renormalized)."""
        return RatExpr(self.num, self.den, merge_orders(tuple(vars), self.vars))

    # queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.constant_value() / self.den.constant_value()

    def variables(self) -> set[str]:
        return self.num.variables() | self.den.variables()

    # equality ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatExpr.const(other)
        if not isinstance(other, RatExpr):
            return NotImplemented
        if self.num == other.num and self.den == other.den:
            return True
        if self.vars == other.vars:
            return False
        # canonical forms under different orders agree up to a common sign
        return (self.num * other.den) == (other.num * self.den)

    def __hash__(self):
        if self._hash is None:
            names = tuple(sorted(self.variables()))
            num, den = self.num, self.den
            if den.leading(names)[1] < 0:
                num, den = -num, -den
            self._hash = hash((num, den))
        return self._hash

    # arithmetic -------------------------------------------------------
    def __neg__(self):
        return RatExpr(-self.num, self.den, self.vars, _normalized=True)

    def __add__(self, other):
        try:
            other = RatExpr.coerce(other)
        except TypeError:
            return NotImplemented
        order = merge_orders(self.vars, other.vars)
        if self.den == other.den:
            return RatExpr(self.num + other.num, self.den, order)
        return RatExpr(self.num * other.den + other.num * self.den, self.den * other.den, order)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = RatExpr.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return RatExpr.coerce(other) - self

    def __mul__(self, other):
        try:
            other = RatExpr.coerce(other)
        except TypeError:
            return NotImplemented
        order = merge_orders(self.vars, other.vars)
        if other.is_constant():
            return RatExpr(self.num.scale(other.constant_value()), self.den, order)
        if self.is_constant():
            return RatExpr(other.num.scale(self.constant_value()), other.den, order)
        return RatExpr(self.num * other.num, self.den * other.den, order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            other = RatExpr.coerce(other)
        except TypeError:
            return NotImplemented
        if other.is_zero():
            raise DivisionByZeroError("division by the zero rational function")
        order = merge_orders(self.vars, other.vars)
        return RatExpr(self.num * other.den, self.den * other.num, order)

    def __rtruediv__(self, other):
        return RatExpr.coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("exponent must be an integer")
        if k < 0:
            if self.is_zero():
                raise DivisionByZeroError("zero to a negative power")
            return RatExpr(self.den ** -k, self.num ** -k, self.vars)
        return RatExpr(self.num ** k, self.den ** k, self.vars, _normalized=True) if k else RatExpr.const(1)

    # calculus and evaluation -----------------------------------------
    def diff(self, name: str) -> "RatExpr":
        dn = self.num.diff(name)
        dd = self.den.diff(name)
        if dd.is_zero():
            return RatExpr(dn, self.den, self.vars)
        return RatExpr(dn * self.den - self.num * dd, self.den * self.den, self.vars)

    def evaluate(self, point: Mapping[str, Number]) -> Fraction:
        pt = {k: Fraction(v) for k, v in point.items()}
        missing = self.variables() - pt.keys()
        if missing:
            raise KeyError(f"no value for {sorted(missing)}")
        d = self.den.evaluate(pt)
        if d == 0:
            raise PoleError(f"pole of {self} at {point}", point)
        return self.num.evaluate(pt) / d

    def partial_evaluate(self, point: Mapping[str, Number]) -> "RatExpr":
        pt = {k: Fraction(v) for k, v in point.items()}
        den = self.den.partial_evaluate(pt)
        if den.is_zero():
            raise PoleError(f"denominator of {self} vanishes identically at {point}", point)
        order = tuple(v for v in self.vars if v not in pt)
        return RatExpr(self.num.partial_evaluate(pt), den, order)

    def subs(self, mapping: Mapping[str, "RatExpr | Number"]) -> "RatExpr":
        """Simultaneous substitution of variables by rational functions."""
        mapping = {k: RatExpr.coerce(v) for k, v in mapping.items() if k in self.variables()}
        if not mapping:
            return self
        if all(v.is_constant() for v in mapping.values()):
            return self.partial_evaluate({k: v.constant_value() for k, v in mapping.items()})
        n_num, n_den = _subs_poly(self.num, mapping)
        d_num, d_den = _subs_poly(self.den, mapping)
        if d_num.is_zero():
            raise PoleError(f"substitution makes the denominator of {self} vanish")
        kept = tuple(v for v in self.vars if v not in mapping)
        order = merge_orders(kept, *(r.vars for r in mapping.values()))
        return RatExpr(n_num * d_den, n_den * d_num, order)

    # printing ---------------------------------------------------------
    def __str__(self):
        from .printer import to_text

        return to_text(self)

    def __repr__(self):
        return f"RatExpr({str(self)!r})"


def _normalize(num: Poly, den: Poly, order: tuple[str, ...]) -> tuple[Poly, Poly]:
    if num.is_zero():
        return Poly(), Poly.const(1)
    num, den = cancel_common(num, den)
    # scale so den has integer coefficients, content 1, positive leading coeff
    factor = Fraction(den.content_denominator())
    int_den_content = gcd(*((c * factor).numerator for c in den.terms.values()))
    factor /= int_den_content
    if den.leading(order)[1] < 0:
        factor = -factor
    if factor != 1:
        num, den = num.scale(factor), den.scale(factor)
    return num, den


def _subs_poly(p: Poly, mapping: Mapping[str, RatExpr]) -> tuple[Poly, Poly]:
    """Return (N, D) with p(mapping) = N / D, D a product of powers of denominators."""
    degs = {v: p.degree_in(v) for v in mapping}
    num_pows: dict = {}
    den_pows: dict = {}

    def npow(v, k):
        key = (v, k)
        if key not in num_pows:
            num_pows[key] = mapping[v].num ** k
        return num_pows[key]

    def dpow(v, k):
        key = (v, k)
        if key not in den_pows:
            den_pows[key] = mapping[v].den ** k
        return den_pows[key]

    total: dict = {}
    for m, c in p.terms.items():
        rest = []
        exps = dict(m)
        for v, e in m:
            if v not in mapping:
                rest.append((v, e))
        term = Poly({tuple(rest): c})
        for v in mapping:
            e = exps.get(v, 0)
            if e:
                term = term * npow(v, e)
            if degs[v] - e:
                term = term * dpow(v, degs[v] - e)
        for mm, cc in term.terms.items():
            total[mm] = total.get(mm, 0) + cc
    den = Poly.const(1)
    for v in mapping:
        if degs[v]:
            den = den * dpow(v, degs[v])
    return Poly(total), den
