"""Formal sums ``sum_i q_i * ln|r_i| + R`` with exact rational data.

Equality is three-valued.  Clearing the coefficients to integers ``k_i``,
the log part vanishes exactly when ``prod r_i^k_i = +-1``; a constant
product other than +-1 gives a nonzero transcendental constant and a
nonconstant product gives a non-rational function, so both are definitely
nonzero.  ``UNKNOWN`` is returned only when the product would exceed the
exponent budget.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping

from .errors import DivisionByZeroError, PoleError
from .ratexpr import RatExpr


class Truth(enum.Enum):
    TRUE = "equal"
    FALSE = "not-equal"
    UNKNOWN = "unknown"

    def __bool__(self):
        return self is Truth.TRUE


MAX_CLEARED_EXPONENT = 64


@dataclass(frozen=True)
class LogTerm:
    """``coefficient * ln|argument|``."""

    coefficient: Fraction
    argument: RatExpr

    def __post_init__(self):
        if self.argument.is_zero():
            raise DivisionByZeroError("ln|0| is undefined")


def _sign_canonical(r: RatExpr) -> RatExpr:
    """Pick r or -r so that ln|r| terms with equal |r| share a key."""
    names = tuple(sorted(r.variables()))
    if r.num.leading(names)[1] < 0:
        return -r
    return r


class LogSum:
    """Immutable formal sum of log terms plus a rational-function part."""

    __slots__ = ("logs", "rational")

    def __init__(self, logs: Mapping[RatExpr, Fraction] | Iterable[LogTerm] = (), rational=0):
        merged: dict[RatExpr, Fraction] = {}
        items = logs.items() if isinstance(logs, Mapping) else ((t.argument, t.coefficient) for t in logs)
        for arg, q in items:
            q = Fraction(q)
            if not q:
                continue
            if arg.is_zero():
                raise DivisionByZeroError("ln|0| is undefined")
            if arg.is_constant():
                c = abs(arg.constant_value())
                if c == 1:
                    continue
                if c < 1:
                    c, q = 1 / c, -q
                arg = RatExpr.const(c)
            key = _sign_canonical(arg)
            merged[key] = merged.get(key, Fraction(0)) + q
        # constants sharing a coefficient multiply into one argument
        by_coef: dict[Fraction, Fraction] = {}
        for arg in [a for a in merged if a.is_constant()]:
            q = merged.pop(arg)
            if q:
                by_coef[q] = by_coef.get(q, Fraction(1)) * arg.constant_value()
        for q, c in by_coef.items():
            key = RatExpr.const(c)
            merged[key] = merged.get(key, Fraction(0)) + q
        self.logs = {k: v for k, v in merged.items() if v}
        self.rational = RatExpr.coerce(rational)

    @classmethod
    def ln_abs(cls, r, coefficient=1) -> "LogSum":
        return cls({RatExpr.coerce(r): Fraction(coefficient)})

    @classmethod
    def coerce(cls, value) -> "LogSum":
        if isinstance(value, LogSum):
            return value
        return cls({}, RatExpr.coerce(value))

    def terms(self) -> list[LogTerm]:
        return [LogTerm(q, a) for a, q in self.logs.items()]

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        try:
            other = LogSum.coerce(other)
        except TypeError:
            return NotImplemented
        logs = dict(self.logs)
        for a, q in other.logs.items():
            logs[a] = logs.get(a, Fraction(0)) + q
        return LogSum(logs, self.rational + other.rational)

    __radd__ = __add__

    def __neg__(self):
        return LogSum({a: -q for a, q in self.logs.items()}, -self.rational)

    def __sub__(self, other):
        return self + (-LogSum.coerce(other))

    def __rsub__(self, other):
        return LogSum.coerce(other) - self

    def scale(self, c) -> "LogSum":
        c = Fraction(c)
        return LogSum({a: q * c for a, q in self.logs.items()}, self.rational * c)

    # structure --------------------------------------------------------
    def is_rational(self) -> bool:
        return not self.logs

    def subs(self, mapping) -> "LogSum":
        logs: dict = {}
        for a, q in self.logs.items():
            b = a.subs(mapping)
            if b.is_zero():
                raise PoleError(f"ln|{a}| hits ln|0| under substitution")
            logs[b] = logs.get(b, Fraction(0)) + q
        return LogSum(logs, self.rational.subs(mapping))

    def evaluate_symbolic(self, point: Mapping) -> "LogSum":
        """Exact evaluation: arguments become rational constants."""
        return self.subs({k: RatExpr.const(Fraction(v)) for k, v in point.items()})

    def diff(self, name: str) -> RatExpr:
        out = self.rational.diff(name)
        for a, q in self.logs.items():
            out = out + q * a.diff(name) / a
        return out

    def is_constant(self) -> bool:
        return all(a.is_constant() for a in self.logs) and self.rational.is_constant()

    def to_float(self) -> float:
        if not self.is_constant():
            raise ValueError("not a constant")
        total = float(self.rational.constant_value())
        for a, q in self.logs.items():
            total += float(q) * math.log(abs(a.constant_value()))
        return total

    def multiplicative_relation(self) -> tuple[int, RatExpr] | None:
        """Return ``(K, P)`` with ``K * (log part) = ln|P|``, or None if too large."""
        if not self.logs:
            return 1, RatExpr.const(1)
        K = lcm(*(q.denominator for q in self.logs.values()))
        ks = {a: int(q * K) for a, q in self.logs.items()}
        if max(abs(k) for k in ks.values()) > MAX_CLEARED_EXPONENT:
            return None
        prod = RatExpr.const(1)
        for a, k in ks.items():
            prod = prod * a ** k
        return K, prod

    def is_zero(self) -> Truth:
        rel = self.multiplicative_relation()
        if rel is None:
            return Truth.UNKNOWN
        _, prod = rel
        log_vanishes = prod.is_constant() and abs(prod.constant_value()) == 1
        if log_vanishes:
            return Truth.TRUE if self.rational.is_zero() else Truth.FALSE
        # nonzero ln|c| is transcendental; ln|P| for nonconstant P is not rational
        return Truth.FALSE

    def equals(self, other) -> Truth:
        return (self - LogSum.coerce(other)).is_zero()

    def __eq__(self, other):
        if not isinstance(other, (LogSum, RatExpr, int, Fraction)):
            return NotImplemented
        return self.equals(other) is Truth.TRUE

    __hash__ = None

    def __str__(self):
        parts = []
        for a, q in sorted(self.logs.items(), key=lambda t: str(t[0])):
            coef = "" if q == 1 else ("-" if q == -1 else f"{q}*")
            parts.append(f"{coef}ln|{a}|")
        if not self.rational.is_zero() or not parts:
            parts.append(str(self.rational))
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"LogSum({str(self)!r})"

    def to_json(self) -> dict:
        return {
            "logs": [{"coefficient": str(q), "argument": str(a)} for a, q in self.logs.items()],
            "rational": str(self.rational),
        }
