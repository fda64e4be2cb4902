"""Lie algebroids in a global frame over a chart.

Frame sections are ``e_0 .. e_{r-1}`` (0-based internally, 1-based in JSON).
``anchor[j][a]`` is the j-th component of ``rho(e_a)`` and
``bracket(a, b)[c]`` is the structure function ``C^c_{ab}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .chars import DENSITY, ORIENTATION, VOLUME, Character
from .symcore import Chart, RatExpr


class InvalidAlgebroidError(ValueError):
    def __init__(self, report: "AlgebroidReport"):
        self.report = report
        super().__init__(f"algebroid axioms fail: {report.summary()}")


def _zero() -> RatExpr:
    return RatExpr.const(0)


@dataclass(frozen=True)
class LieAlgebroid:
    chart: Chart
    rank: int
    anchor: tuple  # n rows of r entries
    brackets: Mapping = field(default_factory=dict)  # (a, b) -> r-tuple of C^c_{ab}
    name: str = ""

    def __post_init__(self):
        n, r = self.chart.dim, self.rank
        anchor = tuple(tuple(RatExpr.coerce(e) for e in row) for row in self.anchor)
        if len(anchor) != n or any(len(row) != r for row in anchor):
            raise ValueError(f"anchor must be a {n}x{r} matrix")
        brackets = {}
        for (a, b), vec in dict(self.brackets).items():
            if not (0 <= a < r and 0 <= b < r):
                raise ValueError(f"bracket index ({a}, {b}) out of range for rank {r}")
            vec = tuple(RatExpr.coerce(e) for e in vec)
            if len(vec) != r:
                raise ValueError(f"bracket ({a}, {b}) needs {r} structure functions")
            brackets[(a, b)] = vec
        object.__setattr__(self, "anchor", anchor)
        object.__setattr__(self, "brackets", brackets)

    @property
    def dim(self) -> int:
        return self.chart.dim

    def rho(self, a: int) -> tuple[RatExpr, ...]:
        return tuple(self.anchor[j][a] for j in range(self.dim))

    def bracket(self, a: int, b: int) -> tuple[RatExpr, ...]:
        if (a, b) in self.brackets:
            return self.brackets[(a, b)]
        if (b, a) in self.brackets:
            return tuple(-e for e in self.brackets[(b, a)])
        return tuple(_zero() for _ in range(self.rank))

    def C(self, c: int, a: int, b: int) -> RatExpr:
        return self.bracket(a, b)[c]

    def anchor_apply(self, a: int, f: RatExpr) -> RatExpr:
        """rho(e_a) acting on a function."""
        out = _zero()
        for k, name in enumerate(self.chart.names):
            coef = self.anchor[k][a]
            if not coef.is_zero():
                out = out + coef * f.diff(name)
        return out

    def divergence(self, a: int) -> RatExpr:
        out = _zero()
        for k, name in enumerate(self.chart.names):
            out = out + self.anchor[k][a].diff(name)
        return out

    def with_structure(self, anchor=None, brackets=None) -> "LieAlgebroid":
        return LieAlgebroid(self.chart, self.rank, anchor or self.anchor, brackets or self.brackets, self.name)


# validation -----------------------------------------------------------------

@dataclass(frozen=True)
class Residual:
    kind: str  # antisymmetry | anchor | jacobi
    indices: dict
    residual: RatExpr

    def to_json(self) -> dict:
        return {"kind": self.kind, "indices": self.indices, "residual": str(self.residual)}


@dataclass
class AlgebroidReport:
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        if self.passed:
            return "all identities hold"
        kinds = {}
        for f in self.failures:
            kinds[f.kind] = kinds.get(f.kind, 0) + 1
        return ", ".join(f"{k}: {v} failure(s)" for k, v in kinds.items())


def check_algebroid(A: LieAlgebroid) -> AlgebroidReport:
    """Check antisymmetry, the anchor morphism identity and Jacobi; report residuals."""
    report = AlgebroidReport()
    r = A.rank

    for (a, b), vec in A.brackets.items():
        if a == b:
            for c, e in enumerate(vec):
                if not e.is_zero():
                    report.failures.append(Residual("antisymmetry", {"a": a + 1, "b": b + 1, "c": c + 1}, e))
        elif a > b and (b, a) in A.brackets:
            for c, (e1, e2) in enumerate(zip(vec, A.brackets[(b, a)])):
                res = e1 + e2
                if not res.is_zero():
                    report.failures.append(Residual("antisymmetry", {"a": b + 1, "b": a + 1, "c": c + 1}, res))

    for a, b in combinations(range(r), 2):
        for j in range(A.dim):
            lhs = _zero()
            for c in range(r):
                lhs = lhs + A.C(c, a, b) * A.anchor[j][c]
            rhs = A.anchor_apply(a, A.anchor[j][b]) - A.anchor_apply(b, A.anchor[j][a])
            res = lhs - rhs
            if not res.is_zero():
                report.failures.append(Residual("anchor", {"a": a + 1, "b": b + 1, "j": j + 1}, res))

    for a, b, c in combinations(range(r), 3):
        for e in range(r):
            total = _zero()
            for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                for d in range(r):
                    total = total + A.C(d, y, z) * A.C(e, x, d)
                total = total + A.anchor_apply(x, A.C(e, y, z))
            if not total.is_zero():
                report.failures.append(Residual("jacobi", {"a": a + 1, "b": b + 1, "c": c + 1, "e": e + 1}, total))
    return report


def _require_valid(A: LieAlgebroid) -> None:
    report = check_algebroid(A)
    if not report.passed:
        raise InvalidAlgebroidError(report)


# constructors ---------------------------------------------------------------

def tangent(chart: Chart) -> LieAlgebroid:
    n = chart.dim
    anchor = [[RatExpr.const(1 if j == a else 0) for a in range(n)] for j in range(n)]
    return LieAlgebroid(chart, n, anchor, {}, name=f"tangent({','.join(chart.names)})")


def lie_algebra(dim: int, structure: Mapping[tuple, Sequence], name: str = "") -> LieAlgebroid:
    """Lie algebra as an algebroid over a point; ``structure[(a, b)][c] = C^c_{ab}``."""
    brackets = {k: tuple(RatExpr.coerce(Fraction(v) if not isinstance(v, RatExpr) else v) for v in vec)
                for k, vec in structure.items()}
    return LieAlgebroid(Chart(()), dim, (), brackets, name=name or f"lie-algebra(dim={dim})")


def poisson(chart: Chart, bivector: Mapping[tuple, RatExpr], validate: bool = True) -> LieAlgebroid:
    """Cotangent algebroid in the frame dx_i: rho^j_i = pi^{ij}, C^k_{ij} = d_k pi^{ij}.

    ``bivector`` maps ``(i, j)`` to ``pi^{ij}``; missing entries are zero and
    ``(j, i)`` defaults to ``-pi^{ij}``.
    """
    n = chart.dim
    pi = [[_zero() for _ in range(n)] for _ in range(n)]
    given = {}
    for (i, j), v in bivector.items():
        v = RatExpr.coerce(v)
        given[(i, j)] = v
    for (i, j), v in given.items():
        if i == j:
            if not v.is_zero():
                raise ValueError(f"bivector is not antisymmetric: pi^({i + 1},{i + 1}) = {v}")
            continue
        if (j, i) in given and given[(j, i)] != -v:
            raise ValueError(f"bivector is not antisymmetric at ({i + 1},{j + 1})")
        pi[i][j] = v
        pi[j][i] = -v
    anchor = [[pi[i][j] for i in range(n)] for j in range(n)]
    brackets = {}
    for i, j in combinations(range(n), 2):
        brackets[(i, j)] = tuple(pi[i][j].diff(name) for name in chart.names)
    A = LieAlgebroid(chart, n, anchor, brackets, name="poisson")
    if validate:
        _require_valid(A)
    return A


def action(algebra: LieAlgebroid, chart: Chart, vector_fields: Sequence[Sequence[RatExpr]], validate: bool = True) -> LieAlgebroid:
    """Action algebroid: constant brackets of ``algebra``, anchor = given vector fields."""
    if algebra.chart.dim != 0:
        raise ValueError("action() expects a Lie algebra (algebroid over a point)")
    if len(vector_fields) != algebra.rank:
        raise ValueError(f"need {algebra.rank} vector fields, got {len(vector_fields)}")
    for X in vector_fields:
        if len(X) != chart.dim:
            raise ValueError(f"vector field {X} has wrong dimension for chart {chart.names}")
    anchor = [[RatExpr.coerce(vector_fields[a][j]) for a in range(algebra.rank)] for j in range(chart.dim)]
    A = LieAlgebroid(chart, algebra.rank, anchor, dict(algebra.brackets), name="action")
    if validate:
        _require_valid(A)
    return A


# Chevalley-Eilenberg differential in degrees 0 and 1 -------------------------

@dataclass(frozen=True)
class AlgCocycle1:
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(RatExpr.coerce(v) for v in self.values))

    def __add__(self, other: "AlgCocycle1") -> "AlgCocycle1":
        return AlgCocycle1(tuple(a + b for a, b in zip(self.values, other.values, strict=True)))

    def __neg__(self):
        return AlgCocycle1(tuple(-a for a in self.values))

    def scale(self, c) -> "AlgCocycle1":
        return AlgCocycle1(tuple(a * RatExpr.coerce(Fraction(c)) for a in self.values))

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values)

    def to_json(self) -> list:
        return [str(v) for v in self.values]

    def __str__(self):
        return "(" + ", ".join(str(v) for v in self.values) + ")"


def dA0(A: LieAlgebroid, f: RatExpr) -> AlgCocycle1:
    f = RatExpr.coerce(f)
    return AlgCocycle1(tuple(A.anchor_apply(a, f) for a in range(A.rank)))


def dA1(A: LieAlgebroid, c: AlgCocycle1 | Sequence) -> dict:
    vals = c.values if isinstance(c, AlgCocycle1) else tuple(RatExpr.coerce(v) for v in c)
    if len(vals) != A.rank:
        raise ValueError(f"1-form needs {A.rank} values")
    out = {}
    for a, b in combinations(range(A.rank), 2):
        v = A.anchor_apply(a, vals[b]) - A.anchor_apply(b, vals[a])
        for k in range(A.rank):
            v = v - A.C(k, a, b) * vals[k]
        out[(a, b)] = v
    return out


def dA(A: LieAlgebroid, form):
    """d_A of a function (degree 0) or of a 1-form (degree 1)."""
    if isinstance(form, (RatExpr, int, Fraction)):
        return dA0(A, form)
    return dA1(A, form)


def is_closed(A: LieAlgebroid, c: AlgCocycle1) -> bool:
    return all(v.is_zero() for v in dA1(A, c).values())


def is_coboundary(A: LieAlgebroid, c: AlgCocycle1, f: RatExpr) -> bool:
    """Certificate check ``c = d_A f``."""
    return dA0(A, f) == AlgCocycle1(c.values)


# line representations -------------------------------------------------------

@dataclass(frozen=True)
class AlgLineRep:
    base: LieAlgebroid
    omega: AlgCocycle1
    label: str = ""

    def is_flat(self) -> bool:
        return is_closed(self.base, self.omega)


def canonical_rep(A: LieAlgebroid, chi: Character, validate: bool = True) -> AlgLineRep:
    """Transverse chi-line with its canonical trivialization.

    ``omega_a = -m * (sum_b C^b_{ab} + div rho(e_a))``; the sign part of chi
    contributes nothing in a global frame.
    """
    if validate:
        _require_valid(A)
    omega = []
    for a in range(A.rank):
        trace = _zero()
        for b in range(A.rank):
            trace = trace + A.C(b, a, b)
        omega.append((trace + A.divergence(a)) * (-chi.m))
    return AlgLineRep(A, AlgCocycle1(tuple(omega)), label=f"chi(m={chi.m},eps={chi.eps})")


def orientation_line(A: LieAlgebroid) -> AlgLineRep:
    """o_A as a flat line: zero connection form in the global frame."""
    return AlgLineRep(A, AlgCocycle1(tuple(_zero() for _ in range(A.rank))), label="o_A")


def trivial_rep(A: LieAlgebroid) -> AlgLineRep:
    return AlgLineRep(A, AlgCocycle1(tuple(_zero() for _ in range(A.rank))), label="trivial")


def tensor_rep(L1: AlgLineRep, L2: AlgLineRep) -> AlgLineRep:
    if L1.base is not L2.base and L1.base != L2.base:
        raise ValueError("tensor product of representations of different algebroids")
    return AlgLineRep(L1.base, L1.omega + L2.omega, label=f"{L1.label}(x){L2.label}")


def theta_class_rep(L: AlgLineRep) -> AlgCocycle1:
    if not L.is_flat():
        raise ValueError("representation is not flat")
    return L.omega


def modular_cocycle(A: LieAlgebroid, validate: bool = True) -> AlgCocycle1:
    return canonical_rep(A, DENSITY, validate).omega


def qa_cocycle(A: LieAlgebroid, validate: bool = True) -> AlgCocycle1:
    return tensor_rep(canonical_rep(A, DENSITY, validate), orientation_line(A)).omega


def vtr_cocycle(A: LieAlgebroid, validate: bool = True) -> AlgCocycle1:
    return canonical_rep(A, VOLUME, validate).omega


def orientation_tr_cocycle(A: LieAlgebroid, validate: bool = True) -> AlgCocycle1:
    return canonical_rep(A, ORIENTATION, validate).omega


# obstruction certificates --------------------------------------------------

@dataclass(frozen=True)
class AnchorZeroCertificate:
    """``rho`` vanishes at ``point`` while ``c`` does not: c is not d_A-exact."""

    point: tuple
    index: int
    value: Fraction

    def to_json(self) -> dict:
        return {"point": [str(p) for p in self.point], "frame_index": self.index + 1, "value": str(self.value)}


def anchor_zero_obstruction(A: LieAlgebroid, c: AlgCocycle1, points: Sequence[Sequence]) -> AnchorZeroCertificate | None:
    """Any d_A f vanishes where the anchor does; a nonzero value there obstructs exactness."""
    for pt in points:
        point = A.chart.point(pt)
        if any(A.anchor[j][a].evaluate(point) != 0 for j in range(A.dim) for a in range(A.rank)):
            continue
        for a, v in enumerate(c.values):
            val = v.evaluate(point)
            if val != 0:
                return AnchorZeroCertificate(tuple(point.values()), a, val)
    return None


def verify_anchor_zero_certificate(A: LieAlgebroid, c: AlgCocycle1, cert: AnchorZeroCertificate) -> bool:
    point = dict(zip(A.chart.names, cert.point))
    if any(A.anchor[j][a].evaluate(point) != 0 for j in range(A.dim) for a in range(A.rank)):
        return False
    return c.values[cert.index].evaluate(point) == cert.value != 0
