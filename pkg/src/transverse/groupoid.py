"""Concrete Lie groupoid models and their transverse line representations.

Three families are supported: the pair groupoid of a chart, the action
groupoid of finitely many rational automorphisms (a discrete group), and the
action groupoid of a rational Lie group law acting on a chart.  Arrows are
written ``(label, source)``; the label is the target point, the group
element, or a word in the generators.

Cocycle conventions.  For a line representation with canonical section
``eps`` and a section ``sigma = r(x) eps`` the multiplicative cocycle is
defined by ``g . sigma(s(g)) = c~(g) sigma(t(g))`` and the additive one by
``c(g) = -ln|c~(g)| = ln(sigma(t(g)) / g . sigma(s(g)))``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Sequence

from .chars import DENSITY, TRIVIAL, Character, FormalScalar, char_apply
from .symcore import Chart, LogSum, RatExpr, Truth
from .symcore.linalg import det, identity, jacobian, matmul


class ModelError(ValueError):
    """A model fails one of its structural identities."""

    def __init__(self, message: str, residuals: Sequence = ()):
        self.residuals = list(residuals)
        super().__init__(message)


class NotFixedError(ValueError):
    """A supplied candidate is not an isotropy arrow."""


def _vars(names: Iterable[str]) -> tuple[RatExpr, ...]:
    names = tuple(names)
    return tuple(RatExpr.var(v, names) for v in names)


def _point_exprs(point: Sequence) -> tuple[RatExpr, ...]:
    return tuple(p if isinstance(p, RatExpr) else RatExpr.const(Fraction(p)) for p in point)


def _apply(funcs: Sequence[RatExpr], names: Sequence[str], point: Sequence[RatExpr]) -> tuple[RatExpr, ...]:
    mapping = dict(zip(names, point))
    return tuple(f.subs(mapping) for f in funcs)


def _same_point(p: Sequence[RatExpr], q: Sequence[RatExpr]) -> bool:
    return len(p) == len(q) and all(a == b for a, b in zip(p, q))


@dataclass(frozen=True)
class Arrow:
    label: tuple
    source: tuple

    def to_json(self) -> dict:
        label = [list(l) if isinstance(l, tuple) else str(l) for l in self.label]
        return {"label": label, "source": [str(s) for s in self.source]}


def _block_jacobian(p_names, x_names, kernel_frame, inversion, lift=None) -> RatExpr:
    """Transverse Jacobian of a generic arrow with coordinates (p, x), s = x.

    The frame of T_g G is (right-translated A-frame, lift of the coordinate
    frame of T_x M); it is pushed through the inversion and compared with
    the same kind of frame at g^-1.  The factor (-1)^rank makes unit arrows
    act by 1 on the orientation line.
    """
    r, n = len(p_names), len(x_names)
    P, X = _vars(p_names), _vars(x_names)

    def frame(pp, xx):
        K = kernel_frame(pp, xx)
        L = lift(pp, xx) if lift else [[RatExpr.const(0)] * n for _ in range(r)]
        top = [list(K[i]) + list(L[i]) for i in range(r)]
        bottom = [[RatExpr.const(0)] * r + [RatExpr.const(1 if i == j else 0) for j in range(n)] for i in range(n)]
        return top + bottom

    P2, X2 = inversion(P, X)
    D = jacobian(list(P2) + list(X2), list(p_names) + list(x_names))
    num = det(matmul(D, frame(P, X)))
    den = det(frame(P2, X2))
    return num / den * (-1) ** r


class GroupoidModel:
    kind = "abstract"
    chart: Chart

    @property
    def rank(self) -> int:
        raise NotImplementedError

    def target(self, g: Arrow) -> tuple:
        raise NotImplementedError

    def compose(self, g: Arrow, h: Arrow) -> Arrow:
        raise NotImplementedError

    def inverse(self, g: Arrow) -> Arrow:
        raise NotImplementedError

    def unit(self, point: Sequence) -> Arrow:
        raise NotImplementedError

    def generic_arrows(self) -> list[Arrow]:
        raise NotImplementedError

    def composable_pairs(self) -> list[tuple[Arrow, Arrow]]:
        raise NotImplementedError

    def transverse_jacobian(self, g: Arrow, lift=None) -> RatExpr:
        raise NotImplementedError

    def structural_residuals(self) -> list[tuple[str, RatExpr]]:
        return []

    def validate(self) -> None:
        res = self.structural_residuals()
        if res:
            raise ModelError(f"{self.kind} model fails {len(res)} structural identit(ies): {res[0][0]}", res)

    def source(self, g: Arrow) -> tuple:
        return g.source

    def generic_unit(self) -> Arrow:
        return self.unit(self.chart.coords())

    def is_isotropy(self, g: Arrow) -> bool:
        return _same_point(self.target(g), g.source)


# pair groupoid ---------------------------------------------------------------

class PairModel(GroupoidModel):
    """Pair groupoid M x M; the arrow (y, x) goes from x to y."""

    kind = "pair"

    def __init__(self, chart: Chart):
        self.chart = chart
        self.target_names = tuple(f"{v}__t" for v in chart.names)
        self.third_names = tuple(f"{v}__tt" for v in chart.names)

    @property
    def rank(self) -> int:
        return self.chart.dim

    def target(self, g):
        return tuple(g.label)

    def compose(self, g, h):
        if not _same_point(g.source, self.target(h)):
            raise ValueError("arrows are not composable")
        return Arrow(g.label, h.source)

    def inverse(self, g):
        return Arrow(tuple(g.source), tuple(g.label))

    def unit(self, point):
        p = _point_exprs(point)
        return Arrow(p, p)

    def generic_arrows(self):
        return [Arrow(_vars(self.target_names), self.chart.coords())]

    def composable_pairs(self):
        h = Arrow(_vars(self.target_names), self.chart.coords())
        g = Arrow(_vars(self.third_names), h.label)
        return [(g, h)]

    def _generic_jacobian(self, lift=None):
        n = self.chart.dim
        return _block_jacobian(
            self.target_names,
            self.chart.names,
            lambda P, X: identity(n),
            lambda P, X: (X, P),
            lift,
        )

    @cached_property
    def generic_jacobian(self) -> RatExpr:
        return self._generic_jacobian()

    def transverse_jacobian(self, g, lift=None):
        J = self._generic_jacobian(lift) if lift else self.generic_jacobian
        mapping = dict(zip(self.target_names, g.label)) | dict(zip(self.chart.names, g.source))
        return J.subs(mapping)

    def lift_names(self):
        return self.target_names, self.chart.names


# discrete action groupoid ------------------------------------------------------

@dataclass(frozen=True)
class Generator:
    map: tuple
    inverse: tuple
    name: str = ""


class DiscreteActionModel(GroupoidModel):
    """Action groupoid of the group generated by rational automorphisms.

    A word ``((i1, e1), ..., (ik, ek))`` stands for
    ``phi_{i1}^{e1} o ... o phi_{ik}^{ek}``.
    """

    kind = "discrete-action"

    def __init__(self, chart: Chart, generators: Sequence[Generator]):
        self.chart = chart
        self.generators = tuple(generators)
        for gen in self.generators:
            if len(gen.map) != chart.dim or len(gen.inverse) != chart.dim:
                raise ValueError("generator maps must have the chart dimension")

    @property
    def rank(self) -> int:
        return 0

    def letters(self) -> list[tuple[int, int]]:
        return [(i, e) for i in range(len(self.generators)) for e in (1, -1)]

    def letter_map(self, letter) -> tuple:
        i, e = letter
        gen = self.generators[i]
        return gen.map if e == 1 else gen.inverse

    def word_map(self, word) -> tuple:
        m = self.chart.coords()
        for letter in reversed(word):
            m = _apply(self.letter_map(letter), self.chart.names, m)
        return m

    @staticmethod
    def reduce(word) -> tuple:
        out: list = []
        for letter in word:
            if out and out[-1][0] == letter[0] and out[-1][1] == -letter[1]:
                out.pop()
            else:
                out.append(letter)
        return tuple(out)

    def target(self, g):
        return _apply(self.word_map(g.label), self.chart.names, g.source)

    def compose(self, g, h):
        if not _same_point(g.source, self.target(h)):
            raise ValueError("arrows are not composable")
        return Arrow(self.reduce(tuple(g.label) + tuple(h.label)), h.source)

    def inverse(self, g):
        word = tuple((i, -e) for i, e in reversed(g.label))
        return Arrow(word, self.target(g))

    def unit(self, point):
        return Arrow((), _point_exprs(point))

    def generic_arrows(self):
        X = self.chart.coords()
        return [Arrow((letter,), X) for letter in self.letters()]

    def composable_pairs(self):
        X = self.chart.coords()
        pairs = []
        for l2 in self.letters():
            h = Arrow((l2,), X)
            for l1 in self.letters():
                pairs.append((Arrow((l1,), self.target(h)), h))
        return pairs

    def transverse_jacobian(self, g, lift=None):
        J = det(jacobian(self.word_map(g.label), self.chart.names))
        return J.subs(dict(zip(self.chart.names, g.source)))

    def structural_residuals(self):
        out = []
        X = self.chart.coords()
        for i, gen in enumerate(self.generators):
            for label, a, b in (("phi o phi^-1", gen.map, gen.inverse), ("phi^-1 o phi", gen.inverse, gen.map)):
                comp = _apply(a, self.chart.names, b)
                for j, (c, x) in enumerate(zip(comp, X)):
                    if c != x:
                        out.append((f"generator {i + 1}: {label} != id (component {j + 1})", c - x))
        return out


# Lie group action groupoid ---------------------------------------------------------

class LieActionModel(GroupoidModel):
    """Action groupoid G x M of a rational group law acting on a chart.

    ``mul`` is written in ``<c>_1`` (left factor) and ``<c>_2`` (right factor)
    for each group coordinate ``c``; ``inv`` in the coordinates; ``action`` in
    the coordinates and the chart.  The identity is the origin.
    """

    kind = "lie-action"

    def __init__(self, chart: Chart, coords: Sequence[str], mul: Sequence[RatExpr], inv: Sequence[RatExpr], action: Sequence[RatExpr]):
        self.chart = chart
        self.coords = tuple(coords)
        self.left = tuple(f"{c}_1" for c in self.coords)
        self.right = tuple(f"{c}_2" for c in self.coords)
        clash = set(self.coords) & set(chart.names)
        if clash:
            raise ValueError(f"group coordinates clash with chart names: {sorted(clash)}")
        m = len(self.coords)
        if len(mul) != m or len(inv) != m:
            raise ValueError(f"mul and inv need {m} components")
        if len(action) != chart.dim:
            raise ValueError(f"action needs {chart.dim} components")
        self.mul_exprs = tuple(RatExpr.coerce(e) for e in mul)
        self.inv_exprs = tuple(RatExpr.coerce(e) for e in inv)
        self.action_exprs = tuple(RatExpr.coerce(e) for e in action)
        self.h_names = tuple(f"{c}__h" for c in self.coords)
        self.w_names = tuple(f"{c}__w" for c in self.coords)

    @property
    def rank(self) -> int:
        return len(self.coords)

    def mul(self, U, V) -> tuple:
        mapping = dict(zip(self.left, U)) | dict(zip(self.right, V))
        return tuple(e.subs(mapping) for e in self.mul_exprs)

    def inv(self, U) -> tuple:
        return _apply(self.inv_exprs, self.coords, U)

    def act(self, U, X) -> tuple:
        mapping = dict(zip(self.coords, U)) | dict(zip(self.chart.names, X))
        return tuple(e.subs(mapping) for e in self.action_exprs)

    def zero(self) -> tuple:
        return tuple(RatExpr.const(0) for _ in self.coords)

    def target(self, g):
        return self.act(g.label, g.source)

    def compose(self, g, h):
        if not _same_point(g.source, self.target(h)):
            raise ValueError("arrows are not composable")
        return Arrow(self.mul(g.label, h.label), h.source)

    def inverse(self, g):
        return Arrow(self.inv(g.label), self.target(g))

    def unit(self, point):
        return Arrow(self.zero(), _point_exprs(point))

    def generic_arrows(self):
        return [Arrow(_vars(self.coords), self.chart.coords())]

    def composable_pairs(self):
        h = Arrow(_vars(self.h_names), self.chart.coords())
        g = Arrow(_vars(self.coords), self.target(h))
        return [(g, h)]

    def kernel_frame(self, P, X):
        """Right translation of the A-frame: d/dw mul(w, p) at w = 0."""
        W = _vars(self.w_names)
        prod = self.mul(W, P)
        zero = {w: RatExpr.const(0) for w in self.w_names}
        return [[prod[c].diff(w).subs(zero) for w in self.w_names] for c in range(self.rank)]

    def _generic_jacobian(self, lift=None):
        return _block_jacobian(
            self.coords,
            self.chart.names,
            self.kernel_frame,
            lambda P, X: (self.inv(P), self.act(P, X)),
            lift,
        )

    @cached_property
    def generic_jacobian(self) -> RatExpr:
        return self._generic_jacobian()

    def transverse_jacobian(self, g, lift=None):
        J = self._generic_jacobian(lift) if lift else self.generic_jacobian
        mapping = dict(zip(self.coords, g.label)) | dict(zip(self.chart.names, g.source))
        return J.subs(mapping)

    def lift_names(self):
        return self.coords, self.chart.names

    def structural_residuals(self):
        out = []
        U, V = _vars(self.coords), _vars(self.h_names)
        Wv = _vars(self.w_names)
        X = self.chart.coords()
        z = self.zero()

        def compare(label, lhs, rhs):
            for j, (a, b) in enumerate(zip(lhs, rhs)):
                if a != b:
                    out.append((f"{label} (component {j + 1})", a - b))

        compare("mul(u,0) = u", self.mul(U, z), U)
        compare("mul(0,v) = v", self.mul(z, V), V)
        compare("mul(u,inv(u)) = 0", self.mul(U, self.inv(U)), z)
        compare("mul(mul(u,v),w) = mul(u,mul(v,w))", self.mul(self.mul(U, V), Wv), self.mul(U, self.mul(V, Wv)))
        compare("a(0,x) = x", self.act(z, X), X)
        compare("a(mul(u,v),x) = a(u,a(v,x))", self.act(self.mul(U, V), X), self.act(U, self.act(V, X)))
        return out


# line representations and cocycles ----------------------------------------------

def definitely_positive(r: RatExpr) -> bool:
    """Sufficient test for r > 0 everywhere it is defined."""
    if r.is_constant():
        return r.constant_value() > 0
    prod = r.num * r.den
    const = prod.terms.get((), Fraction(0))
    if const <= 0:
        return False
    return all(c > 0 and all(e % 2 == 0 for _, e in m) for m, c in prod.terms.items())


@dataclass(frozen=True)
class GpdLineRep:
    """Tensor product of character twists of the transverse line."""

    model: GroupoidModel
    chis: tuple = (DENSITY,)

    @property
    def chi(self) -> Character:
        out = TRIVIAL
        for c in self.chis:
            out = out * c
        return out

    def action_scalar(self, g: Arrow) -> FormalScalar:
        if all(c.is_trivial() for c in self.chis):
            return FormalScalar.one()
        J = self.model.transverse_jacobian(g)
        out = FormalScalar.one()
        for c in self.chis:
            out = out * char_apply(c, J)
        return out

    def tensor(self, other: "GpdLineRep") -> "GpdLineRep":
        if other.model is not self.model:
            raise ValueError("tensor product of representations of different groupoids")
        return GpdLineRep(self.model, self.chis + other.chis)


def canonical_groupoid_rep(G: GroupoidModel, chi: Character) -> GpdLineRep:
    G.validate()
    return GpdLineRep(G, (chi,))


def _section(G: GroupoidModel, sigma) -> RatExpr:
    sigma = RatExpr.coerce(sigma)
    if sigma.is_zero():
        raise ValueError("the section must be nonzero")
    extra = sigma.variables() - set(G.chart.names)
    if extra:
        raise ValueError(f"section depends on non-chart variables {sorted(extra)}")
    return sigma


@dataclass(frozen=True)
class MultCocycle:
    """c~_sigma for a line representation and a nowhere-zero section sigma."""

    rep: GpdLineRep
    sigma: RatExpr

    @property
    def model(self) -> GroupoidModel:
        return self.rep.model

    def value(self, g: Arrow) -> FormalScalar:
        out = self.rep.action_scalar(g)
        if not self.sigma.is_constant():
            names = self.model.chart.names
            s_val = self.sigma.subs(dict(zip(names, g.source)))
            t_val = self.sigma.subs(dict(zip(names, self.model.target(g))))
            out = out * FormalScalar(LogSum.ln_abs(s_val) - LogSum.ln_abs(t_val), RatExpr.const(1))
        return out

    def unit_residuals(self) -> list:
        u = self.model.generic_unit()
        v = self.value(u)
        bad = []
        if v.abs_part.is_zero() is not Truth.TRUE:
            bad.append(("|c~(unit)| != 1", v.abs_part))
        if not definitely_positive(v.sign_part):
            bad.append(("sign c~(unit) != +1", v.sign_part))
        return bad

    def law_residuals(self) -> list:
        """Composable pairs where c~(gh) = c~(g) c~(h) is not verified."""
        bad = []
        for g, h in self.model.composable_pairs():
            lhs = self.value(self.model.compose(g, h))
            rhs = self.value(g) * self.value(h)
            diff = lhs.abs_part - rhs.abs_part
            if diff.is_zero() is not Truth.TRUE:
                bad.append((g, h, "abs", diff))
            if lhs.sign_part != rhs.sign_part:
                bad.append((g, h, "sign", lhs.sign_part / rhs.sign_part))
        return bad


def tilde_cocycle(L: GpdLineRep, sigma=1) -> MultCocycle:
    """c~_sigma; sigma is assumed nowhere zero on the (connected) chart."""
    return MultCocycle(L, _section(L.model, sigma))


@dataclass(frozen=True)
class AdditiveCocycle:
    model: GroupoidModel
    fn: Callable[[Arrow], LogSum] = field(compare=False)
    label: str = ""

    def value(self, g: Arrow) -> LogSum:
        return self.fn(g)

    def __add__(self, other: "AdditiveCocycle") -> "AdditiveCocycle":
        return AdditiveCocycle(self.model, lambda g: self.fn(g) + other.fn(g), f"{self.label}+{other.label}")

    def scale(self, c) -> "AdditiveCocycle":
        return AdditiveCocycle(self.model, lambda g: self.fn(g).scale(c), f"{c}*{self.label}")

    def law_residuals(self) -> list:
        bad = []
        for g, h in self.model.composable_pairs():
            diff = self.value(self.model.compose(g, h)) - self.value(g) - self.value(h)
            if diff.is_zero() is not Truth.TRUE:
                bad.append((g, h, diff))
        return bad

    def is_zero(self) -> Truth:
        """Zero on every arrow (generic arrows suffice by the cocycle law)."""
        verdicts = [self.value(g).is_zero() for g in self.model.generic_arrows()]
        if all(v is Truth.TRUE for v in verdicts):
            return Truth.TRUE
        if any(v is Truth.FALSE for v in verdicts):
            return Truth.FALSE
        return Truth.UNKNOWN


@dataclass(frozen=True)
class SignCocycle:
    model: GroupoidModel
    fn: Callable[[Arrow], RatExpr] = field(compare=False)
    label: str = ""

    def value(self, g: Arrow) -> RatExpr:
        return self.fn(g)


def additive_part(c: MultCocycle) -> AdditiveCocycle:
    return AdditiveCocycle(c.model, lambda g: -c.value(g).abs_part, label="c_sigma")


def sign_part(c: MultCocycle) -> SignCocycle:
    return SignCocycle(c.model, lambda g: c.value(g).sign_part, label="sign c~_sigma")


def coboundary(G: GroupoidModel, f) -> AdditiveCocycle:
    """Groupoid differential of a function: g -> f(t(g)) - f(s(g))."""
    f = LogSum.coerce(f) if not isinstance(f, LogSum) else f
    names = G.chart.names

    def value(g):
        return f.subs(dict(zip(names, G.target(g)))) - f.subs(dict(zip(names, g.source)))

    return AdditiveCocycle(G, value, label="delta f")


def is_groupoid_coboundary(c: AdditiveCocycle, f) -> bool:
    """Certificate check c(g) = f(s(g)) - f(t(g)), i.e. e^f sigma is invariant."""
    f = f if isinstance(f, LogSum) else LogSum.coerce(f)
    G = c.model
    names = G.chart.names
    for g in G.generic_arrows():
        expected = f.subs(dict(zip(names, g.source))) - f.subs(dict(zip(names, G.target(g))))
        if c.value(g).equals(expected) is not Truth.TRUE:
            return False
    return True


# certificates --------------------------------------------------------------------

@dataclass(frozen=True)
class FixedPointCertificate:
    """An isotropy arrow on which the additive cocycle is nonzero: mod(G) != 0."""

    arrow: Arrow
    value: LogSum

    def to_json(self) -> dict:
        return {
            "kind": "fixed-point-obstruction",
            "arrow": self.arrow.to_json(),
            "value": self.value.to_json(),
            "value_float": self.value.to_float(),
        }


def _candidate_arrow(G: GroupoidModel, label, point) -> Arrow:
    if isinstance(G, DiscreteActionModel):
        word = tuple((int(i), int(e)) for i, e in label)
        return Arrow(word, _point_exprs(point))
    if isinstance(G, LieActionModel):
        return Arrow(_point_exprs(label), _point_exprs(point))
    return Arrow(_point_exprs(label), _point_exprs(point))


def fixed_point_obstruction(G: GroupoidModel, c: AdditiveCocycle, candidates: Sequence) -> FixedPointCertificate | None:
    """Look for a nonzero value of c on a supplied isotropy arrow.

    ``candidates`` are ``(label, point)`` pairs: a word for discrete actions,
    a group element for Lie actions, the point itself for pair groupoids.
    """
    for label, point in candidates:
        g = _candidate_arrow(G, label, point)
        if not G.is_isotropy(g):
            raise NotFixedError(f"arrow {g.to_json()} is not an isotropy arrow")
        v = c.value(g)
        if v.is_zero() is Truth.FALSE:
            return FixedPointCertificate(g, v)
    return None


def verify_fixed_point_certificate(rep: GpdLineRep, sigma, cert: FixedPointCertificate, seed: int = 0) -> bool:
    """Re-check a certificate without the cached generic Jacobian.

    The Jacobian is recomputed with a random lift of the base directions,
    which must not change the result.
    """
    G = rep.model
    g = cert.arrow
    if not G.is_isotropy(g):
        return False
    J = _recompute_jacobian(G, g, seed)
    v = LogSum()
    for chi in rep.chis:
        v = v - char_apply(chi, J).abs_part
    # sigma(s) = sigma(t) on isotropy, so the section drops out
    if v.equals(cert.value) is not Truth.TRUE:
        return False
    return v.is_zero() is Truth.FALSE and v.to_float() != 0.0


def random_lift(G: GroupoidModel, seed: int):
    """A random polynomial lift block, as used in lift-independence checks."""
    from .symcore.randpoly import random_poly

    rng = random.Random(seed)
    p_names, x_names = G.lift_names()
    names = tuple(p_names) + tuple(x_names)
    block = [[random_poly(names, 2, rng, terms=2) for _ in x_names] for _ in p_names]

    def lift(P, X):
        mapping = dict(zip(names, tuple(P) + tuple(X)))
        return [[e.subs(mapping) for e in row] for row in block]

    return lift


def _recompute_jacobian(G: GroupoidModel, g: Arrow, seed: int) -> RatExpr:
    if isinstance(G, (PairModel, LieActionModel)) and G.rank and G.chart.dim:
        return G.transverse_jacobian(g, lift=random_lift(G, seed))
    if isinstance(G, DiscreteActionModel):
        # evaluate the Jacobian entries at the point, then take the determinant
        m = G.word_map(g.label)
        point = dict(zip(G.chart.names, g.source))
        entries = [[e.subs(point) for e in row] for row in jacobian(m, G.chart.names)]
        return det(entries)
    return G.transverse_jacobian(g)


@dataclass(frozen=True)
class DensityWitness:
    """A section whose transverse density is invariant: mod(G) = 0 when sigma > 0."""

    rep: GpdLineRep
    sigma: RatExpr

    def to_json(self) -> dict:
        return {"kind": "invariant-density", "sigma": str(self.sigma), "character": self.rep.chi.to_json()}

    def verify(self) -> bool:
        return invariant_density_check(self.rep, self.sigma) and sample_positive(self.sigma, self.rep.model.chart)


def invariant_density_check(L: GpdLineRep, sigma=1) -> bool:
    """True iff c~_sigma is identically 1 (verified structurally)."""
    c = tilde_cocycle(L, sigma)
    for g in c.model.generic_arrows():
        v = c.value(g)
        if v.abs_part.is_zero() is not Truth.TRUE:
            return False
        if not definitely_positive(v.sign_part):
            return False
    return True


def sample_positive(sigma: RatExpr, chart: Chart, samples: int = 64, seed: int = 0, box=(-4, 4)) -> bool:
    """Sampled evidence for the caller's positivity claim (not a proof)."""
    rng = random.Random(seed)
    sigma = RatExpr.coerce(sigma)
    if sigma.is_constant():
        return sigma.constant_value() > 0
    lo, hi = box
    for _ in range(samples):
        point = {v: Fraction(rng.randint(lo * 64, hi * 64), 64) for v in chart.names}
        try:
            if sigma.evaluate(point) <= 0:
                return False
        except ValueError:
            return False
    return True


def mod_evidence(G: GroupoidModel, sigma=1, candidates: Sequence = ()) -> DensityWitness | FixedPointCertificate | None:
    """Invariant density witness, fixed-point obstruction, or None if inconclusive."""
    L = canonical_groupoid_rep(G, DENSITY)
    sigma = _section(G, sigma)
    if invariant_density_check(L, sigma) and sample_positive(sigma, G.chart):
        return DensityWitness(L, sigma)
    c = additive_part(tilde_cocycle(L, sigma))
    if candidates:
        return fixed_point_obstruction(G, c, candidates)
    return None
