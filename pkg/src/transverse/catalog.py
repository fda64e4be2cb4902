"""Small fixed library of algebroids and groupoid models used by tests and the CLI."""

from __future__ import annotations

from typing import Callable

from .algebroid import LieAlgebroid, lie_algebra, poisson, tangent
from .groupoid import DiscreteActionModel, Generator, GroupoidModel, LieActionModel, PairModel
from .symcore import Chart, parse

R1 = Chart(("x",))
R2 = Chart(("x", "y"))
R3 = Chart(("x", "y", "z"))
POINT = Chart(())


def _exprs(texts, names):
    return tuple(parse(t, names) for t in texts)


def discrete(chart: Chart, *maps: tuple) -> DiscreteActionModel:
    gens = [Generator(_exprs(m, chart.names), _exprs(inv, chart.names)) for m, inv in maps]
    return DiscreteActionModel(chart, gens)


def lie_action(chart: Chart, coords, mul, inv, action) -> LieActionModel:
    coords = tuple(coords)
    mul_names = tuple(f"{c}_1" for c in coords) + tuple(f"{c}_2" for c in coords)
    return LieActionModel(
        chart,
        coords,
        _exprs(mul, mul_names),
        _exprs(inv, coords),
        _exprs(action, coords + chart.names),
    )


# groupoid models -------------------------------------------------------------

def pair(n: int = 1) -> PairModel:
    return PairModel((R1, R2, R3)[n - 1])


def doubling() -> DiscreteActionModel:
    return discrete(R1, (("2*x",), ("1/2*x",)))


def reflection() -> DiscreteActionModel:
    return discrete(R1, (("-1*x",), ("-1*x",)))


def shift() -> DiscreteActionModel:
    return discrete(R1, (("x+1",), ("x-1",)))


def translations() -> LieActionModel:
    return lie_action(R1, ("u",), ("u_1+u_2",), ("-1*u",), ("x+u",))


def scaling() -> LieActionModel:
    """Multiplicative group 1+u acting on the line by dilation."""
    return lie_action(R1, ("u",), ("u_1+u_2+u_1*u_2",), ("-1*u/(1+u)",), ("(1+u)*x",))


def weighted_scaling() -> LieActionModel:
    """Dilations of the plane with weights (1, 2)."""
    return lie_action(R2, ("u",), ("u_1+u_2+u_1*u_2",), ("-1*u/(1+u)",), ("(1+u)*x", "(1+u)^2*y"))


_AFF_MUL = ("u_1+u_2+u_1*u_2", "t_1+(1+u_1)*t_2")
_AFF_INV = ("-1*u/(1+u)", "-1*t/(1+u)")


def affine() -> LieActionModel:
    """x -> (1+u) x + t, coordinates (scale u, translation t)."""
    return lie_action(R1, ("u", "t"), _AFF_MUL, _AFF_INV, ("(1+u)*x+t",))


def affine_point() -> LieActionModel:
    """The affine group itself, acting on a point."""
    return lie_action(POINT, ("u", "t"), _AFF_MUL, _AFF_INV, ())


MODELS: dict[str, Callable[[], GroupoidModel]] = {
    "pair-r1": lambda: pair(1),
    "pair-r2": lambda: pair(2),
    "pair-r3": lambda: pair(3),
    "doubling": doubling,
    "reflection": reflection,
    "shift": shift,
    "translations": translations,
    "scaling": scaling,
    "weighted-scaling": weighted_scaling,
    "affine": affine,
    "affine-point": affine_point,
}

LIE_ACTIONS = ("translations", "scaling", "weighted-scaling", "affine", "affine-point")


# algebroids ------------------------------------------------------------------

def aff1() -> LieAlgebroid:
    """[e1, e2] = e2."""
    return lie_algebra(2, {(0, 1): (0, 1)}, name="aff(1)")


def abelian(dim: int = 2) -> LieAlgebroid:
    return lie_algebra(dim, {}, name=f"abelian({dim})")


def heisenberg() -> LieAlgebroid:
    """[e1, e2] = e3."""
    return lie_algebra(3, {(0, 1): (0, 0, 1)}, name="heisenberg")


def broken_so3() -> LieAlgebroid:
    """[e1,e2] = e3, [e2,e3] = e1, [e3,e1] = e1: violates Jacobi."""
    return lie_algebra(3, {(0, 1): (0, 0, 1), (1, 2): (1, 0, 0), (2, 0): (1, 0, 0)}, name="broken-so3")


def sl2() -> LieAlgebroid:
    """[h,e] = 2e, [h,f] = -2f, [e,f] = h."""
    return lie_algebra(3, {(0, 1): (0, 2, 0), (0, 2): (0, 0, -2), (1, 2): (1, 0, 0)}, name="sl(2)")


def poisson_x() -> LieAlgebroid:
    """Poisson structure pi^{12} = x on the plane."""
    return poisson(R2, {(0, 1): parse("x", R2.names)})


def _induced(name: str) -> Callable[[], LieAlgebroid]:
    def build():
        from .vanest import induced_algebroid

        return induced_algebroid(MODELS[name]())

    return build


ALGEBROIDS: dict[str, Callable[[], LieAlgebroid]] = {
    "tangent-r1": lambda: tangent(R1),
    "tangent-r2": lambda: tangent(R2),
    "tangent-r3": lambda: tangent(R3),
    "aff1": aff1,
    "abelian": abelian,
    "heisenberg": heisenberg,
    "sl2": sl2,
    "poisson-x": poisson_x,
    **{f"induced-{name}": _induced(name) for name in LIE_ACTIONS},
}
