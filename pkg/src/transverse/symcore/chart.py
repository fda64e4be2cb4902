from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .parser import parse
from .ratexpr import RatExpr


@dataclass(frozen=True)
class Chart:
    """Ordered coordinate names of an open box in R^n."""

    names: tuple[str, ...]

    def __init__(self, names: Sequence[str] = ()):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"chart coordinates must be distinct: {names}")
        object.__setattr__(self, "names", names)

    @property
    def dim(self) -> int:
        return len(self.names)

    def var(self, name: str) -> RatExpr:
        if name not in self.names:
            raise KeyError(name)
        return RatExpr.var(name, self.names)

    def coords(self) -> tuple[RatExpr, ...]:
        return tuple(self.var(v) for v in self.names)

    def parse(self, text: str) -> RatExpr:
        return parse(text, self.names)

    def point(self, values: Sequence) -> dict[str, Fraction]:
        if len(values) != self.dim:
            raise ValueError(f"expected a point of dimension {self.dim}, got {len(values)}")
        return {v: Fraction(x) for v, x in zip(self.names, values)}

    def renamed(self, suffix: str) -> "Chart":
        return Chart(tuple(f"{v}{suffix}" for v in self.names))


def eval_at(f: RatExpr, point: Sequence, chart: Chart) -> Fraction:
    """Exact value of ``f`` at a point given in chart order."""
    return f.evaluate(chart.point(point))
