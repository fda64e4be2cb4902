"""JSON problem files -> algebroids, groupoid models, covers."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from . import catalog
from .algebroid import LieAlgebroid, poisson
from .cech import CoverDecl, CoverError, ParityGraph
from .chars import DENSITY, Character
from .groupoid import DiscreteActionModel, Generator, GroupoidModel, LieActionModel, PairModel
from .symcore import Chart, ParseError, RatExpr, SymbolicError, parse


class SchemaError(ValueError):
    """Malformed problem file; ``path`` locates the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


def read_json(path: str | Path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SchemaError(str(path), f"cannot read file ({exc.strerror})") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from exc
    if not isinstance(data, dict):
        raise SchemaError(str(path), "top level must be an object")
    return data


def _list(data, key, path, default=None):
    value = data.get(key, default)
    if value is None:
        raise SchemaError(f"{path}.{key}", "missing")
    if not isinstance(value, list):
        raise SchemaError(f"{path}.{key}", "expected a list")
    return value


def _expr(text, names, path) -> RatExpr:
    if isinstance(text, (int,)) and not isinstance(text, bool):
        text = str(text)
    if not isinstance(text, str):
        raise SchemaError(path, f"expected an expression string, got {text!r}")
    try:
        return parse(text, names)
    except ParseError as exc:
        raise SchemaError(f"{path} (column {exc.position + 1})", str(exc)) from exc
    except SymbolicError as exc:
        raise SchemaError(path, str(exc)) from exc


def _exprs(items, names, path, length=None) -> tuple:
    if not isinstance(items, list):
        raise SchemaError(path, "expected a list of expressions")
    if length is not None and len(items) != length:
        raise SchemaError(path, f"expected {length} entries, got {len(items)}")
    return tuple(_expr(t, names, f"{path}[{i}]") for i, t in enumerate(items))


def _chart(data, path) -> Chart:
    names = data.get("chart", [])
    if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
        raise SchemaError(f"{path}.chart", "expected a list of names")
    try:
        return Chart(names)
    except ValueError as exc:
        raise SchemaError(f"{path}.chart", str(exc)) from exc


def _pair_key(key: str, r: int, path: str) -> tuple[int, int]:
    try:
        a, b = (int(p) for p in key.split(","))
    except ValueError as exc:
        raise SchemaError(path, f"bracket key {key!r} must look like 'a,b'") from exc
    if not (1 <= a <= r and 1 <= b <= r):
        raise SchemaError(path, f"bracket key {key!r} out of range 1..{r}")
    return a - 1, b - 1


def load_algebroid(data: dict, path: str = "$") -> LieAlgebroid:
    if "catalog" in data:
        name = data["catalog"]
        if name not in catalog.ALGEBROIDS and name != "broken-so3":
            raise SchemaError(f"{path}.catalog", f"unknown catalog algebroid {name!r}")
        return catalog.broken_so3() if name == "broken-so3" else catalog.ALGEBROIDS[name]()
    chart = _chart(data, path)
    names = chart.names
    if "poisson" in data:
        biv = {}
        for key, text in dict(data["poisson"]).items():
            i, j = _pair_key(key, chart.dim, f"{path}.poisson")
            biv[(i, j)] = _expr(text, names, f"{path}.poisson.{key}")
        try:
            return poisson(chart, biv, validate=False)
        except ValueError as exc:
            raise SchemaError(f"{path}.poisson", str(exc)) from exc
    rank = data.get("rank")
    if not isinstance(rank, int) or rank < 0:
        raise SchemaError(f"{path}.rank", "expected a nonnegative integer")
    anchor_rows = _list(data, "anchor", path, default=[])
    if len(anchor_rows) != chart.dim:
        raise SchemaError(f"{path}.anchor", f"expected {chart.dim} rows")
    anchor = tuple(_exprs(row, names, f"{path}.anchor[{j}]", rank) for j, row in enumerate(anchor_rows))
    raw = data.get("brackets", {})
    if not isinstance(raw, dict):
        raise SchemaError(f"{path}.brackets", "expected an object")
    brackets = {}
    for key, vec in raw.items():
        a, b = _pair_key(key, rank, f"{path}.brackets")
        if a == b:
            raise SchemaError(f"{path}.brackets.{key}", "diagonal bracket entries are not allowed")
        brackets[(a, b)] = _exprs(vec, names, f"{path}.brackets.{key}", rank)
    return LieAlgebroid(chart, rank, anchor, brackets, name=str(data.get("name", "")))


def load_model(data: dict, path: str = "$") -> GroupoidModel:
    if "catalog" in data:
        name = data["catalog"]
        if name not in catalog.MODELS:
            raise SchemaError(f"{path}.catalog", f"unknown catalog model {name!r}")
        return catalog.MODELS[name]()
    kind = data.get("kind")
    chart = _chart(data, path)
    names = chart.names
    if kind == "pair":
        return PairModel(chart)
    if kind == "discrete-action":
        gens = []
        for i, g in enumerate(_list(data, "generators", path)):
            p = f"{path}.generators[{i}]"
            if not isinstance(g, dict):
                raise SchemaError(p, "expected an object")
            gens.append(Generator(
                _exprs(g.get("map"), names, f"{p}.map", chart.dim),
                _exprs(g.get("inverse"), names, f"{p}.inverse", chart.dim),
                str(g.get("name", f"phi{i + 1}")),
            ))
        return DiscreteActionModel(chart, gens)
    if kind == "lie-action":
        group = data.get("group")
        if not isinstance(group, dict):
            raise SchemaError(f"{path}.group", "expected an object")
        coords = _list(group, "coords", f"{path}.group")
        if not all(isinstance(c, str) for c in coords):
            raise SchemaError(f"{path}.group.coords", "expected names")
        mul_names = tuple(f"{c}_1" for c in coords) + tuple(f"{c}_2" for c in coords)
        mul = _exprs(group.get("mul"), mul_names, f"{path}.group.mul", len(coords))
        inv = _exprs(group.get("inv"), tuple(coords), f"{path}.group.inv", len(coords))
        act = _exprs(data.get("action"), tuple(coords) + names, f"{path}.action", chart.dim)
        try:
            return LieActionModel(chart, coords, mul, inv, act)
        except ValueError as exc:
            raise SchemaError(f"{path}.group", str(exc)) from exc
    raise SchemaError(f"{path}.kind", f"expected pair, discrete-action or lie-action, got {kind!r}")


def load_character(data: dict, path: str = "$") -> Character:
    if "character" not in data:
        return DENSITY
    try:
        return Character.from_json(data["character"])
    except (KeyError, ValueError, TypeError) as exc:
        raise SchemaError(f"{path}.character", "expected a name or {\"m\": int, \"eps\": 0|1}") from exc


def load_section(data: dict, model: GroupoidModel, path: str = "$") -> RatExpr:
    sigma = _expr(data.get("sigma", "1"), model.chart.names, f"{path}.sigma")
    if sigma.is_zero():
        raise SchemaError(f"{path}.sigma", "section must be nonzero")
    return sigma


def load_candidates(data: dict, model: GroupoidModel, path: str = "$") -> list:
    """Fixed-point candidates as ``(label, point)`` pairs."""
    out = []
    for i, item in enumerate(data.get("fixed_points", [])):
        p = f"{path}.fixed_points[{i}]"
        try:
            point = tuple(Fraction(str(v)) for v in item["point"])
            if isinstance(model, DiscreteActionModel):
                word = item.get("word", [[1, 1]])
                label = tuple((int(g) - 1, int(e)) for g, e in word)
                if any(not 0 <= g < len(model.generators) or e not in (1, -1) for g, e in label):
                    raise SchemaError(f"{p}.word", "generator index or exponent out of range")
            elif isinstance(model, LieActionModel):
                label = tuple(Fraction(str(v)) for v in item["element"])
            else:
                label = point
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, SchemaError):
                raise
            raise SchemaError(p, f"malformed fixed point ({exc})") from exc
        if len(point) != model.chart.dim:
            raise SchemaError(f"{p}.point", f"expected {model.chart.dim} coordinates")
        out.append((label, point))
    return out


def load_cover(data: dict, model: GroupoidModel, path: str = "$") -> CoverDecl:
    try:
        return CoverDecl.from_json(data.get("cover", {}), model.chart.dim)
    except (CoverError, KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"{path}.cover", str(exc)) from exc


def load_group_samples(data: dict, model: GroupoidModel, path: str = "$"):
    if "arrows" not in data:
        return None
    samples = []
    for i, s in enumerate(data["arrows"]):
        try:
            samples.append(tuple(Fraction(str(v)) for v in s))
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"{path}.arrows[{i}]", "expected rational numbers") from exc
        if isinstance(model, LieActionModel) and len(samples[-1]) != model.rank:
            raise SchemaError(f"{path}.arrows[{i}]", f"expected {model.rank} group coordinates")
    return samples


def load_parity_graph(data: dict, path: str = "$") -> ParityGraph:
    try:
        return ParityGraph.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(path, f"malformed parity graph ({exc})") from exc


def is_model(data: dict) -> bool:
    return "kind" in data or ("catalog" in data and data["catalog"] in catalog.MODELS)
