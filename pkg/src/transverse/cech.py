"""Z/2 layer: covers, parity graphs and orientability verdicts.

A parity graph has one node per declared connected component of a cover
piece and one edge per sampled arrow between components, labelled by the
sign of a sign cocycle at that arrow.  A Z/2 cocycle is trivial iff there is
a node labelling eps with eps(a) * eps(b) = parity on every edge; this is
decided by union-find with parity and always comes with a certificate
(a labelling, or a cycle whose parities multiply to -1).
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .chars import VOLUME
from .groupoid import (
    Arrow,
    DensityWitness,
    DiscreteActionModel,
    FixedPointCertificate,
    GpdLineRep,
    GroupoidModel,
    LieActionModel,
    PairModel,
    _point_exprs,
    sign_part,
    tilde_cocycle,
    verify_fixed_point_certificate,
)
from .symcore import PoleError, RatExpr


class SignEvaluationError(ValueError):
    """The sign datum vanishes (or has a pole) at a sampled arrow."""

    def __init__(self, message: str, point=None):
        self.point = point
        super().__init__(message)


class CoverError(ValueError):
    pass


# parity graphs ---------------------------------------------------------------

@dataclass(frozen=True)
class Edge:
    a: str
    b: str
    parity: int
    label: str = ""

    def __post_init__(self):
        if self.parity not in (1, -1):
            raise ValueError(f"parity must be +1 or -1, got {self.parity}")


@dataclass(frozen=True)
class ParityGraph:
    nodes: tuple
    edges: tuple
    provenance: dict | None = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        nodes = tuple(self.nodes)
        if len(set(nodes)) != len(nodes):
            raise ValueError("duplicate node names")
        known = set(nodes)
        for e in self.edges:
            if e.a not in known or e.b not in known:
                raise ValueError(f"edge {e} refers to an unknown node")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", tuple(self.edges))

    def to_json(self) -> dict:
        edges = [[e.a, e.b, e.parity, e.label] if e.label else [e.a, e.b, e.parity] for e in self.edges]
        return {"nodes": list(self.nodes), "edges": edges}

    @classmethod
    def from_json(cls, data: dict) -> "ParityGraph":
        nodes = tuple(str(n) for n in data["nodes"])
        edges = []
        for item in data["edges"]:
            a, b, p = item[:3]
            label = str(item[3]) if len(item) > 3 else ""
            edges.append(Edge(str(a), str(b), int(p), label))
        return cls(nodes, tuple(edges))


def edgewise_product(p: ParityGraph, q: ParityGraph) -> ParityGraph:
    """Parity graph of a tensor product: same arrows, parities multiplied."""
    if p.nodes != q.nodes or [(e.a, e.b) for e in p.edges] != [(e.a, e.b) for e in q.edges]:
        raise ValueError("parity graphs have different arrows")
    edges = tuple(Edge(e.a, e.b, e.parity * f.parity, e.label) for e, f in zip(p.edges, q.edges))
    return ParityGraph(p.nodes, edges, p.provenance)


def mobius_graph() -> ParityGraph:
    """Two arcs covering a circle, one transition flipped."""
    return ParityGraph(("U", "V"), (Edge("U", "V", 1, "overlap 1"), Edge("U", "V", -1, "overlap 2")))


def cylinder_graph() -> ParityGraph:
    return ParityGraph(("U", "V"), (Edge("U", "V", 1, "overlap 1"), Edge("U", "V", 1, "overlap 2")))


def random_parity_graph(rng: random.Random, max_nodes: int = 12, max_edges: int = 20) -> ParityGraph:
    n = rng.randint(1, max_nodes)
    nodes = tuple(f"n{i}" for i in range(n))
    edges = tuple(
        Edge(rng.choice(nodes), rng.choice(nodes), rng.choice((1, -1)), f"e{k}")
        for k in range(rng.randint(0, max_edges))
    )
    return ParityGraph(nodes, edges)


# deciding triviality ------------------------------------------------------------

@dataclass(frozen=True)
class Trivial:
    assignment: dict

    trivial = True

    def to_json(self) -> dict:
        return {"verdict": "trivial", "assignment": dict(self.assignment)}


@dataclass(frozen=True)
class Nontrivial:
    cycle: tuple  # (from, to, parity, edge index) steps

    trivial = False

    def to_json(self) -> dict:
        return {
            "verdict": "nontrivial",
            "cycle": [{"from": a, "to": b, "parity": p, "edge": i} for a, b, p, i in self.cycle],
        }


def verify_assignment(P: ParityGraph, assignment: dict) -> bool:
    if set(assignment) != set(P.nodes) or any(v not in (1, -1) for v in assignment.values()):
        return False
    return all(assignment[e.a] * assignment[e.b] == e.parity for e in P.edges)


def verify_cycle(P: ParityGraph, cycle: Sequence) -> bool:
    """A closed walk along edges of P whose parities multiply to -1."""
    if not cycle:
        return False
    product = 1
    for k, (a, b, p, i) in enumerate(cycle):
        if not 0 <= i < len(P.edges):
            return False
        e = P.edges[i]
        if {a, b} != {e.a, e.b} or p != e.parity:
            return False
        if cycle[k - 1][1] != a:
            return False
        product *= p
    return product == -1


def check_certificate(P: ParityGraph, verdict) -> bool:
    if isinstance(verdict, Trivial):
        return verify_assignment(P, verdict.assignment)
    return verify_cycle(P, verdict.cycle)


def decide_trivial(P: ParityGraph) -> Trivial | Nontrivial:
    parent = {n: n for n in P.nodes}
    rel = {n: 1 for n in P.nodes}  # eps(n) = rel[n] * eps(parent[n])
    tree: dict = {n: [] for n in P.nodes}

    def find(n):
        path = []
        while parent[n] != n:
            path.append(n)
            n = parent[n]
        root = n
        # path compression with parity accumulation
        for m in reversed(path):
            if parent[m] != root:
                rel[m] *= rel[parent[m]]
                parent[m] = root
        return root

    for i, e in enumerate(P.edges):
        ra, rb = find(e.a), find(e.b)
        pa = rel[e.a] if e.a != ra else 1
        pb = rel[e.b] if e.b != rb else 1
        if ra != rb:
            parent[ra] = rb
            rel[ra] = e.parity * pa * pb
            tree[e.a].append((e.b, i))
            tree[e.b].append((e.a, i))
        elif pa * pb != e.parity:
            return Nontrivial(_close_cycle(P, tree, i))

    assignment = {}
    for n in P.nodes:
        r = find(n)
        assignment[n] = rel[n] if n != r else 1
    return Trivial(assignment)


def _close_cycle(P: ParityGraph, tree: dict, i: int) -> tuple:
    """Tree path from b back to a, closed by edge i."""
    e = P.edges[i]
    prev = {e.b: None}
    queue = deque([e.b])
    while queue:
        n = queue.popleft()
        if n == e.a:
            break
        for m, k in tree[n]:
            if m not in prev:
                prev[m] = (n, k)
                queue.append(m)
    steps = []
    n = e.a
    while prev[n] is not None:
        m, k = prev[n]
        steps.append((m, n, P.edges[k].parity, k))
        n = m
    # steps walk from b to a in reverse order
    path = list(reversed(steps))
    return tuple([(e.a, e.b, e.parity, i)] + path)


def brute_force_trivial(P: ParityGraph) -> bool:
    """Enumerate all 2^n labellings (oracle for small graphs)."""
    nodes = list(P.nodes)
    for signs in itertools.product((1, -1), repeat=len(nodes)):
        if verify_assignment(P, dict(zip(nodes, signs))):
            return True
    return False


# covers -----------------------------------------------------------------------

Box = tuple  # per coordinate (lo, hi); None means unbounded


def _in_box(point: Sequence[Fraction], box: Box) -> bool:
    for x, (lo, hi) in zip(point, box):
        if lo is not None and not x > lo:
            return False
        if hi is not None and not x < hi:
            return False
    return True


@dataclass(frozen=True)
class Component:
    base: tuple
    box: Box


@dataclass(frozen=True)
class Piece:
    name: str
    components: tuple


@dataclass(frozen=True)
class CoverDecl:
    pieces: tuple

    def validate(self, dim: int) -> None:
        names = [p.name for p in self.pieces]
        if len(set(names)) != len(names):
            raise CoverError("duplicate piece names")
        for p in self.pieces:
            if not p.components:
                raise CoverError(f"piece {p.name} has no components")
            for k, c in enumerate(p.components):
                if len(c.base) != dim or len(c.box) != dim:
                    raise CoverError(f"piece {p.name} component {k + 1}: wrong dimension")
                if not _in_box(c.base, c.box):
                    raise CoverError(f"piece {p.name} component {k + 1}: base point outside its region")

    def nodes(self) -> list[tuple[str, Component]]:
        out = []
        for p in self.pieces:
            for k, c in enumerate(p.components):
                out.append((p.name if len(p.components) == 1 else f"{p.name}#{k + 1}", c))
        return out

    def nodes_containing(self, point) -> list[str]:
        return [name for name, c in self.nodes() if _in_box(point, c.box)]

    @classmethod
    def single(cls, dim: int, base=None) -> "CoverDecl":
        base = tuple(Fraction(1) for _ in range(dim)) if base is None else tuple(Fraction(b) for b in base)
        whole = tuple((None, None) for _ in range(dim))
        return cls((Piece("M", (Component(base, whole),)),))

    @classmethod
    def from_json(cls, data: dict, dim: int) -> "CoverDecl":
        pieces = []
        for i, p in enumerate(data.get("pieces", [])):
            name = str(p.get("name", f"U{i + 1}"))
            if "components" in p:
                comps = [Component(_frac_point(c["base"]), _box(c.get("box"), dim)) for c in p["components"]]
            else:
                box = _box(p.get("box"), dim)
                comps = [Component(_frac_point(b), box) for b in p.get("base_points", [[1] * dim])]
            pieces.append(Piece(name, tuple(comps)))
        cover = cls(tuple(pieces)) if pieces else cls.single(dim)
        cover.validate(dim)
        return cover

    def to_json(self) -> dict:
        def bound(v):
            return None if v is None else str(v)

        return {
            "pieces": [
                {
                    "name": p.name,
                    "components": [
                        {"base": [str(x) for x in c.base], "box": [[bound(lo), bound(hi)] for lo, hi in c.box]}
                        for c in p.components
                    ],
                }
                for p in self.pieces
            ]
        }


def _boxes_meet(b1: Box, b2: Box) -> bool:
    for (lo1, hi1), (lo2, hi2) in zip(b1, b2):
        lo = max((v for v in (lo1, lo2) if v is not None), default=None)
        hi = min((v for v in (hi1, hi2) if v is not None), default=None)
        if lo is not None and hi is not None and not lo < hi:
            return False
    return True


def _frac_point(values) -> tuple:
    return tuple(Fraction(str(v)) for v in values)


def _box(data, dim: int) -> Box:
    if data is None:
        return tuple((None, None) for _ in range(dim))
    if len(data) != dim:
        raise CoverError(f"box needs {dim} intervals")
    return tuple(
        (None if lo is None else Fraction(str(lo)), None if hi is None else Fraction(str(hi))) for lo, hi in data
    )


def bisect(cover: CoverDecl, piece: str, coord: int, at, overlap=Fraction(1, 8)) -> tuple[CoverDecl, dict]:
    """Split every component of a piece along one coordinate.

    The halves overlap by ``2 * overlap`` so the result still covers.  Returns
    the refined cover and the map from new node names to old ones.
    """
    at = Fraction(at)
    old_names = dict((id(c), name) for name, c in cover.nodes())
    pieces = []
    node_map = {}
    for p in cover.pieces:
        if p.name != piece:
            pieces.append(p)
            continue
        halves: dict[str, list] = {f"{p.name}.lo": [], f"{p.name}.hi": []}
        for c in p.components:
            lo, hi = c.box[coord]
            if (lo is not None and at <= lo) or (hi is not None and at >= hi):
                raise CoverError(f"cut {at} is outside the component box")
            for key, (a, b) in ((f"{p.name}.lo", (lo, at + overlap)), (f"{p.name}.hi", (at - overlap, hi))):
                box = tuple((a, b) if j == coord else iv for j, iv in enumerate(c.box))
                base = c.base if _in_box(c.base, box) else _inner_point(c.base, box, coord)
                halves[key].append((Component(base, box), old_names[id(c)]))
        for key, comps in halves.items():
            new_piece = Piece(key, tuple(c for c, _ in comps))
            pieces.append(new_piece)
            for k, (_, old) in enumerate(comps):
                node_map[key if len(comps) == 1 else f"{key}#{k + 1}"] = old
    for name, _ in cover.nodes():
        if not any(v == name for v in node_map.values()):
            node_map[name] = name
    refined = CoverDecl(tuple(pieces))
    return refined, node_map


def _inner_point(base, box, coord):
    lo, hi = box[coord]
    if lo is None:
        x = hi - 1
    elif hi is None:
        x = lo + 1
    else:
        x = (lo + hi) / 2
    return tuple(x if j == coord else v for j, v in enumerate(base))


def pull_back_assignment(assignment: dict, node_map: dict) -> dict:
    """Orientation labelling of a refinement induced from the coarse one."""
    return {new: assignment[old] for new, old in node_map.items()}


# parity graphs of groupoid models -------------------------------------------------

def _sample_arrows(G: GroupoidModel, cover: CoverDecl, base: tuple, group_samples: Sequence | None):
    point = _point_exprs(base)
    if isinstance(G, DiscreteActionModel):
        for i in range(len(G.generators)):
            yield f"phi{i + 1}", Arrow(((i, 1),), point)
    elif isinstance(G, PairModel):
        for name, c in cover.nodes():
            if tuple(c.base) != tuple(base):
                yield f"to {name}", Arrow(_point_exprs(c.base), point)
    elif isinstance(G, LieActionModel):
        samples = group_samples
        if samples is None:
            samples = [tuple(1 if j == k else 0 for j in range(G.rank)) for k in range(G.rank)]
        for s in samples:
            yield "u=(" + ",".join(str(v) for v in s) + ")", Arrow(_point_exprs(s), point)
    else:
        raise TypeError(f"unsupported model {type(G).__name__}")


def _constant_of(r: RatExpr, where) -> Fraction:
    if not r.is_constant():
        raise SignEvaluationError(f"sign datum {r} is not constant at {where}", where)
    return r.constant_value()


def build_parity_graph(
    G: GroupoidModel,
    cover: CoverDecl,
    sign_data: Callable[[Arrow], RatExpr],
    group_samples: Sequence | None = None,
) -> ParityGraph:
    """Edges for each sampled arrow out of each base point, plus +1 edges across overlaps."""
    cover.validate(G.chart.dim)
    nodes = cover.nodes()
    edges = []
    for name, comp in nodes:
        for label, g in _sample_arrows(G, cover, comp.base, group_samples):
            try:
                value = _constant_of(sign_data(g), comp.base)
                target = tuple(_constant_of(t, comp.base) for t in G.target(g))
            except PoleError as exc:
                raise SignEvaluationError(f"pole at arrow {label} from {name}: {exc}", comp.base) from exc
            if value == 0:
                raise SignEvaluationError(f"sign datum vanishes at arrow {label} from {name}", comp.base)
            homes = cover.nodes_containing(target)
            if not homes:
                raise CoverError(f"target {[str(t) for t in target]} of arrow {label} from {name} is not covered")
            for home in homes:
                edges.append(Edge(name, home, 1 if value > 0 else -1, f"{label} @ {name}"))
    # boxes are convex, so each nonempty overlap is one connected piece
    for (name, comp), (other, comp2) in itertools.combinations(nodes, 2):
        if _boxes_meet(comp.box, comp2.box):
            edges.append(Edge(name, other, 1, f"overlap {name}/{other}"))
    return ParityGraph(tuple(n for n, _ in nodes), tuple(edges), {"model": G.kind, "cover": cover.to_json()})


def sign_changes(G: GroupoidModel, cover: CoverDecl, sign_data=None, samples: int = 16, seed: int = 0) -> list:
    """Sampled points inside a declared component where a generator's sign differs from the base point.

    ``sign_data`` defaults to the sign of the transverse Jacobian.
    """
    if not isinstance(G, DiscreteActionModel):
        return []
    if sign_data is None:
        sign_data = sign_part(tilde_cocycle(GpdLineRep(G, (VOLUME,)))).value
    rng = random.Random(seed)
    bad = []
    for name, comp in cover.nodes():
        for i in range(len(G.generators)):
            ref = _constant_of(sign_data(Arrow(((i, 1),), _point_exprs(comp.base))), comp.base)
            for _ in range(samples):
                pt = tuple(_sample_in(lo, hi, rng) for lo, hi in comp.box)
                try:
                    v = _constant_of(sign_data(Arrow(((i, 1),), _point_exprs(pt))), pt)
                except PoleError:
                    bad.append((name, i, pt))
                    continue
                if (v > 0) != (ref > 0) or v == 0:
                    bad.append((name, i, pt))
    return bad


def _sample_in(lo, hi, rng) -> Fraction:
    lo = Fraction(-8) if lo is None else lo
    hi = lo + 16 if hi is None else hi
    return lo + (hi - lo) * Fraction(rng.randint(1, 255), 256)


# verdicts ---------------------------------------------------------------------

@dataclass(frozen=True)
class W1Verdict:
    graph: ParityGraph
    result: Trivial | Nontrivial

    @property
    def trivial(self) -> bool:
        return self.result.trivial

    def to_json(self) -> dict:
        return {"graph": self.graph.to_json(), **self.result.to_json()}


def volume_sign_graph(G: GroupoidModel, cover: CoverDecl | None = None, group_samples=None) -> ParityGraph:
    cover = cover or CoverDecl.single(G.chart.dim)
    sign = sign_part(tilde_cocycle(GpdLineRep(G, (VOLUME,))))
    return build_parity_graph(G, cover, sign.value, group_samples)


def w1tr(G: GroupoidModel, cover: CoverDecl | None = None, group_samples=None) -> W1Verdict:
    """Transverse first Stiefel-Whitney class via the sign of the transverse Jacobian."""
    P = volume_sign_graph(G, cover, group_samples)
    result = decide_trivial(P)
    if not check_certificate(P, result):
        raise AssertionError("parity certificate failed to verify")
    return W1Verdict(P, result)


@dataclass(frozen=True)
class VolumeFormVerdict:
    answer: str  # yes | no | unknown
    reasons: tuple
    volume_form: dict | None = None

    def to_json(self) -> dict:
        return {"answer": self.answer, "reasons": list(self.reasons), "volume_form": self.volume_form}


@dataclass(frozen=True)
class NoArrowsWitness:
    """mod = 0 for a groupoid with only unit arrows: sigma = 1 is invariant."""

    sigma: RatExpr = RatExpr.const(1)

    def to_json(self) -> dict:
        return {"kind": "unit-groupoid", "sigma": "1"}


def combine(evidence, w1: W1Verdict, names: Sequence[str] = ()) -> VolumeFormVerdict:
    """Merge mod evidence with the w1 verdict; ``names`` label the emitted form."""
    reasons = []
    if isinstance(evidence, FixedPointCertificate):
        reasons.append({"obstruction": "mod != 0", "certificate": evidence.to_json()})
    if not w1.trivial:
        reasons.append({"obstruction": "w1tr != 0", "certificate": w1.to_json()})
    if reasons:
        return VolumeFormVerdict("no", tuple(reasons))
    if isinstance(evidence, (DensityWitness, NoArrowsWitness)):
        assignment = w1.result.assignment
        frame = "^".join(f"d{n}" for n in names) if names else "vol"
        form = {node: f"{'' if s > 0 else '-'}({evidence.sigma}) {frame}" for node, s in assignment.items()}
        why = ({"evidence": "invariant density", "certificate": evidence.to_json()},
               {"evidence": "w1tr = 0", "certificate": w1.to_json()})
        return VolumeFormVerdict("yes", why, form)
    return VolumeFormVerdict("unknown", ({"evidence": "modular class undecided"}, {"w1tr": w1.to_json()}))


def transverse_volume_form_criterion(G: GroupoidModel, cover: CoverDecl | None, evidence) -> VolumeFormVerdict:
    """Invariant transverse volume forms exist iff mod = 0 and w1tr = 0.

    ``evidence`` comes from :func:`groupoid.mod_evidence`; it is re-verified here.
    """
    if isinstance(evidence, DensityWitness):
        if evidence.rep.model is not G or not evidence.verify():
            raise ValueError("density witness does not verify")
    elif isinstance(evidence, FixedPointCertificate):
        rep = GpdLineRep(G)
        if not verify_fixed_point_certificate(rep, 1, evidence):
            raise ValueError("fixed-point certificate does not verify")
    return combine(evidence, w1tr(G, cover), G.chart.names)
