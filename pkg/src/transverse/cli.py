"""Batch front end: ``transverse <command> <file> [--json] [--seed N] [--max-degree D]``.

Exit codes: 0 pass / trivial, 1 fail / obstruction, 2 malformed input,
3 undecided.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import algebroid as alg
from . import cech, groupoid as gpd, loaders
from .chars import DENSITY, ORIENTATION
from .symcore import PoleError, RatExpr, SymbolicError, Truth, integrate_density
from .symcore.randpoly import random_poly
from .vanest import VanEstError, induced_algebroid, van_est1

EXIT_OK, EXIT_FAIL, EXIT_MALFORMED, EXIT_UNKNOWN = 0, 1, 2, 3
VERDICTS = ("pass", "fail", "unknown")


@dataclass
class Entry:
    name: str
    verdict: str
    detail: str = ""
    certificate: dict | list | None = None
    residuals: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "verdict": self.verdict,
            "detail": self.detail,
            "certificate": self.certificate,
            "residuals": list(self.residuals),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Entry":
        if data["verdict"] not in VERDICTS:
            raise ValueError(f"unknown verdict {data['verdict']!r}")
        return cls(data["name"], data["verdict"], data.get("detail", ""), data.get("certificate"), list(data.get("residuals", [])))


@dataclass
class Report:
    command: str
    source: str
    entries: list = field(default_factory=list)
    summary: str = ""

    def add(self, *args, **kwargs) -> Entry:
        e = Entry(*args, **kwargs)
        self.entries.append(e)
        return e

    @property
    def exit_code(self) -> int:
        verdicts = {e.verdict for e in self.entries}
        if "fail" in verdicts:
            return EXIT_FAIL
        if "unknown" in verdicts:
            return EXIT_UNKNOWN
        return EXIT_OK

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "source": self.source,
            "summary": self.summary,
            "exit_code": self.exit_code,
            "entries": [e.to_json() for e in self.entries],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Report":
        r = cls(data["command"], data["source"], [Entry.from_json(e) for e in data["entries"]], data.get("summary", ""))
        if r.exit_code != data["exit_code"]:
            raise ValueError("exit code does not match the verdicts")
        return r

    def to_text(self) -> str:
        lines = [f"{self.command} {self.source}"]
        if self.summary:
            lines.append(f"  {self.summary}")
        for e in self.entries:
            line = f"  [{e.verdict.upper()}] {e.name}"
            if e.detail:
                line += f": {e.detail}"
            lines.append(line)
            for r in e.residuals[:10]:
                lines.append(f"      residual {r}")
            if len(e.residuals) > 10:
                lines.append(f"      ... {len(e.residuals) - 10} more")
            if e.certificate is not None:
                lines.append("      certificate " + json.dumps(e.certificate, sort_keys=True))
        return "\n".join(lines)


# commands ------------------------------------------------------------------

def _rng(args) -> random.Random:
    return random.Random(args.seed)


def _points(data: dict, A: alg.LieAlgebroid) -> list:
    if A.chart.dim == 0:
        return [()]
    return [tuple(Fraction(str(v)) for v in p) for p in data.get("points", [])]


def cmd_check_algebroid(data, args, report: Report):
    A = loaders.load_algebroid(data)
    res = alg.check_algebroid(A)
    report.summary = f"rank {A.rank} on chart ({', '.join(A.chart.names)})"
    report.add(
        "algebroid identities",
        "pass" if res.passed else "fail",
        res.summary(),
        residuals=[f.to_json() for f in res.failures],
    )
    if res.passed and A.chart.dim:
        rng = _rng(args)
        bad = []
        for _ in range(args.samples):
            f = random_poly(A.chart.names, args.max_degree, rng)
            dd = alg.dA1(A, alg.dA0(A, f))
            if any(not v.is_zero() for v in dd.values()):
                bad.append({"f": str(f)})
        report.add(f"d_A d_A f = 0 for {args.samples} random f", "fail" if bad else "pass", residuals=bad)


def cmd_modular_class(data, args, report: Report):
    if loaders.is_model(data):
        return _groupoid_modular_class(data, args, report)
    A = loaders.load_algebroid(data)
    alg._require_valid(A)
    mod = alg.modular_cocycle(A, validate=False)
    qa = alg.qa_cocycle(A, validate=False)
    vtr = alg.vtr_cocycle(A, validate=False)
    report.summary = f"modular cocycle {mod}"
    report.add("closed", "pass" if alg.is_closed(A, mod) else "fail", str(mod), certificate=mod.to_json())
    same = mod == qa == vtr
    report.add("D_A^tr, Q_A, V_A^tr cocycles agree", "pass" if same else "fail",
               f"Q_A {qa}, V_A^tr {vtr}")
    if mod.is_zero():
        report.add("class", "pass", "trivial (zero cocycle)", certificate={"f": "0"})
        return
    if "coboundary" in data:
        f = loaders._expr(data["coboundary"], A.chart.names, "$.coboundary")
        ok = alg.is_coboundary(A, mod, f)
        report.add("class", "pass" if ok else "unknown",
                   "trivial (coboundary certificate)" if ok else "supplied f is not a primitive",
                   certificate={"f": str(f)} if ok else None)
        if ok:
            return
    cert = alg.anchor_zero_obstruction(A, mod, _points(data, A))
    if cert is not None and alg.verify_anchor_zero_certificate(A, mod, cert):
        detail = ("nontrivial (constant-coboundary test)" if A.chart.dim == 0
                  else "nontrivial (anchor vanishes where the cocycle does not)")
        report.add("class", "fail", detail, certificate=cert.to_json())
        return
    report.add("class", "unknown", "no certificate either way")


def _groupoid_modular_class(data, args, report: Report):
    G = loaders.load_model(data)
    G.validate()
    sigma = loaders.load_section(data, G)
    ev = gpd.mod_evidence(G, sigma, loaders.load_candidates(data, G))
    _report_evidence(G, sigma, ev, report)


def _report_evidence(G, sigma, ev, report: Report):
    if isinstance(ev, gpd.DensityWitness):
        ok = ev.verify()
        report.add("mod(G)", "pass" if ok else "fail", "zero (invariant positive density)", certificate=ev.to_json())
    elif isinstance(ev, gpd.FixedPointCertificate):
        ok = gpd.verify_fixed_point_certificate(gpd.GpdLineRep(G), sigma, ev)
        report.add("mod(G)", "fail" if ok else "unknown",
                   f"nonzero (cocycle {ev.value} on an isotropy arrow)", certificate=ev.to_json())
    else:
        report.add("mod(G)", "unknown", "no invariant density and no fixed-point obstruction found")


def cmd_groupoid_cocycle(data, args, report: Report):
    G = loaders.load_model(data)
    G.validate()
    chi = loaders.load_character(data)
    sigma = loaders.load_section(data, G)
    L = gpd.canonical_groupoid_rep(G, chi)
    c = gpd.tilde_cocycle(L, sigma)
    report.summary = f"{G.kind} model, character {chi.to_json()}, sigma = {sigma}"
    values = []
    for g in G.generic_arrows():
        v = c.value(g)
        values.append({
            "arrow": g.to_json(),
            "jacobian": str(G.transverse_jacobian(g)),
            "c_tilde": v.to_json(),
            "c": (-v.abs_part).to_json(),
        })
    report.add("values", "pass", f"{len(values)} generic arrow(s)", certificate=values)
    unit = c.unit_residuals()
    report.add("c~(unit) = 1", "fail" if unit else "pass", residuals=[f"{k}: {v}" for k, v in unit])
    law = c.law_residuals()
    report.add("c~(gh) = c~(g) c~(h)", "fail" if law else "pass",
               residuals=[f"{kind}: {d}" for _, _, kind, d in law])
    add = gpd.additive_part(c)
    bad = add.law_residuals()
    report.add("c additive over composition", "fail" if bad else "pass", residuals=[str(d) for *_, d in bad])


def cmd_invariant_density(data, args, report: Report):
    G = loaders.load_model(data)
    G.validate()
    chi = loaders.load_character(data)
    sigma = loaders.load_section(data, G)
    L = gpd.canonical_groupoid_rep(G, chi)
    ok = gpd.invariant_density_check(L, sigma)
    report.summary = f"sigma = {sigma}, character {chi.to_json()}"
    if ok:
        positive = gpd.sample_positive(sigma, G.chart, seed=args.seed)
        report.add("sigma is invariant", "pass", "c~_sigma = 1 on every arrow",
                   certificate={"sigma": str(sigma), "sampled_positive": positive})
        return
    c = gpd.tilde_cocycle(L, sigma)
    vals = [{"arrow": g.to_json(), "c_tilde": c.value(g).to_json()} for g in G.generic_arrows()]
    report.add("sigma is invariant", "fail", "c~_sigma is not identically 1", residuals=vals)
    cands = loaders.load_candidates(data, G)
    if cands and chi == DENSITY:
        cert = gpd.fixed_point_obstruction(G, gpd.additive_part(c), cands)
        if cert is not None and gpd.verify_fixed_point_certificate(L, sigma, cert):
            report.add("no invariant density exists", "fail", "fixed-point obstruction", certificate=cert.to_json())


def cmd_vanest(data, args, report: Report):
    G = loaders.load_model(data)
    if not isinstance(G, gpd.LieActionModel):
        raise loaders.SchemaError("$.kind", "vanest needs a lie-action model")
    G.validate()
    A = induced_algebroid(G)
    L = gpd.canonical_groupoid_rep(G, DENSITY)
    c = gpd.additive_part(gpd.tilde_cocycle(L))
    ve = van_est1(G, c)
    mod = alg.modular_cocycle(A)
    report.summary = f"induced algebroid: anchor {[[str(e) for e in row] for row in A.anchor]}"
    report.add("VE(mod G) = mod A", "pass" if ve == mod else "fail", f"VE {ve}, mod A {mod}",
               certificate={"van_est": ve.to_json(), "modular": mod.to_json()})
    report.add("VE(mod G) closed", "pass" if alg.is_closed(A, ve) else "fail")
    o = gpd.additive_part(gpd.tilde_cocycle(gpd.canonical_groupoid_rep(G, ORIENTATION)))
    report.add("orientation twist has zero cocycle", "pass" if o.is_zero() is Truth.TRUE else "fail")
    rng = _rng(args)
    bad = []
    for _ in range(args.samples):
        f = random_poly(G.chart.names, args.max_degree, rng) if G.chart.dim else RatExpr.const(rng.randint(-5, 5))
        if van_est1(G, gpd.coboundary(G, f)) != alg.dA0(A, f):
            bad.append(str(f))
    report.add(f"VE(delta f) = d_A f for {args.samples} random f", "fail" if bad else "pass", residuals=bad)


def _graph_or_w1(data):
    if "nodes" in data:
        P = loaders.load_parity_graph(data)
        return None, None, cech.W1Verdict(P, cech.decide_trivial(P))
    G = loaders.load_model(data)
    G.validate()
    cover = loaders.load_cover(data, G)
    return G, cover, cech.w1tr(G, cover, loaders.load_group_samples(data, G))


def cmd_orientability(data, args, report: Report):
    G, cover, w = _graph_or_w1(data)
    if isinstance(G, gpd.DiscreteActionModel):
        moved = cech.sign_changes(G, cover or cech.CoverDecl.single(G.chart.dim), seed=args.seed)
        report.add("Jacobian sign constant on each component (sampled)", "unknown" if moved else "pass",
                   "refine the cover" if moved else "",
                   residuals=[f"{name}, generator {i + 1}, point {[str(v) for v in pt]}" for name, i, pt in moved[:10]])
    if not cech.check_certificate(w.graph, w.result):
        raise AssertionError("certificate failed to verify")
    report.summary = f"parity graph with {len(w.graph.nodes)} node(s), {len(w.graph.edges)} edge(s)"
    if w.trivial:
        report.add("w1tr", "pass", "trivial (transversely orientable)", certificate=w.to_json())
    else:
        loop = "isotropy loop" if len(w.result.cycle) == 1 else f"cycle of length {len(w.result.cycle)}"
        report.add("w1tr", "fail", f"nontrivial (violating {loop})", certificate=w.to_json())


def cmd_volume_form(data, args, report: Report):
    if "nodes" in data:
        # unit groupoid of a cover: mod = 0 since there are no nontrivial arrows
        P = loaders.load_parity_graph(data)
        w = cech.W1Verdict(P, cech.decide_trivial(P))
        verdict = cech.combine(cech.NoArrowsWitness(), w)
    else:
        G = loaders.load_model(data)
        G.validate()
        sigma = loaders.load_section(data, G)
        ev = gpd.mod_evidence(G, sigma, loaders.load_candidates(data, G))
        verdict = cech.transverse_volume_form_criterion(G, loaders.load_cover(data, G), ev)
    report.summary = f"transverse volume form: {verdict.answer}"
    v = {"yes": "pass", "no": "fail", "unknown": "unknown"}[verdict.answer]
    report.add("transverse volume form", v, verdict.answer, certificate=verdict.to_json())


def cmd_integrate_density(data, args, report: Report):
    names = tuple(data.get("chart", []))
    rho = loaders._expr(data.get("density", "1"), names, "$.density")
    try:
        box = [(Fraction(str(lo)), Fraction(str(hi))) for lo, hi in data["box"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise loaders.SchemaError("$.box", "expected [[lo, hi], ...]") from exc
    resolution = data.get("resolution", 100)
    if not isinstance(resolution, int) or resolution < 1:
        raise loaders.SchemaError("$.resolution", "expected a positive integer")
    try:
        value = integrate_density(rho, box, resolution, names)
    except PoleError as exc:
        report.add("integral", "fail", str(exc))
        return
    except ValueError as exc:
        raise loaders.SchemaError("$", str(exc)) from exc
    report.summary = f"midpoint rule, {resolution} cells per coordinate"
    report.add("integral", "pass", f"{float(value):.12g}", certificate={"exact": str(value)})


COMMANDS = {
    "check-algebroid": cmd_check_algebroid,
    "modular-class": cmd_modular_class,
    "groupoid-cocycle": cmd_groupoid_cocycle,
    "invariant-density": cmd_invariant_density,
    "vanest": cmd_vanest,
    "orientability": cmd_orientability,
    "volume-form-criterion": cmd_volume_form,
    "integrate-density": cmd_integrate_density,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="transverse", description="Certified modular classes and transverse orientability.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("file")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    p.add_argument("--max-degree", type=int, default=3, help="degree bound for random polynomials")
    p.add_argument("--samples", type=int, default=10, help="number of random polynomials per property")
    return p


def run(command: str, path: str, args) -> tuple[Report, int]:
    report = Report(command, path)
    data = loaders.read_json(path)
    try:
        COMMANDS[command](data, args, report)
    except alg.InvalidAlgebroidError as exc:
        report.add("algebroid identities", "fail", exc.report.summary(),
                   residuals=[f.to_json() for f in exc.report.failures])
    except gpd.ModelError as exc:
        report.add("model identities", "fail", str(exc), residuals=[f"{k}: {r}" for k, r in exc.residuals])
    return report, report.exit_code


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, code = run(args.command, args.file, args)
    except (loaders.SchemaError, SymbolicError, cech.CoverError, cech.SignEvaluationError, gpd.NotFixedError, VanEstError) as exc:
        kind = type(exc).__name__
        if args.json:
            print(json.dumps({"command": args.command, "source": args.file, "error": kind, "message": str(exc),
                              "exit_code": EXIT_MALFORMED}, indent=2))
        else:
            print(f"error ({kind}): {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    if args.json:
        print(json.dumps(report.to_json(), indent=2))
    else:
        print(report.to_text())
    return code


if __name__ == "__main__":
    sys.exit(main())
