"""Route a system to the right procedures and assemble a report."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .core import (
    ALL_PROPERTIES,
    GridScale,
    PropertyId as P,
    Status,
    Verdict,
    WitnessScale,
    scale_from_dict,
    unknown,
)
from .interval import (
    FinitePLMap,
    LadderMap,
    PLMap,
    check_interval_property,
    eventually_fixed_dense,
    is_expanding,
    markov_partition,
    NotMarkov,
    st_refutation,
)
from .lang import (
    LindenstraussOracle,
    dedupe,
    periodic_word_scan,
    refute_vst_bound,
    substitution_primitive,
    witness_check,
    words_upto,
)
from .lattice import SystemFlags, VerdictTable, check_consistency, closure, edge_by_id
from .sft import decide_property, is_essential
from .systems import System

DEFAULT_SCALE = WitnessScale()
DEFAULT_GRID = GridScale()
_WITNESS_PROPS = (*ALL_PROPERTIES[:10], P.EXACT)


def _json_clean(x):
    return json.loads(json.dumps(x, default=str))


def _clean(v: Verdict) -> Verdict:
    return Verdict(v.status, v.scale, _json_clean(v.evidence), v.provenance)


# --------------------------------------------------------------------------
# Routing
# --------------------------------------------------------------------------


def _classify_sft(sys: System, props) -> dict[P, Verdict]:
    return {p: decide_property(sys.graph, p) for p in props}


def _vst_bound(o, s: WitnessScale) -> Verdict | None:
    N = max(1, s.L // 2)
    for v in dedupe(words_upto(o, s.ell), o.right_state):
        r = refute_vst_bound(o, v, N, s.L)
        if r.status is Status.REFUTED_BOUNDED:
            return r
    return None


def _classify_oracle(sys: System, props, s: WitnessScale) -> tuple[dict[P, Verdict], dict]:
    o = sys.oracle
    out: dict[P, Verdict] = {}
    notes: dict = {}
    bound = _vst_bound(o, s) if {P.VST, P.LEO} & set(props) else None
    for p in props:
        if p in (P.VST, P.LEO) and bound is not None:
            ev = dict(bound.evidence)
            if p is P.LEO:
                ev["summary"] = "no uniform connector length: " + ev["summary"]
            out[p] = Verdict(Status.REFUTED_BOUNDED, bound.scale, ev)
        elif p is P.M and sys.substitution is not None:
            if substitution_primitive(sys.substitution):
                out[p] = Verdict(Status.PROVED, None, {
                    "summary": "M (primitive substitution)", "basis": "TRUSTED_FACT",
                    "fact": "a primitive substitution generates a minimal subshift"})
            else:
                out[p] = witness_check(o, p, s)
        elif p in _WITNESS_PROPS:
            v = witness_check(o, p, s)
            if p is P.LEO and v.status is Status.WITNESS and isinstance(o, LindenstraussOracle):
                v = _lindenstrauss_leo_bound(o, v)
            out[p] = v
        else:
            out[p] = unknown(f"{p.value} has no procedure for oracle subshifts")
    if isinstance(o, LindenstraussOracle):
        notes["periodic_scan"] = periodic_word_scan(o, 6, 12).to_dict()
    return out, notes


def _lindenstrauss_leo_bound(o: LindenstraussOracle, v: Verdict) -> Verdict:
    checks = {}
    for word, n in v.evidence["uniform_lengths"].items():
        hat = o.hat(o.alphabet.encode(word))
        if not hat:
            continue
        m = o.recurrence_bound(hat)
        checks[word] = {"N": n, "M": m, "within": n <= len(word) + 2 * m}
    return Verdict(v.status, v.scale, {**v.evidence, "recurrence_check": checks}, v.provenance)


def fixed_point(f: PLMap) -> Fraction:
    if isinstance(f, LadderMap):
        return Fraction(0)
    xs, ys = f.breakpoints, f.values
    for k in range(len(xs) - 1):
        # g(x) = f(x) - x changes sign or vanishes on the piece
        g0, g1 = ys[k] - xs[k], ys[k + 1] - xs[k + 1]
        if g0 == 0:
            return xs[k]
        if g1 == 0:
            return xs[k + 1]
        if (g0 < 0) != (g1 < 0):
            return xs[k] + g0 * (xs[k + 1] - xs[k]) / (g0 - g1)
    raise AssertionError("a continuous self-map of an interval has a fixed point")


def _markov_graph(f: PLMap):
    if not isinstance(f, FinitePLMap) or not is_expanding(f):
        return None, None
    try:
        mp = markov_partition(f)
    except NotMarkov:
        return None, None
    if not is_essential(mp.graph):
        return None, mp
    return mp.graph, mp


def _classify_interval(sys: System, props, g: GridScale) -> tuple[dict[P, Verdict], dict]:
    f = sys.pl_map
    out: dict[P, Verdict] = {}
    notes: dict = {}
    graph, mp = _markov_graph(f)
    if mp is not None:
        notes["markov_partition"] = [str(x) for x in mp.points]
    for p in props:
        if p in (P.TT, P.TM, P.LEO) and graph is not None:
            v = decide_property(graph, p)
            out[p] = Verdict(v.status, v.scale, {**v.evidence, "route": "markov_partition"})
        elif p in (P.TT, P.TM, P.LEO, P.EXACT, P.FULLY_EXACT, P.ET):
            out[p] = check_interval_property(f, p, g)
        elif p is P.M:
            x = fixed_point(f)
            out[p] = Verdict(Status.REFUTED, None, {
                "summary": f"not M (fixed point {x} is a proper closed invariant set)", "fixed_point": str(x)})
        elif p is P.ST:
            probes = [fixed_point(f), f.domain.lo, f.domain.hi]
            for x in dict.fromkeys(probes):
                r = st_refutation(f, x)
                if r is not None:
                    out[p] = r
                    break
            else:
                out[p] = unknown("backward orbits of the probe points keep growing",
                                 probes=[str(x) for x in dict.fromkeys(probes)])
        else:
            out[p] = unknown(f"{p.value} has no procedure for interval maps")
    q = fixed_point(f)
    notes["eventually_fixed_dense"] = eventually_fixed_dense(f, q, g, 8).to_dict()
    return out, notes


# --------------------------------------------------------------------------
# Report
# --------------------------------------------------------------------------


@dataclass
class Row:
    prop: P
    verdict: Verdict
    shadowed: Verdict | None = None

    @property
    def final(self) -> Verdict:
        if self.verdict.status.is_certificate or self.shadowed is None:
            return self.verdict
        return self.shadowed

    def citation(self) -> str:
        prov = self.verdict.provenance
        if prov.direct:
            return "direct"
        e = edge_by_id(prov.rule)
        return f"{e.rule_id} {e.citation}"

    def to_dict(self) -> dict:
        d = {"property": self.prop.value, "verdict": self.verdict.to_dict()}
        if self.shadowed is not None:
            d["shadowed"] = self.shadowed.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Row":
        sh = d.get("shadowed")
        return cls(P(d["property"]), Verdict.from_dict(d["verdict"]),
                   Verdict.from_dict(sh) if sh else None)


def _short(p: P, v: Verdict) -> str:
    # the property column already names the property
    text = v.summary()
    return text[len(p.value) + 1:] if text.startswith(p.value + " ") else text


@dataclass
class ClassificationReport:
    system_id: str
    kind: str
    flags: SystemFlags
    rows: list[Row]
    consistency: dict
    notes: dict = field(default_factory=dict)
    scales: dict = field(default_factory=dict)

    def row(self, p: P) -> Row:
        p = P(p)
        for r in self.rows:
            if r.prop is p:
                return r
        raise KeyError(f"{p.value} was not classified")

    def final(self, p: P) -> Verdict:
        return self.row(p).final

    @property
    def contradictions(self) -> list[str]:
        return self.consistency.get("contradictions", [])

    def to_dict(self) -> dict:
        return {
            "system": self.system_id,
            "kind": self.kind,
            "flags": self.flags.to_dict(),
            "scales": self.scales,
            "rows": [r.to_dict() for r in self.rows],
            "consistency": self.consistency,
            "notes": self.notes,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ClassificationReport":
        return cls(d["system"], d["kind"], SystemFlags(**d["flags"]),
                   [Row.from_dict(r) for r in d["rows"]], d["consistency"], d["notes"], d["scales"])

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ClassificationReport":
        return cls.from_dict(json.loads(text))

    def to_text(self) -> str:
        head = f"system: {self.system_id} ({self.kind})"
        flags = ", ".join(k for k, v in self.flags.to_dict().items() if v) or "none"
        lines = [head, f"flags: {flags}", ""]
        fmt = "{:<17} {:<16} {:<26} {:<60} {}"
        lines.append(fmt.format("property", "verdict", "scale", "evidence", "citation"))
        lines.append("-" * 140)
        for r in self.rows:
            v = r.verdict
            scale = str(scale_from_dict(v.scale.to_dict())) if v.scale else ""
            lines.append(fmt.format(r.prop.value, v.status.value, scale, _short(r.prop, v)[:60],
                                    r.citation()).rstrip())
            if r.shadowed is not None:
                sh = r.shadowed
                lines.append(fmt.format("", "(" + sh.status.value + ")", "", _short(r.prop, sh)[:60],
                                        r.__class__(r.prop, sh).citation()).rstrip())
        c = self.consistency
        lines.append("")
        for n in c.get("instantiated", []):
            lines.append(f"non-implication {n['number']}: {n['statement']} (fails: {', '.join(n['failing'])})")
        for k, msg in c.get("documented_gaps", {}).items():
            lines.append(f"non-implication {k}: {msg}")
        for t in c.get("tensions", []):
            lines.append(f"tension: {t}")
        for t in c.get("contradictions", []):
            lines.append(f"CONTRADICTION: {t}")
        for k, v in sorted(self.notes.items()):
            summary = v.get("summary") if isinstance(v, dict) else None
            if summary is None and isinstance(v, dict) and "evidence" in v:
                summary = f"{v['status']}: {v['evidence'].get('summary', '')}"
            lines.append(f"note {k}: {summary if summary is not None else v}")
        return "\n".join(lines) + "\n"


def direct_verdicts(sys: System, props=None, scale: WitnessScale | None = None,
                    grid: GridScale | None = None) -> tuple[dict[P, Verdict], dict]:
    """Verdicts computed by the routed procedures, before any propagation."""
    props = list(ALL_PROPERTIES) if props is None else [P(p) for p in props]
    notes: dict = {}
    if sys.kind == "sft":
        direct = _classify_sft(sys, props)
    elif sys.kind == "interval":
        direct, notes = _classify_interval(sys, props, grid or DEFAULT_GRID)
    else:
        direct, notes = _classify_oracle(sys, props, scale or DEFAULT_SCALE)
    return {p: _clean(v) for p, v in direct.items()}, notes


def classify(sys: System, props=None, scale: WitnessScale | None = None,
             grid: GridScale | None = None) -> ClassificationReport:
    scale = scale or DEFAULT_SCALE
    grid = grid or DEFAULT_GRID
    direct, notes = direct_verdicts(sys, props, scale, grid)
    scales: dict = {}
    if sys.kind == "interval":
        scales["grid"] = grid.to_dict()
    elif sys.kind != "sft":
        scales["witness"] = scale.to_dict()
    table, _ = closure(VerdictTable(direct, sys.flags))
    report = check_consistency(table)
    rows = [Row(p, table.verdicts[p], table.shadowed.get(p)) for p in ALL_PROPERTIES if p in table.verdicts]
    return ClassificationReport(sys.label, sys.kind, sys.flags, rows, report.to_dict(),
                                _json_clean(notes), scales)
