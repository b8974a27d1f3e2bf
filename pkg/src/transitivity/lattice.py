"""Implication lattice between the transitivity properties.

Only certificates (PROVED / REFUTED) move along edges. Finite-scale verdicts
stay where they were computed; a derived certificate that lands on such a
property is kept beside it in ``shadowed`` so reports can show both.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .core import (
    Provenance,
    PropertyId as P,
    Status,
    TransitivityError,
    Verdict,
)


class Condition(str, enum.Enum):
    NONE = "NONE"
    OPEN_MAP = "OPEN_MAP"
    INVERTIBLE = "INVERTIBLE"
    MINIMAL_NONTRIVIAL = "MINIMAL_NONTRIVIAL"


@dataclass(frozen=True)
class SystemFlags:
    open_map: bool = False
    invertible: bool = False
    trivial: bool | None = None  # None: not known either way

    def allows(self, edge: "ImplicationEdge") -> bool:
        c = edge.condition
        if c is Condition.NONE:
            return True
        if c is Condition.OPEN_MAP:
            return self.open_map
        if c is Condition.INVERTIBLE:
            return self.invertible and (not edge.negated or self.trivial is False)
        return self.trivial is False

    def to_dict(self) -> dict:
        return {"open_map": self.open_map, "invertible": self.invertible, "trivial": self.trivial}


@dataclass(frozen=True)
class ImplicationEdge:
    rule_id: str
    sources: tuple[P, ...]
    target: P
    negated: bool = False
    condition: Condition = Condition.NONE
    citation: str = ""

    def __str__(self):
        lhs = " & ".join(p.value for p in self.sources) or "(always)"
        rhs = ("not " if self.negated else "") + self.target.value
        cond = "" if self.condition is Condition.NONE else f" [{self.condition.value}]"
        return f"{self.rule_id}: {lhs} => {rhs}{cond}"


def _e(rule, src, dst, cite, cond=Condition.NONE, neg=False):
    src = tuple(P(x) for x in src.split("&")) if src else ()
    return ImplicationEdge(rule, src, P(dst), neg, cond, cite)


_LEDGER = (
    _e("E01", "LEO", "TM", "locally eventually onto maps are mixing"),
    _e("E02", "LEO", "SPT", "locally eventually onto maps are strongly product transitive"),
    _e("E03", "LEO", "VST", "an iterate of every opene set is the whole space"),
    _e("E04", "M", "VST", "minimal systems are very strongly transitive"),
    _e("E05", "VST", "ST", "finite unions covering X are unions covering X"),
    _e("E06", "ST", "TT", "covering X implies density"),
    _e("E07", "TM", "WM", "mixing implies weak mixing"),
    _e("E08", "WM", "TT", "a transitive product has transitive factors"),
    _e("E09", "SPT", "SET", "strong product transitivity gives strong exact transitivity"),
    _e("E10", "SET", "ET", "covering X implies density"),
    _e("E11", "SET", "ST", "strong exact transitivity gives strong transitivity"),
    _e("E12", "ET", "WM", "exact transitivity gives weak mixing"),
    _e("E13", "ET", "TT", "exact transitivity gives transitivity"),
    _e("E14", "ET", "EXACT", "exact transitivity gives exactness"),
    _e("E15", "SET", "FULLY_EXACT", "strong exact transitivity gives full exactness"),
    _e("E16", "FULLY_EXACT", "EXACT", "a set with interior is nonempty"),
    _e("E17", "TT&FULLY_EXACT", "ET", "transitive and fully exact gives exact transitivity"),
    _e("E18", "LEO", "DENSE_PERIODIC", "locally eventually onto maps have dense periodic sets"),
    _e("E19", "ST", "ITER_ALMOST_OPEN", "strongly transitive maps are iteratively almost open"),
    _e("C01", "ST", "VST", "for open maps ST and VST coincide", Condition.OPEN_MAP),
    _e("C02", "ST", "M", "for homeomorphisms ST is minimality", Condition.INVERTIBLE),
    _e("C03", "VST", "M", "for homeomorphisms VST is minimality", Condition.INVERTIBLE),
    _e("C04", "", "EXACT", "a nontrivial exact map is not injective", Condition.INVERTIBLE, neg=True),
    _e("C05", "M", "FULLY_EXACT", "a nontrivial minimal system is not fully exact",
       Condition.MINIMAL_NONTRIVIAL, neg=True),
)


def edge_ledger() -> list[ImplicationEdge]:
    return list(_LEDGER)


def edge_by_id(rule_id: str) -> ImplicationEdge:
    for e in _LEDGER:
        if e.rule_id == rule_id:
            return e
    raise KeyError(rule_id)


@dataclass
class VerdictTable:
    verdicts: dict[P, Verdict]
    flags: SystemFlags = field(default_factory=SystemFlags)
    shadowed: dict[P, Verdict] = field(default_factory=dict)

    def get(self, p: P) -> Verdict | None:
        return self.verdicts.get(P(p))

    def final(self, p: P) -> Verdict | None:
        """The strongest verdict known for p: a certificate if there is one."""
        p = P(p)
        v = self.verdicts.get(p)
        if v is not None and v.status.is_certificate:
            return v
        return self.shadowed.get(p, v)

    def certificates(self) -> dict[P, Verdict]:
        out = {p: v for p, v in self.shadowed.items()}
        out.update({p: v for p, v in self.verdicts.items() if v.status.is_certificate})
        return out

    def to_dict(self) -> dict:
        return {
            "flags": self.flags.to_dict(),
            "verdicts": {p.value: v.to_dict() for p, v in sorted(self.verdicts.items(), key=_order)},
            "shadowed": {p.value: v.to_dict() for p, v in sorted(self.shadowed.items(), key=_order)},
        }


def _order(item):
    return list(P).index(item[0])


@dataclass(frozen=True)
class Contradiction:
    prop: P
    proved_chain: tuple[str, ...]
    refuted_chain: tuple[str, ...]

    def __str__(self):
        return (f"{self.prop.value}: PROVED via {' <- '.join(self.proved_chain)}; "
                f"REFUTED via {' <- '.join(self.refuted_chain)}")


class ContradictionError(TransitivityError):
    code = "CONTRADICTION"

    def __init__(self, contradictions: list[Contradiction], table: VerdictTable):
        super().__init__("; ".join(map(str, contradictions)))
        self.contradictions = contradictions
        self.table = table


def _opposite(s: Status) -> Status:
    return Status.REFUTED if s is Status.PROVED else Status.PROVED


def _chain(certs: dict[P, Verdict], p: P, seen=None) -> tuple[str, ...]:
    seen = seen or set()
    v = certs[p]
    if v.provenance.direct or p in seen:
        return (f"{p.value} [direct]",)
    seen.add(p)
    out = [f"{p.value} [{v.provenance.rule}]"]
    for src in v.provenance.source:
        sp = P(src)
        if sp in certs:
            out.extend(_chain(certs, sp, seen))
    return tuple(out)


def closure(t: VerdictTable) -> tuple[VerdictTable, list[Contradiction]]:
    """Propagate certificates to a fixpoint; return the table and any contradictions."""
    verdicts = dict(t.verdicts)
    shadowed = dict(t.shadowed)
    certs: dict[P, Verdict] = {p: v for p, v in shadowed.items()}
    certs.update({p: v for p, v in verdicts.items() if v.status.is_certificate})
    contradictions: dict[P, Contradiction] = {}
    edges = [e for e in _LEDGER if t.flags.allows(e)]

    def derive(p: P, status: Status, rule: str, sources: tuple[P, ...]) -> bool:
        have = certs.get(p)
        if have is not None:
            if have.status is not status and p not in contradictions:
                tmp = dict(certs)
                tmp[p] = Verdict(status, None, {}, Provenance("PROPAGATED", tuple(s.value for s in sources), rule))
                new_chain = _chain(tmp, p)
                old_chain = _chain(certs, p)
                pc, rc = (new_chain, old_chain) if status is Status.PROVED else (old_chain, new_chain)
                contradictions[p] = Contradiction(p, pc, rc)
            return False
        summary = f"{status.value.lower()} via {rule} from {', '.join(s.value for s in sources) or 'system flags'}"
        v = Verdict(status, None, {"summary": summary},
                    Provenance("PROPAGATED", tuple(s.value for s in sources), rule))
        certs[p] = v
        current = verdicts.get(p)
        if current is None or current.status is Status.UNKNOWN:
            verdicts[p] = v
        else:
            shadowed[p] = v
        return True

    changed = True
    rounds = 0
    limit = len(P) * len(_LEDGER) + 1
    while changed and rounds < limit:
        changed = False
        rounds += 1
        for e in edges:
            forward = Status.REFUTED if e.negated else Status.PROVED
            src = [certs.get(s) for s in e.sources]
            if all(v is not None and v.status is Status.PROVED for v in src):
                changed |= derive(e.target, forward, e.rule_id, e.sources)
            tgt = certs.get(e.target)
            if tgt is not None and tgt.status is _opposite(forward):
                open_ = [s for s, v in zip(e.sources, src) if v is None or v.status is not Status.PROVED]
                if not e.sources:
                    # the flag alone forces the target; the opposite certificate clashes
                    changed |= derive(e.target, forward, e.rule_id, ())
                elif len(open_) == 1:
                    others = tuple(s for s in e.sources if s != open_[0]) + (e.target,)
                    changed |= derive(open_[0], Status.REFUTED, e.rule_id, others)
    out = VerdictTable(verdicts, t.flags, shadowed)
    return out, list(contradictions.values())


def propagate(t: VerdictTable) -> VerdictTable:
    out, contradictions = closure(t)
    if contradictions:
        raise ContradictionError(contradictions, out)
    return out


@dataclass(frozen=True)
class NonImplication:
    number: int
    statement: str
    premises: tuple[P, ...]
    failures: tuple[P, ...]


NON_IMPLICATIONS = (
    NonImplication(1, "Mixing does not imply strongly transitive, exact transitive or minimal",
                   (P.TM,), (P.ST, P.ET, P.M)),
    NonImplication(2, "Very strongly transitive does not imply minimal", (P.VST,), (P.M,)),
    NonImplication(3, "Minimal does not imply exact transitive or weak mixing", (P.M,), (P.ET, P.WM)),
    NonImplication(4, "Strongly product transitive and mixing do not imply very strongly transitive",
                   (P.SPT, P.TM), (P.VST,)),
    NonImplication(5, "Exact transitive and mixing do not imply strongly transitive",
                   (P.ET, P.TM), (P.ST,)),
    NonImplication(6, "Weak mixing does not imply mixing", (P.WM,), (P.TM,)),
)

NO_EXAMPLE = {6: "no constructive example is available; the counterexamples are classical and not finitely presented"}


@dataclass
class ConsistencyReport:
    contradictions: list[Contradiction]
    tensions: list[str]
    unknowns: list[P]
    instantiated: list[tuple[int, str, list[str]]]
    documented_gaps: dict[int, str]

    def to_dict(self) -> dict:
        return {
            "contradictions": [str(c) for c in self.contradictions],
            "tensions": self.tensions,
            "unknowns": [p.value for p in self.unknowns],
            "instantiated": [{"number": n, "statement": s, "failing": f} for n, s, f in self.instantiated],
            "documented_gaps": {str(k): v for k, v in self.documented_gaps.items()},
        }


def check_consistency(t: VerdictTable) -> ConsistencyReport:
    out, contradictions = closure(t)
    tensions = []
    for p, derived in out.shadowed.items():
        direct = out.verdicts[p]
        if (derived.status is Status.PROVED and direct.status.negative) or \
                (derived.status is Status.REFUTED and direct.status.positive):
            tensions.append(f"{p.value}: computed {direct.status.value} but {derived.status.value} "
                            f"via {derived.provenance.rule}")
    unknowns = [p for p in P if (out.final(p) is None or out.final(p).status is Status.UNKNOWN)]
    inst = []
    for ni in NON_IMPLICATIONS:
        if ni.number in NO_EXAMPLE:
            continue
        finals = {p: out.final(p) for p in (*ni.premises, *ni.failures)}
        if all(finals[p] is not None and finals[p].status.positive for p in ni.premises):
            failing = [p.value for p in ni.failures if finals[p] is not None and finals[p].status.negative]
            if failing:
                inst.append((ni.number, ni.statement, failing))
    return ConsistencyReport(contradictions, tensions, unknowns, inst, dict(NO_EXAMPLE))
