"""Built-in example systems with expected classifications."""

from __future__ import annotations

import enum
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .classify import ClassificationReport, classify
from .core import GridScale, PropertyId as P, Status, WitnessScale
from .lattice import NO_EXAMPLE
from .systems import build_system, parse_system


class Truth(str, enum.Enum):
    TRUE = "TRUE"
    FALSE = "FALSE"
    UNTESTED = "UNTESTED"


@dataclass(frozen=True)
class Expectation:
    value: Truth
    source: str
    strict: bool = True
    # strict: the verdict must point the same way, not merely avoid contradicting it


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    title: str
    system: dict
    expected: dict[P, Expectation]
    scale: WitnessScale | None = None
    grid: GridScale | None = None

    def descriptor(self):
        return parse_system({**self.system, "id": self.id})


def _x(value, source, strict=True, props=()):
    return {P(p): Expectation(Truth(value), source, strict) for p in props}


def _full(vertices, sided):
    return {"type": "sft", "vertices": list(vertices),
            "edges": [[a, b] for a in vertices for b in vertices], "sided": sided}


_PRIMITIVE_ONE_SIDED = "primitive one-sided vertex shift; exact graph decision"
_ALL_BUT_M = ("TT", "ST", "VST", "WM", "ET", "SET", "SPT", "TM", "LEO", "EXACT", "FULLY_EXACT",
              "DENSE_PERIODIC", "ITER_ALMOST_OPEN")


def corpus_entries() -> list[CorpusEntry]:
    pl = {"type": "pl_map", "domain": ["-1", "1"], "breakpoints": ["-1", "-1/2", "1/2", "1"]}
    return [
        CorpusEntry(
            "full_one_sided", "full one-sided 2-shift", _full("01", "one"),
            {**_x("TRUE", "one-sided full shift is LEO hence VST", props=_ALL_BUT_M),
             **_x("FALSE", "one-sided full shift is not minimal", props=["M"])}),
        CorpusEntry(
            "full_two_sided", "full two-sided 2-shift", _full("01", "two"),
            {**_x("TRUE", "two-sided full shift is a mixing homeomorphism", props=["TM", "WM", "TT"]),
             **_x("FALSE", "not minimal; injective so not exact; ST equals M for homeomorphisms",
                  props=["M", "EXACT", "ST", "VST", "ET", "SET", "SPT", "LEO", "FULLY_EXACT"])}),
        CorpusEntry(
            "golden_mean", "golden-mean shift (no 11)",
            {"type": "sft", "vertices": ["0", "1"], "edges": [["0", "0"], ["0", "1"], ["1", "0"]],
             "sided": "one"},
            {**_x("TRUE", _PRIMITIVE_ONE_SIDED, props=_ALL_BUT_M),
             **_x("FALSE", "vertex 0 has two successors", props=["M"])}),
        CorpusEntry(
            "two_cycle", "single periodic orbit of length 2",
            {"type": "sft", "vertices": ["0", "1"], "edges": [["0", "1"], ["1", "0"]], "sided": "one"},
            {**_x("TRUE", "a single cycle is minimal", props=["TT", "ST", "VST", "M"]),
             **_x("FALSE", "period 2 graph",
                  props=["WM", "TM", "ET", "SET", "SPT", "LEO", "EXACT", "FULLY_EXACT"])}),
        CorpusEntry(
            "fibonacci", "Fibonacci substitution a->ab, b->a (minimal stand-in for a rotation)",
            {"type": "substitution", "rules": {"a": "ab", "b": "a"}},
            {**_x("TRUE", "primitive substitution (trusted minimality criterion)", props=["M"]),
             **_x("FALSE", "nontrivial minimal systems are not fully exact", props=["FULLY_EXACT"]),
             **_x("FALSE", "rotation-like minimal system; no finite refutation procedure",
                  strict=False, props=["WM", "EXACT"])}),
        CorpusEntry(
            "thue_morse", "Thue-Morse substitution 1->12, 2->21",
            {"type": "substitution", "rules": {"1": "12", "2": "21"}},
            {**_x("TRUE", "primitive substitution", props=["M"]),
             **_x("FALSE", "nontrivial minimal systems are not fully exact", props=["FULLY_EXACT"])}),
        CorpusEntry(
            "gap3", "gap shift with flanked 0-runs of length 3^n",
            {"type": "gap_shift", "base": 3},
            {**_x("TRUE", "SPT and mixing", props=["SPT", "TM"]),
             **_x("FALSE", "minimal connector length unbounded as the tail varies", props=["VST"])}),
        CorpusEntry(
            "lindenstrauss", "zero-insertion lift of Thue-Morse",
            {"type": "lindenstrauss", "base_rules": {"1": "12", "2": "21"}},
            {**_x("TRUE", "locally eventually onto; uniform connector length |v| + 2M", props=["LEO"]),
             **_x("TRUE", "follows from LEO", strict=False, props=["TM", "SPT", "VST"])},
            scale=WitnessScale(ell=2, L=12, H=40, K=1)),
        CorpusEntry(
            "exact_f", "interval map -(2+2x) | 2x | 2-2x on [-1,1]", {**pl, "values": ["0", "-1", "1", "0"]},
            {**_x("TRUE", "exact with intersection {0}", props=["EXACT"]),
             **_x("FALSE", "not fully exact; [-1,0] and [0,1] are invariant", props=["FULLY_EXACT", "TT"])},
            grid=GridScale(Fraction(1, 16), 12)),
        CorpusEntry(
            "fully_exact_g", "interval map -(2+2x) | 2x | 3-4x on [-1,1]", {**pl, "values": ["0", "-1", "1", "-1"]},
            {**_x("TRUE", "fully exact with intersection [-1,0]", props=["FULLY_EXACT", "EXACT"]),
             **_x("FALSE", "[-1,0] is invariant", props=["TT"])},
            grid=GridScale(Fraction(1, 16), 12)),
        CorpusEntry(
            "tent", "tent map on [0,1]",
            {"type": "pl_map", "domain": ["0", "1"], "breakpoints": ["0", "1/2", "1"], "values": ["0", "1", "0"]},
            {**_x("TRUE", "Markov partition graph is complete", props=["TT", "TM", "LEO", "ET"]),
             **_x("FALSE", "0 is a fixed point", props=["M"])}),
        CorpusEntry(
            "ladder", "bi-infinite ladder map on [0,1]", {"type": "ladder"},
            {**_x("TRUE", "exact transitive and mixing", props=["TM", "ET"]),
             **_x("FALSE", "0 and 1 have singleton backward orbits", props=["ST"])},
            grid=GridScale(Fraction(1, 64), 40)),
        CorpusEntry(
            "gap3_x_full", "product of the gap shift with the full one-sided 2-shift",
            {"type": "product", "factors": [{"type": "gap_shift", "base": 3}, _full("01", "one")]},
            {**_x("TRUE", "product of mixing systems is mixing", props=["TM"]),
             **_x("FALSE", "the gap shift factor is not VST", props=["VST"])}),
    ]


def get_entry(entry_id: str) -> CorpusEntry:
    for e in corpus_entries():
        if e.id == entry_id:
            return e
    raise KeyError(f"no corpus entry {entry_id!r}")


# --------------------------------------------------------------------------
# Running
# --------------------------------------------------------------------------


def compare(exp: Expectation, status: Status) -> str | None:
    """Return a failure message, or None when the verdict is consistent."""
    if exp.value is Truth.UNTESTED:
        return None
    if exp.value is Truth.TRUE:
        if status is Status.REFUTED or (exp.strict and status not in (Status.PROVED, Status.WITNESS)):
            return f"expected TRUE, got {status.value}"
    else:
        negative = (Status.REFUTED, Status.REFUTED_BOUNDED, Status.NO_WITNESS)
        if status is Status.PROVED or (exp.strict and status not in negative):
            return f"expected FALSE, got {status.value}"
    return None


@dataclass
class EntryResult:
    entry: CorpusEntry
    report: ClassificationReport
    failures: list[str]
    seconds: float

    @property
    def passed(self) -> bool:
        return not self.failures and not self.report.contradictions

    def to_dict(self) -> dict:
        return {"id": self.entry.id, "passed": self.passed, "failures": self.failures,
                "seconds": round(self.seconds, 3), "report": self.report.to_dict()}


@dataclass
class CorpusReport:
    results: list[EntryResult]
    coverage: dict[int, list[str]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> dict:
        return {"passed": self.passed,
                "coverage": {str(k): v for k, v in sorted(self.coverage.items())},
                "documented_gaps": {str(k): v for k, v in NO_EXAMPLE.items()},
                "entries": [r.to_dict() for r in self.results]}

    def to_text(self) -> str:
        lines = []
        for r in self.results:
            mark = "PASS" if r.passed else "FAIL"
            lines.append(f"{mark}  {r.entry.id:<16} {r.seconds:6.2f}s  {'; '.join(r.failures)}".rstrip())
            for c in r.report.contradictions:
                lines.append(f"      CONTRADICTION {c}")
        lines.append("")
        for n in range(1, 7):
            if n in NO_EXAMPLE:
                lines.append(f"non-implication {n}: {NO_EXAMPLE[n]}")
            else:
                who = ", ".join(self.coverage.get(n, [])) or "not instantiated"
                lines.append(f"non-implication {n}: {who}")
        return "\n".join(lines) + "\n"


def run_entry(entry: CorpusEntry, scale: WitnessScale | None = None,
              grid: GridScale | None = None) -> EntryResult:
    t0 = time.perf_counter()
    sys = build_system(entry.descriptor())
    report = classify(sys, scale=scale or entry.scale, grid=grid or entry.grid)
    failures = []
    for p, exp in entry.expected.items():
        msg = compare(exp, report.final(p).status)
        if msg:
            failures.append(f"{p.value}: {msg}")
    return EntryResult(entry, report, failures, time.perf_counter() - t0)


def run_corpus(scale: WitnessScale | None = None, grid: GridScale | None = None,
               only: list[str] | None = None) -> CorpusReport:
    entries = [e for e in corpus_entries() if only is None or e.id in only]
    results = [run_entry(e, scale, grid) for e in entries]
    coverage: dict[int, list[str]] = {}
    for r in results:
        for inst in r.report.consistency.get("instantiated", []):
            coverage.setdefault(inst["number"], []).append(r.entry.id)
    return CorpusReport(results, coverage)


def export_corpus(directory: str | Path) -> list[Path]:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for e in corpus_entries():
        p = out / f"{e.id}.json"
        p.write_text(json.dumps({**e.system, "id": e.id}, indent=2, sort_keys=True) + "\n")
        paths.append(p)
    return paths
