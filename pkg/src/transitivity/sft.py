"""Exact decisions for vertex shifts of finite type.

A vertex shift is presented by a directed graph; its points are the infinite
(one-sided) or bi-infinite (two-sided) walks. All decisions reduce to graph
structure: strong connectivity, period, tensor products and boolean matrix
powers.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field, replace
from math import gcd

import networkx as nx
import numpy as np

from .core import (
    Alphabet,
    CapExceededError,
    EmptySystemError,
    EventuallyPeriodicSet,
    IllegalWordError,
    NotStronglyConnectedError,
    PropertyId,
    Verdict,
    epset_from_samples,
    proved,
    refuted,
)

DEFAULT_MAX_POWER = 4096


class Sided(str, enum.Enum):
    ONE = "one"
    TWO = "two"


@dataclass(frozen=True)
class SftGraph:
    """Vertex-shift presentation. Vertices are encoded alphabet characters."""

    alphabet: Alphabet
    edges: frozenset[tuple[str, str]]
    sided: Sided = Sided.ONE
    open_map: bool = True
    invertible: bool = False

    def __post_init__(self):
        if self.invertible and self.sided is not Sided.TWO:
            raise ValueError("only two-sided shifts can be flagged invertible")
        chars = set(self.alphabet.chars)
        for a, b in self.edges:
            if a not in chars or b not in chars:
                raise ValueError(f"edge {(a, b)!r} uses a vertex outside the alphabet")

    @classmethod
    def from_names(cls, vertices, edges, sided: Sided | str = Sided.ONE) -> "SftGraph":
        alpha = Alphabet.of(vertices)
        sided = Sided(sided)
        e = frozenset((alpha.char(a), alpha.char(b)) for a, b in edges)
        return cls(alpha, e, sided, True, sided is Sided.TWO)

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.alphabet.chars

    def digraph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return g

    def successors(self, v: str) -> list[str]:
        return [b for b in self.vertices if (v, b) in self.edges]

    def predecessors(self, v: str) -> list[str]:
        return [a for a in self.vertices if (a, v) in self.edges]

    def adjacency(self) -> np.ndarray:
        idx = {v: i for i, v in enumerate(self.vertices)}
        a = np.zeros((len(idx), len(idx)), dtype=bool)
        for u, v in self.edges:
            a[idx[u], idx[v]] = True
        return a

    def is_legal(self, word: str) -> bool:
        if not word:
            return True
        verts = set(self.vertices)
        if any(c not in verts for c in word):
            return False
        return all((word[i], word[i + 1]) in self.edges for i in range(len(word) - 1))

    def induced(self, keep) -> "SftGraph":
        keep = [v for v in self.vertices if v in set(keep)]
        if not keep:
            raise EmptySystemError("no vertices left")
        names = [self.alphabet.name(v) for v in keep]
        alpha = Alphabet.of(names)
        recode = {v: alpha.char(self.alphabet.name(v)) for v in keep}
        e = frozenset((recode[a], recode[b]) for a, b in self.edges if a in recode and b in recode)
        return replace(self, alphabet=alpha, edges=e)

    @property
    def is_trivial(self) -> bool:
        """Single-point subshift: one vertex carrying a loop."""
        g = essentialize(self)
        return len(g.vertices) == 1


def _essential_vertices(vertices, edges) -> list[str]:
    alive = set(vertices)
    changed = True
    while changed:
        changed = False
        for v in list(alive):
            has_out = any(a == v and b in alive for a, b in edges)
            has_in = any(b == v and a in alive for a, b in edges)
            if not (has_out and has_in):
                alive.discard(v)
                changed = True
    return [v for v in vertices if v in alive]


def essentialize(g: SftGraph) -> SftGraph:
    """Drop vertices that support no point (in- or out-degree 0, iterated)."""
    keep = _essential_vertices(g.vertices, g.edges)
    if not keep:
        raise EmptySystemError("graph presents the empty subshift")
    if len(keep) == len(g.vertices):
        return g
    return g.induced(keep)


def is_essential(g: SftGraph) -> bool:
    return len(_essential_vertices(g.vertices, g.edges)) == len(g.vertices)


def _period_of_component(dg: nx.DiGraph, nodes) -> int:
    """gcd of cycle lengths in a strongly connected node set, via BFS levels."""
    nodes = set(nodes)
    root = next(iter(sorted(nodes)))
    level = {root: 0}
    frontier = [root]
    while frontier:
        nxt = []
        for u in frontier:
            for w in dg.successors(u):
                if w in nodes and w not in level:
                    level[w] = level[u] + 1
                    nxt.append(w)
        frontier = nxt
    d = 0
    for u in nodes:
        for w in dg.successors(u):
            if w in nodes:
                d = gcd(d, level[u] + 1 - level[w])
    return d


def graph_period(g: SftGraph) -> int:
    dg = g.digraph()
    if not nx.is_strongly_connected(dg):
        raise NotStronglyConnectedError("period is defined for strongly connected graphs")
    d = _period_of_component(dg, dg.nodes)
    if d == 0:
        raise NotStronglyConnectedError("graph has no cycle")
    return d


def is_primitive(g: SftGraph) -> bool:
    dg = g.digraph()
    return nx.is_strongly_connected(dg) and _period_of_component(dg, dg.nodes) == 1


# --------------------------------------------------------------------------
# Reachability profiles and hitting-time sets
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ReachProfile:
    """Path-length sets for every ordered vertex pair.

    ``index``/``period`` describe where the boolean power sequence
    A^1, A^2, ... starts repeating.
    """

    vertices: tuple[str, ...]
    index: int
    period: int
    sets: dict[tuple[str, str], EventuallyPeriodicSet] = field(repr=False)

    def __getitem__(self, pair: tuple[str, str]) -> EventuallyPeriodicSet:
        return self.sets[pair]


def _power_cycle(a: np.ndarray, max_power: int) -> tuple[list[np.ndarray], int, int]:
    """Return powers [A^1..A^(i+p-1)], index i and period p of the power sequence."""
    ai = a.astype(np.int64)
    seen: dict[bytes, int] = {}
    powers = []
    cur = a.copy()
    n = 1
    while True:
        key = cur.tobytes()
        if key in seen:
            i = seen[key]
            return powers, i, n - i
        if n > max_power:
            raise CapExceededError(f"boolean power sequence did not cycle within {max_power} powers")
        seen[key] = n
        powers.append(cur)
        cur = (cur.astype(np.int64) @ ai) > 0
        n += 1


def reach_profile(g: SftGraph, max_power: int = DEFAULT_MAX_POWER) -> ReachProfile:
    powers, index, period = _power_cycle(g.adjacency(), max_power)
    count = index + 2 * period - 1

    def power(n):
        if n <= len(powers):
            return powers[n - 1]
        return powers[index - 1 + (n - index) % period]

    verts = g.vertices
    stack = [power(n) for n in range(1, count + 1)]
    sets = {}
    for i, u in enumerate(verts):
        for j, v in enumerate(verts):
            bits = [bool(p[i, j]) for p in stack]
            sets[(u, v)] = epset_from_samples(bits, index, period)
    return ReachProfile(verts, index, period, sets)


def _check_word(g: SftGraph, w: str) -> None:
    if not w:
        raise IllegalWordError("cylinder words must be nonempty")
    if not g.is_legal(w):
        raise IllegalWordError(f"word {g.alphabet.decode(w)!r} is not legal")


def overlap_compatible(g: SftGraph, u: str, v: str, n: int) -> bool:
    """Is there a legal word with u at position 1 and v at position n + 1 (n < |u|)?"""
    tail = u[n:]
    k = min(len(tail), len(v))
    if tail[:k] != v[:k]:
        return False
    if len(v) <= len(tail):
        return True
    return (u[-1], v[len(tail)]) in g.edges


def hitting_set(g: SftGraph, u: str, v: str, profile: ReachProfile | None = None) -> EventuallyPeriodicSet:
    """N([u], [v]) = {n >= 1 : sigma^n [u] meets [v]} as a canonical set."""
    g = essentialize(g)
    _check_word(g, u)
    _check_word(g, v)
    prof = profile or reach_profile(g)
    lu = len(u)
    reach = prof[(u[-1], v[0])]
    # for n >= |u| the connector path last(u) -> first(v) has n - |u| + 1 edges
    index = lu + prof.index - 1
    count = index + 2 * prof.period - 1
    bits = []
    for n in range(1, count + 1):
        if n < lu:
            bits.append(overlap_compatible(g, u, v, n))
        else:
            bits.append(n - lu + 1 in reach)
    return epset_from_samples(bits, index, prof.period)


# --------------------------------------------------------------------------
# Products, recoding, invariant cores
# --------------------------------------------------------------------------


def _pair_name(a: str, b: str) -> str:
    return f"({a},{b})"


def build_product(g1: SftGraph, g2: SftGraph, essential: bool = True) -> SftGraph:
    """Tensor product presenting (X x Y, sigma x sigma)."""
    if g1.sided is not g2.sided:
        raise ValueError("product factors must have the same sidedness")
    pairs = list(itertools.product(g1.vertices, g2.vertices))
    names = [_pair_name(g1.alphabet.name(a), g2.alphabet.name(b)) for a, b in pairs]
    alpha = Alphabet.of(names)
    enc = {p: alpha.chars[i] for i, p in enumerate(pairs)}
    edges = frozenset(
        (enc[(a, b)], enc[(c, d)])
        for (a, c) in g1.edges
        for (b, d) in g2.edges
    )
    prod = SftGraph(alpha, edges, g1.sided, g1.open_map and g2.open_map,
                    g1.invertible and g2.invertible)
    return essentialize(prod) if essential else prod


def higher_block_recode(alphabet: Alphabet, forbidden: list[str]) -> SftGraph:
    """Vertex shift on (k-1)-blocks presenting the SFT with the given forbidden words."""
    if not forbidden:
        raise ValueError("forbidden word list must be nonempty")
    k = max(len(w) for w in forbidden)
    if k < 2:
        k = 2
    bad = set(forbidden)

    def clean(w):
        return not any(f in w for f in bad)

    blocks = ["".join(t) for t in itertools.product(alphabet.chars, repeat=k - 1)]
    blocks = [b for b in blocks if clean(b)]
    if not blocks:
        raise EmptySystemError("no legal blocks")
    names = [alphabet.decode(b) for b in blocks]
    if k == 2:
        alpha = Alphabet.of(names)
    else:
        alpha = Alphabet.of(["[" + n + "]" for n in names])
    enc = dict(zip(blocks, alpha.chars))
    edges = frozenset(
        (enc[b], enc[c]) for b in blocks for c in blocks
        if b[1:] == c[:-1] and clean(b + c[-1])
    )
    return essentialize(SftGraph(alpha, edges))


class CoreMode(str, enum.Enum):
    PLUS = "PLUS"
    WEAK_MINUS = "WEAK_MINUS"
    MINUS = "MINUS"


def invariant_core(g: SftGraph, w, mode: CoreMode | str = CoreMode.PLUS) -> frozenset[str]:
    """Largest W' within W whose vertex subshift is invariant (and, for MINUS,
    closed under taking preimages in the whole system)."""
    mode = CoreMode(mode)
    w = set(w)
    if not w:
        raise ValueError("vertex set must be nonempty")
    full = _essential_vertices(g.vertices, g.edges)
    cur = set(_essential_vertices([v for v in g.vertices if v in w], g.edges)) & w
    if mode is not CoreMode.MINUS:
        return frozenset(cur)
    while True:
        keep = {v for v in cur if all(a in cur for a in full if (a, v) in g.edges)}
        keep = set(_essential_vertices([v for v in g.vertices if v in keep], g.edges)) & keep
        if keep == cur:
            return frozenset(cur)
        cur = keep


# --------------------------------------------------------------------------
# Property decisions
# --------------------------------------------------------------------------


def _component_certificate(g: SftGraph) -> dict:
    dg = g.digraph()
    comps = [sorted(g.alphabet.name(v) for v in c) for c in nx.strongly_connected_components(dg)]
    comps.sort()
    for u in g.vertices:
        desc = nx.descendants(dg, u)
        for v in g.vertices:
            if v != u and v not in desc:
                return {"components": comps,
                        "unreachable": [g.alphabet.name(u), g.alphabet.name(v)]}
    return {"components": comps}


def exact_pairs_reach_diagonal(g: SftGraph) -> tuple[bool, tuple[str, str] | None]:
    """Every vertex pair reaches a common vertex by walks of equal length."""
    dp = nx.DiGraph()
    for (a, c) in g.edges:
        for (b, d) in g.edges:
            dp.add_edge((a, b), (c, d))
    diag = {(v, v) for v in g.vertices}
    can = set()
    for d in diag:
        if d in dp:
            can |= nx.ancestors(dp, d) | {d}
    for a in g.vertices:
        for b in g.vertices:
            if a != b and not any(s in can for s in dp.successors((a, b))):
                return False, (a, b)
    return True, None


def decide_property(g: SftGraph, p: PropertyId) -> Verdict:
    """Exact PROVED/REFUTED decision with a graph certificate."""
    g = essentialize(g)
    p = PropertyId(p)
    name = g.alphabet.name
    dg = g.digraph()
    sc = nx.is_strongly_connected(dg)
    period = graph_period(g) if sc else None
    primitive = sc and period == 1
    single_cycle = sc and all(dg.out_degree(v) == 1 for v in g.vertices)
    trivial = len(g.vertices) == 1
    two_sided = g.invertible

    def sc_verdict(label):
        if sc:
            return proved(f"{label} (strongly connected)", period=period)
        return refuted(f"not {label} (not strongly connected)", **_component_certificate(g))

    def prim_verdict(label):
        if primitive:
            return proved(f"{label} (primitive; period 1)", period=1)
        if sc:
            return refuted(f"not {label} (period {period})", period=period)
        return refuted(f"not {label} (not strongly connected)", **_component_certificate(g))

    def m_verdict():
        if single_cycle:
            return proved("minimal (graph is a single cycle)", cycle_length=len(g.vertices))
        if not sc:
            return refuted("not minimal (not strongly connected)", **_component_certificate(g))
        branch = next(v for v in g.vertices if dg.out_degree(v) > 1)
        return refuted("not minimal (vertex with two successors)", branching_vertex=name(branch),
                       successors=[name(s) for s in g.successors(branch)])

    if two_sided and not trivial and p in (PropertyId.EXACT, PropertyId.FULLY_EXACT,
                                            PropertyId.ET, PropertyId.SET,
                                            PropertyId.SPT, PropertyId.LEO):
        return refuted(f"not {p.value}: injective shift on a nontrivial space is not exact",
                       invertible=True, points_at_least=2)

    if p is PropertyId.TT:
        return sc_verdict("TT")
    if p in (PropertyId.ST, PropertyId.VST):
        if two_sided:
            v = m_verdict()
            return Verdict(v.status, evidence={**v.evidence, "summary":
                           f"{p.value} equals M for a homeomorphism: " + v.evidence["summary"]})
        return sc_verdict(p.value)
    if p is PropertyId.M:
        return m_verdict()
    if p is PropertyId.WM:
        prod = build_product(g, g, essential=False)
        try:
            pe = essentialize(prod)
            ok = nx.is_strongly_connected(pe.digraph())
            ncomp = nx.number_strongly_connected_components(pe.digraph())
        except EmptySystemError:
            ok, ncomp = False, 0
        if ok:
            return proved("WM (product graph strongly connected)")
        return refuted("not WM (product graph not strongly connected)", product_components=ncomp)
    if p in (PropertyId.TM, PropertyId.LEO, PropertyId.SPT):
        return prim_verdict(p.value)
    if p in (PropertyId.ET, PropertyId.SET):
        v = prim_verdict(p.value)
        if primitive:
            chain = ["primitive", "LEO", "SPT", "SET", "ET"]
        else:
            chain = ["not primitive", "not WM", "not ET", "not SET"]
        return Verdict(v.status, evidence={**v.evidence, "lattice_chain": chain})
    if p in (PropertyId.EXACT, PropertyId.FULLY_EXACT):
        ok, bad = exact_pairs_reach_diagonal(g)
        label = p.value
        if ok:
            return proved(f"{label} (every vertex pair reaches the diagonal of the product graph)")
        return refuted(f"not {label} (vertex pair never meets)", pair=[name(bad[0]), name(bad[1])])
    if p is PropertyId.DENSE_PERIODIC:
        comp = {}
        for i, c in enumerate(nx.strongly_connected_components(dg)):
            for v in c:
                comp[v] = i
        for a, b in sorted(g.edges):
            if comp[a] != comp[b]:
                return refuted("no dense periodic sets (edge leaves its component)",
                               edge=[name(a), name(b)])
        return proved("dense periodic sets (every edge lies in a strongly connected component)")
    if p is PropertyId.ITER_ALMOST_OPEN:
        return proved("iteratively almost open (shift on a vertex shift is an open map)")
    raise ValueError(f"unsupported property {p}")
