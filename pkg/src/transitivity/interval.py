"""Exact piecewise-linear interval maps.

Everything is done in :class:`fractions.Fraction`. A map is continuous and
linear between consecutive breakpoints, so the image of a closed interval
is the closed interval spanned by the values at its endpoints and at the
breakpoints it contains.

Two presentations are supported: an explicit finite breakpoint list, and
the bi-infinite "ladder" on [0, 1] whose breakpoints are
``s(j) = 2^j / (1 + 2^j)`` for all integers j, with ``a_i = s(2i)``,
``b_i = s(2i + 1)``, ``a_i -> a_{i-1}`` and ``b_i -> b_{i+1}``.
"""

from __future__ import annotations

import bisect
import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .core import (
    CapExceededError,
    GridScale,
    OutOfDomainError,
    PropertyId,
    Status,
    Verdict,
)
from .sft import SftGraph

Q = Fraction
UNION_CAP = 100_000


def q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def fmt(x: Fraction) -> str:
    return str(x)


# --------------------------------------------------------------------------
# Intervals and unions
# --------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", q(self.lo))
        object.__setattr__(self, "hi", q(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    @property
    def degenerate(self) -> bool:
        return self.lo == self.hi

    def contains(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"


class IntervalUnion:
    """A finite union of closed intervals, kept sorted and merged."""

    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[Interval] = ()):
        items = sorted(parts)
        merged: list[Interval] = []
        for iv in items:
            if merged and iv.lo <= merged[-1].hi:
                if iv.hi > merged[-1].hi:
                    merged[-1] = Interval(merged[-1].lo, iv.hi)
            else:
                merged.append(iv)
        if len(merged) > UNION_CAP:
            raise CapExceededError(f"interval union has more than {UNION_CAP} pieces")
        self.parts: tuple[Interval, ...] = tuple(merged)

    @classmethod
    def of(cls, *pairs) -> "IntervalUnion":
        return cls(Interval(a, b) for a, b in pairs)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __bool__(self):
        return bool(self.parts)

    def __eq__(self, other):
        return isinstance(other, IntervalUnion) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __or__(self, other: "IntervalUnion") -> "IntervalUnion":
        return IntervalUnion(self.parts + other.parts)

    def __and__(self, other: "IntervalUnion") -> "IntervalUnion":
        out = []
        i = j = 0
        a, b = self.parts, other.parts
        while i < len(a) and j < len(b):
            lo, hi = max(a[i].lo, b[j].lo), min(a[i].hi, b[j].hi)
            if lo <= hi:
                out.append(Interval(lo, hi))
            if a[i].hi < b[j].hi:
                i += 1
            else:
                j += 1
        return IntervalUnion(out)

    def contains(self, other: "IntervalUnion") -> bool:
        return all(any(p.contains(iv) for p in self.parts) for iv in other.parts)

    def has_interior(self) -> bool:
        return any(not p.degenerate for p in self.parts)

    @property
    def measure(self) -> Fraction:
        return sum((p.length for p in self.parts), Fraction(0))

    def __contains__(self, x) -> bool:
        return any(x in p for p in self.parts)

    def __str__(self):
        return " u ".join(map(str, self.parts)) if self.parts else "{}"

    __repr__ = __str__


# --------------------------------------------------------------------------
# Maps
# --------------------------------------------------------------------------


def s(j: int) -> Fraction:
    """Ladder coordinate 2^j / (1 + 2^j)."""
    if j >= 0:
        t = 1 << j
        return Fraction(t, t + 1)
    return Fraction(1, (1 << -j) + 1)


def ladder_a(i: int) -> Fraction:
    return s(2 * i)


def ladder_b(i: int) -> Fraction:
    return s(2 * i + 1)


def _ladder_index_ceil(x: Fraction) -> int:
    """Least j with s(j) >= x, for 0 < x < 1."""
    r = x / (1 - x)
    j = r.numerator.bit_length() - r.denominator.bit_length()
    two = Fraction(2)
    while two ** j < r:
        j += 1
    while two ** (j - 1) >= r:
        j -= 1
    return j


def _ladder_index_floor(x: Fraction) -> int:
    """Greatest j with s(j) <= x, for 0 < x < 1."""
    j = _ladder_index_ceil(x)
    return j if s(j) == x else j - 1


def _ladder_value(j: int) -> Fraction:
    return s(j - 2) if j % 2 == 0 else s(j + 2)


class PLMap:
    """A continuous piecewise-linear self-map of a closed interval."""

    kind = "abstract"
    domain: Interval

    def __call__(self, x) -> Fraction:
        raise NotImplementedError

    def breakpoints_between(self, lo: Fraction, hi: Fraction) -> list[Fraction]:
        """Breakpoints strictly inside (lo, hi); lo and hi must avoid accumulation points."""
        raise NotImplementedError

    def pieces_near(self, y: Fraction) -> list[tuple[Fraction, Fraction]]:
        """Pieces [x0, x1] whose image might contain y."""
        raise NotImplementedError

    def slopes(self, limit: int = 20) -> list[Fraction]:
        raise NotImplementedError

    def _check(self, x):
        if x not in self.domain:
            raise OutOfDomainError(f"{x} lies outside {self.domain}")

    def image_interval(self, iv: Interval) -> Interval:
        self._check(iv.lo)
        self._check(iv.hi)
        pts = [iv.lo, iv.hi, *self.breakpoints_between(iv.lo, iv.hi)]
        vals = [self(x) for x in pts]
        return Interval(min(vals), max(vals))


@dataclass(frozen=True, eq=False)
class FinitePLMap(PLMap):
    breakpoints: tuple[Fraction, ...]
    values: tuple[Fraction, ...]
    kind: str = field(default="finite", init=False)

    def __post_init__(self):
        xs = tuple(q(x) for x in self.breakpoints)
        ys = tuple(q(y) for y in self.values)
        if len(xs) != len(ys) or len(xs) < 2:
            raise ValueError("need at least two breakpoints with one value each")
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if any(not (xs[0] <= y <= xs[-1]) for y in ys):
            raise ValueError("values must lie in the domain")
        object.__setattr__(self, "breakpoints", xs)
        object.__setattr__(self, "values", ys)

    @classmethod
    def from_pieces(cls, points: Sequence, values: Sequence) -> "FinitePLMap":
        return cls(tuple(points), tuple(values))

    @functools.cached_property
    def domain(self) -> Interval:
        return Interval(self.breakpoints[0], self.breakpoints[-1])

    def __call__(self, x) -> Fraction:
        x = q(x)
        self._check(x)
        xs, ys = self.breakpoints, self.values
        k = min(bisect.bisect_right(xs, x), len(xs) - 1)
        if xs[k - 1] == x:
            return ys[k - 1]
        return ys[k - 1] + (ys[k] - ys[k - 1]) * (x - xs[k - 1]) / (xs[k] - xs[k - 1])

    def breakpoints_between(self, lo, hi):
        xs = self.breakpoints
        return list(xs[bisect.bisect_right(xs, lo):bisect.bisect_left(xs, hi)])

    def pieces_near(self, y):
        xs = self.breakpoints
        return list(zip(xs, xs[1:]))

    def slopes(self, limit: int = 20) -> list[Fraction]:
        xs, ys = self.breakpoints, self.values
        return [(ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k]) for k in range(len(xs) - 1)]


class LadderMap(PLMap):
    kind = "ladder"
    domain = Interval(0, 1)

    def __call__(self, x) -> Fraction:
        x = q(x)
        self._check(x)
        if x == 0 or x == 1:
            return x
        j = _ladder_index_floor(x)
        x0, x1 = s(j), s(j + 1)
        y0, y1 = _ladder_value(j), _ladder_value(j + 1)
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def breakpoints_between(self, lo, hi):
        if lo == 0 and hi == 1:
            return [Fraction(1, 2)]
        if lo == 0:
            # values at breakpoints below hi increase with the index; the top few dominate
            top = _ladder_index_ceil(hi) - 1
            return [s(j) for j in range(top - 3, top + 1) if 0 < s(j) < hi]
        if hi == 1:
            bottom = _ladder_index_floor(lo) + 1
            return [s(j) for j in range(bottom, bottom + 4) if lo < s(j) < 1]
        j0, j1 = _ladder_index_floor(lo) + 1, _ladder_index_ceil(hi) - 1
        return [s(j) for j in range(j0, j1 + 1) if lo < s(j) < hi]

    def image_interval(self, iv: Interval) -> Interval:
        # Breakpoint values s(j-2) (j even) and s(j+2) (j odd) increase with j,
        # so only the outermost breakpoints of a run can be extreme.
        self._check(iv.lo)
        self._check(iv.hi)
        vals = [self(iv.lo), self(iv.hi)]
        if iv.lo == 0 or iv.hi == 1:
            vals += [self(x) for x in self.breakpoints_between(iv.lo, iv.hi)]
        elif iv.lo < iv.hi:
            j0, j1 = _ladder_index_floor(iv.lo) + 1, _ladder_index_ceil(iv.hi) - 1
            if j0 <= j1:
                js = {j0, min(j0 + 1, j1), max(j1 - 1, j0), j1}
                vals += [_ladder_value(j) for j in js]
        return Interval(min(vals), max(vals))

    def pieces_near(self, y):
        if y <= 0 or y >= 1:
            return []
        j = _ladder_index_floor(y)
        return [(s(k), s(k + 1)) for k in range(j - 4, j + 5)]

    def slopes(self, limit: int = 20) -> list[Fraction]:
        return [(_ladder_value(j + 1) - _ladder_value(j)) / (s(j + 1) - s(j))
                for j in range(-2 * limit, 2 * limit + 2)]

    def __repr__(self):
        return "LadderMap()"


LADDER = LadderMap()


def exact_example() -> FinitePLMap:
    """-(2+2x) on [-1,-1/2], 2x on [-1/2,1/2], 2-2x on [1/2,1]."""
    return FinitePLMap((-1, Q(-1, 2), Q(1, 2), 1), (0, -1, 1, 0))


def fully_exact_example() -> FinitePLMap:
    """As above but 3-4x on [1/2,1]."""
    return FinitePLMap((-1, Q(-1, 2), Q(1, 2), 1), (0, -1, 1, -1))


def tent_map() -> FinitePLMap:
    return FinitePLMap((0, Q(1, 2), 1), (0, 1, 0))


# --------------------------------------------------------------------------
# Images and preimages
# --------------------------------------------------------------------------


def _as_union(u) -> IntervalUnion:
    if isinstance(u, IntervalUnion):
        return u
    if isinstance(u, Interval):
        return IntervalUnion([u])
    return IntervalUnion.of(*u)


def pl_image(f: PLMap, I) -> IntervalUnion:
    u = _as_union(I)
    return IntervalUnion(f.image_interval(iv) for iv in u)


def iterate_images(f: PLMap, U, N: int) -> list[IntervalUnion]:
    if N < 1:
        raise ValueError("N must be >= 1")
    out = []
    cur = _as_union(U)
    for _ in range(N):
        nxt = pl_image(f, cur)
        if nxt == cur:
            # forward invariant: every later image is the same union
            out.extend([cur] * (N - len(out)))
            break
        cur = nxt
        out.append(cur)
    return out


def pl_preimage_point(f: PLMap, y) -> frozenset[Fraction]:
    y = q(y)
    if f.kind == "ladder" and y in (0, 1):
        return frozenset({y})
    sols = set()
    for x0, x1 in f.pieces_near(y):
        y0, y1 = f(x0), f(x1)
        if y0 == y1:
            if y == y0:
                sols.update((x0, x1))
            continue
        t = (y - y0) / (y1 - y0)
        if 0 <= t <= 1:
            sols.add(x0 + t * (x1 - x0))
    return frozenset(sols)


# --------------------------------------------------------------------------
# Grid checks
# --------------------------------------------------------------------------


class Grid:
    """Closed cells of width eps covering the domain."""

    def __init__(self, domain: Interval, eps: Fraction):
        eps = q(eps)
        if eps <= 0:
            raise ValueError("eps must be positive")
        n = domain.length / eps
        if n.denominator != 1:
            raise ValueError(f"eps={eps} does not divide the domain length {domain.length}")
        self.domain, self.eps, self.n = domain, eps, int(n)
        self.full = (1 << self.n) - 1

    def cell(self, k: int) -> Interval:
        lo = self.domain.lo + k * self.eps
        return Interval(lo, lo + self.eps)

    def cells(self) -> list[Interval]:
        return [self.cell(k) for k in range(self.n)]

    def hits(self, u: IntervalUnion) -> int:
        """Bitmask of cells meeting the union."""
        m = 0
        lo, e = self.domain.lo, self.eps
        for iv in u:
            a = (iv.lo - lo) / e - 1
            k0 = max(0, -((-a.numerator) // a.denominator))
            b = (iv.hi - lo) / e
            k1 = min(self.n - 1, b.numerator // b.denominator)
            if k0 <= k1:
                m |= ((1 << (k1 - k0 + 1)) - 1) << k0
        return m

    def dense(self, u: IntervalUnion) -> bool:
        return self.hits(u) == self.full

    def point_hits(self, pts: Iterable[Fraction]) -> int:
        return self.hits(IntervalUnion(Interval(p, p) for p in pts))


def invariant_union_search(f: PLMap, grid: Grid, H: int):
    """A proper closed forward-invariant union with interior, grown from a cell."""
    X = IntervalUnion([f.domain])
    for cell in grid.cells():
        A = IntervalUnion([cell])
        for _ in range(H):
            img = pl_image(f, A)
            if A.contains(img):
                if A != X:
                    return cell, A
                break
            A = A | img
    return None


@functools.lru_cache(maxsize=16)
def cell_orbits(f: PLMap, eps: Fraction, H: int) -> tuple[tuple[IntervalUnion, ...], ...]:
    grid = Grid(f.domain, eps)
    return tuple(tuple(iterate_images(f, c, H)) for c in grid.cells())


INTERVAL_PROPERTIES = (PropertyId.TT, PropertyId.TM, PropertyId.LEO, PropertyId.EXACT,
                       PropertyId.FULLY_EXACT, PropertyId.ET)


def check_interval_property(f: PLMap, p: PropertyId, g: GridScale, H: int | None = None) -> Verdict:
    p = PropertyId(p)
    if p not in INTERVAL_PROPERTIES:
        raise ValueError(f"grid checks do not handle {p.value}")
    H = g.horizon if H is None else H
    scale = GridScale(g.eps, H)
    grid = Grid(f.domain, g.eps)
    cells = grid.cells()
    orbits = cell_orbits(f, grid.eps, H)
    X = IntervalUnion([f.domain])

    def fail(summary, **info):
        return Verdict(Status.NO_WITNESS, scale, {"summary": summary, **info})

    if p is PropertyId.TT:
        for c, orb in zip(cells, orbits):
            acc = 0
            for img in orb:
                acc |= grid.hits(img)
            if acc != grid.full:
                found = invariant_union_search(f, grid, H)
                if found:
                    cell, A = found
                    return Verdict(Status.REFUTED, None, {
                        "summary": "proper closed forward-invariant set with interior",
                        "cell": str(cell), "invariant_union": str(A), "image": str(pl_image(f, A))})
                return fail("forward orbit of a cell is not eps-dense", cell=str(c))
        return Verdict(Status.WITNESS, scale, {"summary": "every cell's forward orbit is eps-dense"})

    if p is PropertyId.TM:
        worst = 0
        for c, orb in zip(cells, orbits):
            N = None
            for n in range(H, 0, -1):
                if not grid.dense(orb[n - 1]):
                    break
                N = n
            if N is None:
                return fail("iterate at the horizon is not eps-dense", cell=str(c))
            worst = max(worst, N)
        return Verdict(Status.WITNESS, scale, {
            "summary": "every cell's iterates are eps-dense from some N on", "max_N": worst})

    if p is PropertyId.LEO:
        worst = 0
        for c, orb in zip(cells, orbits):
            N = next((n for n, img in enumerate(orb, 1) if img == X), None)
            if N is None:
                return fail("no iterate covers the domain", cell=str(c))
            worst = max(worst, N)
        return Verdict(Status.WITNESS, scale, {"summary": "every cell eventually covers the domain",
                                               "max_N": worst})

    # pairwise properties
    best = 0
    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            a, b = orbits[i], orbits[j]
            if p is PropertyId.ET:
                acc = 0
                n_hit = None
                for n in range(H):
                    acc |= grid.hits(a[n] & b[n])
                    if acc == grid.full:
                        n_hit = n + 1
                        break
                if n_hit is None:
                    return fail("joint iterates of a cell pair are not eps-dense",
                                cells=[str(cells[i]), str(cells[j])])
            else:
                want_interior = p is PropertyId.FULLY_EXACT
                n_hit = next((n + 1 for n in range(H)
                              if (lambda m: m.has_interior() if want_interior else bool(m))(a[n] & b[n])),
                             None)
                if n_hit is None:
                    what = "intersection with interior" if want_interior else "common point"
                    return fail(f"no {what} for a cell pair", cells=[str(cells[i]), str(cells[j])])
            best = max(best, n_hit)
    label = {PropertyId.ET: "joint iterates eps-dense for every cell pair",
             PropertyId.EXACT: "iterates of every cell pair meet",
             PropertyId.FULLY_EXACT: "iterates of every cell pair overlap in an interval"}[p]
    return Verdict(Status.WITNESS, scale, {"summary": label, "max_n": best})


# --------------------------------------------------------------------------
# Backward orbits
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BackwardOrbit:
    points: frozenset[Fraction]
    depth: int
    saturated: bool
    finest_dyadic_eps: Fraction | None

    def to_dict(self) -> dict:
        return {
            "size": len(self.points),
            "points": [fmt(x) for x in sorted(self.points)[:32]],
            "depth": self.depth,
            "saturated": self.saturated,
            "finest_dyadic_eps": None if self.finest_dyadic_eps is None else fmt(self.finest_dyadic_eps),
        }


def _finest_dyadic(domain: Interval, pts: frozenset[Fraction], max_k: int = 30) -> Fraction | None:
    found = None
    for k in range(0, max_k + 1):
        grid = Grid(domain, domain.length / (1 << k))
        if grid.point_hits(pts) != grid.full:
            break
        found = grid.eps
    return found


def backward_orbit(f: PLMap, x, depth: int, cap: int = UNION_CAP) -> BackwardOrbit:
    if depth < 1:
        raise ValueError("depth must be >= 1")
    x = q(x)
    seen = {x}
    frontier = {x}
    saturated = False
    for _ in range(depth):
        nxt = set()
        for y in frontier:
            nxt |= pl_preimage_point(f, y)
        nxt -= seen
        seen |= nxt
        if len(seen) > cap:
            raise CapExceededError(f"backward orbit exceeded {cap} points")
        if not nxt:
            saturated = True
            break
        frontier = nxt
    pts = frozenset(seen)
    return BackwardOrbit(pts, depth, saturated, _finest_dyadic(f.domain, pts))


def st_refutation(f: PLMap, x, depth: int = 8) -> Verdict | None:
    """A finite preimage-closed set misses some open set, so f is not ST."""
    orb = backward_orbit(f, x, depth)
    if orb.saturated and f.domain.length > 0:
        return Verdict(Status.REFUTED, None, {
            "summary": f"backward orbit of {x} is finite and closed under preimages",
            "point": fmt(q(x)), "orbit": orb.to_dict()})
    return None


def eventually_fixed_dense(f: PLMap, fixed_point, g: GridScale, depth: int) -> Verdict:
    p = q(fixed_point)
    if f(p) != p:
        raise ValueError(f"{p} is not a fixed point")
    orb = backward_orbit(f, p, depth)
    grid = Grid(f.domain, g.eps)
    others = orb.points - {p}
    if grid.point_hits(others) == grid.full:
        return Verdict(Status.WITNESS, g, {
            "summary": "eventually fixed points meet every cell", "points": len(others)})
    return Verdict(Status.NO_WITNESS, g, {
        "summary": "some cell has no eventually fixed point", "points": len(others),
        "saturated": orb.saturated})


# --------------------------------------------------------------------------
# Markov partitions
# --------------------------------------------------------------------------


class NotMarkov(Exception):
    pass


@dataclass(frozen=True)
class MarkovPartition:
    points: tuple[Fraction, ...]
    graph: SftGraph

    @property
    def intervals(self) -> list[Interval]:
        return [Interval(a, b) for a, b in zip(self.points, self.points[1:])]


def markov_partition(f: PLMap, cap: int = 256) -> MarkovPartition:
    """Close the breakpoints under f and code the map by the covering graph."""
    if not isinstance(f, FinitePLMap):
        raise NotMarkov("only finite-piece maps have a computable partition")
    pts = set(f.breakpoints)
    frontier = set(pts)
    while frontier:
        nxt = {f(x) for x in frontier} - pts
        pts |= nxt
        if len(pts) > cap:
            raise NotMarkov(f"breakpoint orbits exceed {cap} points")
        frontier = nxt
    points = tuple(sorted(pts))
    ivs = [Interval(a, b) for a, b in zip(points, points[1:])]
    names = [f"I{k}" for k in range(len(ivs))]
    edges = []
    for i, iv in enumerate(ivs):
        img = f.image_interval(iv)
        edges.extend((names[i], names[j]) for j, jv in enumerate(ivs) if img.contains(jv))
    return MarkovPartition(points, SftGraph.from_names(names, edges, "one"))


def markov_extract(f: PLMap) -> SftGraph | None:
    """The covering graph of the Markov partition, or None if there is none."""
    try:
        return markov_partition(f).graph
    except NotMarkov:
        return None


def is_expanding(f: PLMap) -> bool:
    return all(abs(m) > 1 for m in f.slopes())
