"""Independent brute-force references used by the tests."""

from __future__ import annotations

import functools
import random
from fractions import Fraction

from transitivity.core import EmptySystemError
from transitivity.sft import SftGraph, essentialize


def random_essential_sfts(count: int, seed: int, max_vertices: int = 5, sided: str = "one"):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(1, max_vertices)
        density = rng.choice([0.25, 0.4, 0.6])
        names = [str(i) for i in range(n)]
        edges = [(a, b) for a in names for b in names if rng.random() < density]
        if not edges:
            continue
        try:
            out.append(essentialize(SftGraph.from_names(names, edges, sided)))
        except EmptySystemError:
            continue
    return out


def brute_hits(g: SftGraph, u: str, v: str, n: int) -> bool:
    """Is there a legal word with u at position 0 and v at position n?

    Forward propagation of the set of possible current symbols (as a
    bitmask); in an essential graph every legal word extends to a point.
    """
    idx = {c: i for i, c in enumerate(g.vertices)}
    succ = [0] * len(idx)
    for a, b in g.edges:
        succ[idx[a]] |= 1 << idx[b]
    everything = (1 << len(idx)) - 1
    need = {}
    for i, c in enumerate(u):
        need[i] = 1 << idx[c]
    for i, c in enumerate(v):
        need[n + i] = need.get(n + i, everything) & (1 << idx[c])
    cur = need.get(0, everything)
    for i in range(1, max(len(u), n + len(v))):
        nxt = 0
        for k in range(len(idx)):
            if cur >> k & 1:
                nxt |= succ[k]
        cur = nxt & need.get(i, everything)
        if not cur:
            return False
    return bool(cur)


@functools.lru_cache(maxsize=4096)
def legal_words(g: SftGraph, length: int) -> list[str]:
    """Every path of the given length, by depth-first extension."""
    words = list(g.vertices)
    for _ in range(length - 1):
        words = [w + b for w in words for b in g.vertices if (w[-1], b) in g.edges]
    return words


def random_pl_map(rng: random.Random, pieces: int | None = None, denom: int = 8):
    """Continuous PL self-map of [0, 1] with rational dyadic-ish nodes."""
    k = pieces or rng.randint(1, 5)
    xs = sorted({Fraction(rng.randint(1, denom - 1), denom) for _ in range(k - 1)})
    xs = [Fraction(0), *xs, Fraction(1)]
    ys = [Fraction(rng.randint(0, denom), denom) for _ in xs]
    return xs, ys
