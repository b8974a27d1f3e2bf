"""Language-oracle subshifts and finite-horizon property checks.

A subshift is given by a membership predicate on its factor language. The
checkers below evaluate the word-combinatorial characterizations of the
transitivity properties with every quantifier bounded by a
:class:`~transitivity.core.WitnessScale`:

* "for all v in the language" ranges over legal words of length <= ell,
* "for all points x" ranges over legal words of length L,
* connectors ``a`` have length <= H.

Searches are done on *follower classes*: an oracle may report a
``right_state`` (words with equal right states have the same legal right
extensions) and a ``left_state`` (same for left extensions). Deduplicating by
these keys leaves every bounded quantifier's answer unchanged while keeping
searches polynomial for SFTs, the gap shift and the zero-insertion lift.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable

import numpy as np

from .core import (
    Alphabet,
    Bound,
    CapExceededError,
    PropertyId,
    Status,
    Verdict,
    WitnessScale,
    unknown,
)
from .sft import SftGraph, essentialize

DEFAULT_CAP = 200_000


# --------------------------------------------------------------------------
# Oracles
# --------------------------------------------------------------------------


class LanguageOracle:
    """Factor-language membership for a one-sided subshift."""

    descriptor = "oracle"

    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet
        self._legal = functools.lru_cache(maxsize=1 << 20)(self._is_legal)

    def _is_legal(self, w: str) -> bool:
        raise NotImplementedError

    def connectors(self, H: int, cap: int = DEFAULT_CAP) -> "Connectors":
        """Shared connector tables for horizon H."""
        cache = self.__dict__.setdefault("_connector_cache", {})
        if (H, cap) not in cache:
            cache[(H, cap)] = Connectors(self, H, cap)
        return cache[(H, cap)]

    def tails(self, length: int, prefix: str = "", cap: int = DEFAULT_CAP) -> list[str]:
        """Memoized :meth:`x_classes`."""
        cache = self.__dict__.setdefault("_tail_cache", {})
        key = (length, prefix, cap)
        if key not in cache:
            cache[key] = self.x_classes(length, prefix, cap)
        return cache[key]

    def is_legal(self, w: str) -> bool:
        return self._legal(w)

    def right_state(self, w: str) -> Hashable:
        return w

    def left_state(self, w: str) -> Hashable:
        return w

    def x_classes(self, length: int, prefix: str = "", cap: int = DEFAULT_CAP) -> list[str]:
        """One legal word of the given length per left-state class, all starting with ``prefix``."""
        reps: dict[Hashable, str] = {}
        for w in _dfs_words(self, length, prefix, cap):
            reps.setdefault(self.left_state(w), w)
        return list(reps.values())

    @property
    def chars(self) -> tuple[str, ...]:
        return self.alphabet.chars

    def __repr__(self):
        return f"<{type(self).__name__} {self.descriptor}>"


def _dfs_words(o: LanguageOracle, length: int, prefix: str = "", cap: int = DEFAULT_CAP):
    if len(prefix) > length:
        return
    if prefix and not o.is_legal(prefix):
        return
    count = 0
    stack = [prefix]
    while stack:
        w = stack.pop()
        if len(w) == length:
            count += 1
            if count > cap:
                raise CapExceededError(f"more than {cap} legal words of length {length}")
            yield w
            continue
        # reversed so that the lexicographically first child is popped first
        for c in reversed(o.chars):
            if o.is_legal(w + c):
                stack.append(w + c)


def enumerate_words(o: LanguageOracle, length: int, cap: int = DEFAULT_CAP) -> list[str]:
    """All legal words of exactly ``length`` symbols in lexicographic order."""
    if length < 1:
        raise ValueError("length must be >= 1")
    return list(_dfs_words(o, length, "", cap))


class SftOracle(LanguageOracle):
    """The language of a vertex shift; follower classes are last/first vertices."""

    def __init__(self, g: SftGraph):
        g = essentialize(g)
        super().__init__(g.alphabet)
        self.graph = g
        self.descriptor = "sft"

    def _is_legal(self, w):
        return self.graph.is_legal(w)

    def right_state(self, w):
        return w[-1:]

    def left_state(self, w):
        return w[:1]

    def x_classes(self, length, prefix="", cap=DEFAULT_CAP):
        starts = [prefix] if prefix else list(self.chars)
        out = []
        for s in starts:
            if not self.is_legal(s):
                continue
            w = s
            while len(w) < length:
                w += self.graph.successors(w[-1])[0]
            out.append(w[:length] if len(s) <= length else w)
        return out


@dataclass(frozen=True)
class Substitution:
    """Letter-to-word rules over an alphabet (words encoded)."""

    alphabet: Alphabet
    rules: tuple[tuple[str, str], ...]

    @classmethod
    def from_names(cls, rules: dict[str, str | list[str]]) -> "Substitution":
        alpha = Alphabet.of(rules.keys())
        return cls(alpha, tuple((alpha.char(k), alpha.encode(v)) for k, v in rules.items()))

    def __post_init__(self):
        for a, img in self.rules:
            if not img:
                raise ValueError(f"rule for {a!r} has an empty image")

    @property
    def table(self) -> dict[str, str]:
        return dict(self.rules)

    def apply(self, w: str) -> str:
        t = self.table
        return "".join(t[c] for c in w)

    def iterate(self, w: str, k: int) -> str:
        for _ in range(k):
            w = self.apply(w)
        return w

    def incidence(self) -> np.ndarray:
        chars = self.alphabet.chars
        m = np.zeros((len(chars), len(chars)), dtype=np.int64)
        for i, a in enumerate(chars):
            img = self.table[a]
            for j, b in enumerate(chars):
                m[i, j] = img.count(b)
        return m


def substitution_primitive(s: Substitution) -> bool:
    """Some power (up to |A|^2) of the incidence matrix is entrywise positive."""
    m = s.incidence() > 0
    n = len(s.alphabet)
    cur = m.copy()
    for _ in range(n * n):
        if cur.all():
            return True
        cur = (cur.astype(np.int64) @ m.astype(np.int64)) > 0
    return bool(cur.all())


class SubstitutionOracle(LanguageOracle):
    """Factors of the substitution subshift.

    Length-n factors are read off s^k(bc) for the legal two-letter words bc,
    with k large enough that every s^k-block has at least n - 1 letters.
    """

    def __init__(self, s: Substitution, label: str = "substitution"):
        super().__init__(s.alphabet)
        self.substitution = s
        self.descriptor = label
        self._two = self._two_letter_words()
        self._factors: dict[int, frozenset[str]] = {}

    def _two_letter_words(self) -> frozenset[str]:
        s = self.substitution
        found = set()
        for a in s.alphabet.chars:
            img = s.apply(a)
            found |= {img[i:i + 2] for i in range(len(img) - 1)}
        frontier = set(found)
        while frontier:
            new = set()
            for w in frontier:
                img = s.apply(w)
                new |= {img[i:i + 2] for i in range(len(img) - 1)}
            frontier = new - found
            found |= new
        return frozenset(found)

    def factors(self, n: int) -> frozenset[str]:
        if n not in self._factors:
            s = self.substitution
            k = 0
            while min(len(s.iterate(a, k)) for a in s.alphabet.chars) < max(n - 1, 1):
                k += 1
                if k > 64:
                    raise CapExceededError("substitution blocks do not grow")
            out = set()
            for bc in self._two:
                img = s.iterate(bc, k)
                out |= {img[i:i + n] for i in range(len(img) - n + 1)}
            if n == 1:
                out |= {c for bc in self._two for c in bc}
            self._factors[n] = frozenset(out)
        return self._factors[n]

    def _is_legal(self, w):
        return not w or w in self.factors(len(w))

    def x_classes(self, length, prefix="", cap=DEFAULT_CAP):
        return sorted(w for w in self.factors(length) if w.startswith(prefix))


@dataclass(frozen=True)
class GapShiftRule:
    """Allowed flanked 0-run lengths: b, b^2, b^3, ..."""

    base: int = 3

    def __post_init__(self):
        if self.base < 2:
            raise ValueError("gap shift base must be >= 2")

    def allowed(self, run: int) -> bool:
        if run < self.base:
            return False
        while run % self.base == 0:
            run //= self.base
        return run == 1


class GapShiftOracle(LanguageOracle):
    """Binary words whose 0-runs flanked by 1s on both sides have length b^n, n >= 1."""

    def __init__(self, base: int = 3):
        super().__init__(Alphabet(("0", "1")))
        self.rule = GapShiftRule(base)
        self.descriptor = f"gap_shift(b={base})"

    def _is_legal(self, w):
        if any(c not in "01" for c in w):
            return False
        first, last = w.find("1"), w.rfind("1")
        if first == last:
            return True
        return all(self.rule.allowed(len(r)) for r in w[first + 1:last].split("1") if r)

    def right_state(self, w):
        if "1" not in w:
            return ("z",)
        return ("r", len(w) - 1 - w.rfind("1"))

    def left_state(self, w):
        if "1" not in w:
            return ("z",)
        return ("l", w.find("1"))

    def x_classes(self, length, prefix="", cap=DEFAULT_CAP):
        if prefix and not self.is_legal(prefix):
            return []
        if "1" in prefix:
            return [prefix + "0" * (length - len(prefix))]
        out = ["0" * length]
        for k in range(len(prefix), length):
            out.append("0" * k + "1" + "0" * (length - k - 1))
        return out


class LindenstraussOracle(LanguageOracle):
    """Words over {0,1,2} without "00" whose 0-deleted image lies in a base language."""

    def __init__(self, base: SubstitutionOracle):
        alpha = Alphabet(("0",) + tuple(base.alphabet.symbols))
        if "0" in base.alphabet.symbols:
            raise ValueError("base alphabet must not contain the symbol 0")
        super().__init__(alpha)
        self.base = base
        self.descriptor = f"lindenstrauss({base.descriptor})"

    @staticmethod
    def hat(w: str) -> str:
        return w.replace("0", "")

    def _is_legal(self, w):
        if "00" in w:
            return False
        return self.base.is_legal(self.hat(w))

    def right_state(self, w):
        return (self.hat(w), w.endswith("0"))

    def left_state(self, w):
        return (self.hat(w), w.startswith("0"))

    def x_classes(self, length, prefix="", cap=DEFAULT_CAP):
        if prefix:
            return self._prefixed_classes(length, prefix)
        return [x for c in self.chars for x in self._prefixed_classes(length, c)]

    def _prefixed_classes(self, length: int, prefix: str) -> list[str]:
        # one tail per base word extending hat(prefix); zeros fill free slots greedily
        if len(prefix) > length or not self.is_legal(prefix):
            return []
        hw, rest = self.hat(prefix), length - len(prefix)
        lead_ok = not prefix.endswith("0")
        out = []
        for m in range(rest + 1):
            zeros = rest - m
            slots = m + lead_ok
            if zeros > slots:
                continue
            hats = [h for h in self.base.factors(len(hw) + m) if h.startswith(hw)] if len(hw) + m else [""]
            for h in sorted(hats):
                z = zeros
                body = ""
                if lead_ok and z:
                    body, z = "0", z - 1
                for c in h[len(hw):]:
                    body += c
                    if z:
                        body, z = body + "0", z - 1
                out.append(prefix + body)
        return out

    def recurrence_bound(self, u_hat: str, limit: int = 4096) -> int:
        """Least M such that every base word of length M + |u_hat| - 1 contains u_hat."""
        for m in range(1, limit):
            if all(u_hat in w for w in self.base.factors(m + len(u_hat) - 1)):
                return m
        raise CapExceededError("recurrence bound not found")


class ProductOracle(LanguageOracle):
    """Pair words legal iff both coordinate projections are legal."""

    def __init__(self, o1: LanguageOracle, o2: LanguageOracle):
        pairs = list(itertools.product(o1.chars, o2.chars))
        names = [f"({o1.alphabet.name(a)},{o2.alphabet.name(b)})" for a, b in pairs]
        alpha = Alphabet.of(names)
        super().__init__(alpha)
        self.factors_ = (o1, o2)
        self._split = {alpha.chars[i]: p for i, p in enumerate(pairs)}
        self._join = {p: alpha.chars[i] for i, p in enumerate(pairs)}
        self.descriptor = f"product({o1.descriptor},{o2.descriptor})"

    def project(self, w: str) -> tuple[str, str]:
        a = "".join(self._split[c][0] for c in w)
        b = "".join(self._split[c][1] for c in w)
        return a, b

    def pair(self, a: str, b: str) -> str:
        return "".join(self._join[p] for p in zip(a, b))

    def _is_legal(self, w):
        if any(c not in self._split for c in w):
            return False
        a, b = self.project(w)
        return self.factors_[0].is_legal(a) and self.factors_[1].is_legal(b)

    def right_state(self, w):
        a, b = self.project(w)
        return (self.factors_[0].right_state(a), self.factors_[1].right_state(b))

    def left_state(self, w):
        a, b = self.project(w)
        return (self.factors_[0].left_state(a), self.factors_[1].left_state(b))

    def x_classes(self, length, prefix="", cap=DEFAULT_CAP):
        pa, pb = self.project(prefix)
        xa = self.factors_[0].x_classes(length, pa, cap)
        xb = self.factors_[1].x_classes(length, pb, cap)
        if len(xa) * len(xb) > cap:
            raise CapExceededError("too many product tail classes")
        return [self.pair(a, b) for a in xa for b in xb]


def product_oracle(o1: LanguageOracle, o2: LanguageOracle) -> ProductOracle:
    return ProductOracle(o1, o2)


class PredicateOracle(LanguageOracle):
    """Wrap an arbitrary factor-closed predicate."""

    def __init__(self, alphabet: Alphabet, predicate: Callable[[str], bool], label: str = "predicate"):
        super().__init__(alphabet)
        self._pred = predicate
        self.descriptor = label

    def _is_legal(self, w):
        return self._pred(w)


def thue_morse() -> Substitution:
    return Substitution.from_names({"1": "12", "2": "21"})


def fibonacci() -> Substitution:
    return Substitution.from_names({"a": "ab", "b": "a"})


# --------------------------------------------------------------------------
# Connector search
# --------------------------------------------------------------------------


class Connectors:
    """Bitmasks of connector lengths: bit t of mask(v, x) is set iff some
    word a with |a| = t makes v a x legal (0 <= t <= H)."""

    def __init__(self, o: LanguageOracle, H: int, cap: int = DEFAULT_CAP):
        self.o, self.H, self.cap = o, H, cap
        self._front: dict[Hashable, list[list[str]]] = {}
        self._mask: dict[tuple[Hashable, Hashable], int] = {}

    def frontier(self, v: str) -> list[list[str]]:
        key = self.o.right_state(v)
        if key not in self._front:
            o = self.o
            layers = [[v]]
            cur = {key: v}
            total = 1
            for _ in range(self.H):
                nxt: dict[Hashable, str] = {}
                for r in cur.values():
                    for c in o.chars:
                        w = r + c
                        if o.is_legal(w):
                            nxt.setdefault(o.right_state(w), w)
                total += len(nxt)
                if total > self.cap:
                    raise CapExceededError(f"connector frontier exceeded {self.cap} classes")
                cur = nxt
                layers.append(list(cur.values()))
            self._front[key] = layers
        return self._front[key]

    def mask(self, v: str, x: str) -> int:
        key = (self.o.right_state(v), self.o.left_state(x))
        m = self._mask.get(key)
        if m is None:
            m = 0
            legal = self.o.is_legal
            for t, layer in enumerate(self.frontier(v)):
                if any(legal(r + x) for r in layer):
                    m |= 1 << t
            self._mask[key] = m
        return m

    def witness(self, v: str, x: str, t: int) -> str | None:
        """A connector of length t for v . x, or None."""
        for r in self.frontier(v)[t]:
            if self.o.is_legal(r + x):
                return r[len(v):]
        return None


def lowest_bit(m: int) -> int:
    return (m & -m).bit_length() - 1


def has_run(m: int, k: int, lo: int = 1) -> int | None:
    """Start of the first run of k consecutive set bits at positions >= lo."""
    run = 0
    t = lo
    m >>= lo
    while m:
        if m & 1:
            run += 1
            if run == k:
                return t - k + 1
        else:
            run = 0
        m >>= 1
        t += 1
    return None


# --------------------------------------------------------------------------
# Witness checks
# --------------------------------------------------------------------------


def words_upto(o: LanguageOracle, ell: int, cap: int = DEFAULT_CAP) -> list[str]:
    out = []
    for n in range(1, ell + 1):
        out.extend(enumerate_words(o, n, cap))
    return out


def dedupe(words: Iterable[str], key) -> list[str]:
    seen: dict[Hashable, str] = {}
    for w in words:
        seen.setdefault(key(w), w)
    return list(seen.values())


def avoiding_word(o: LanguageOracle, v: str, length: int, cap: int = DEFAULT_CAP) -> str | None:
    """A legal word of the given length in which v does not occur, or None."""
    k = len(v) - 1

    def state(w):
        return (o.right_state(w), w[-k:] if k else "")

    layer = {state(c): c for c in o.chars if o.is_legal(c) and v not in c}
    total = len(layer)
    for _ in range(length - 1):
        nxt = {}
        for r in layer.values():
            for c in o.chars:
                w = r + c
                if o.is_legal(w) and not w.endswith(v):
                    nxt.setdefault(state(w), w)
        total += len(nxt)
        if total > cap:
            raise CapExceededError("avoidance search exceeded cap")
        layer = nxt
        if not layer:
            return None
    return min(layer.values()) if layer else None


class _Fail(Exception):
    def __init__(self, summary, **info):
        super().__init__(summary)
        self.summary = summary
        self.info = info


def witness_check(o: LanguageOracle, p: PropertyId, s: WitnessScale,
                  cap: int = DEFAULT_CAP) -> Verdict:
    """Bounded-quantifier check of property ``p``; returns WITNESS or NO_WITNESS."""
    p = PropertyId(p)
    if p not in (*list(PropertyId)[:10], PropertyId.EXACT):
        raise ValueError(f"witness_check does not handle {p.value}")
    dec = o.alphabet.decode
    con = o.connectors(s.H, cap)
    words = words_upto(o, s.ell, cap)
    by_len = {n: [w for w in words if len(w) == n] for n in range(1, s.ell + 1)}
    v_single = dedupe(words, o.right_state)
    v_len = {n: dedupe(ws, o.right_state) for n, ws in by_len.items()}
    w_reps = dedupe(words, o.left_state)

    def xs():
        return o.tails(s.L, "", cap)

    def obligations(n):
        return {"obligations": n}

    evidence: dict = {}
    try:
        if p is PropertyId.TT:
            n = 0
            for v in v_single:
                for w in w_reps:
                    n += 1
                    if not con.mask(v, w):
                        raise _Fail("no connector v.a.w", v=dec(v), w=dec(w))
            evidence = {"summary": "every word pair joined by a connector", **obligations(n)}
        elif p in (PropertyId.ST, PropertyId.VST):
            n, longest = 0, 0
            for v in v_single:
                for x in xs():
                    n += 1
                    m = con.mask(v, x)
                    if not m:
                        raise _Fail("no connector v.a.x", v=dec(v), x=dec(x))
                    longest = max(longest, lowest_bit(m))
            evidence = {"summary": "every word reaches every tail", "max_min_connector": longest,
                        **obligations(n)}
        elif p is PropertyId.M:
            n = 0
            for v in words:
                n += 1
                y = avoiding_word(o, v, s.L, cap)
                if y is not None:
                    raise _Fail("word absent from a tail", v=dec(v), x=dec(y))
            evidence = {"summary": "every short word occurs in every tail", **obligations(n)}
        elif p is PropertyId.WM:
            n = 0
            for ln, vs in v_len.items():
                for w in w_reps:
                    masks = {}
                    for v in vs:
                        masks.setdefault(con.mask(v, w), v)
                    for (m1, v1), (m2, v2) in itertools.combinations_with_replacement(masks.items(), 2):
                        n += 1
                        if not m1 & m2:
                            raise _Fail("no equal-length connectors", v1=dec(v1), v2=dec(v2), w=dec(w))
            evidence = {"summary": "equal-length connectors for all word pairs", **obligations(n)}
        elif p is PropertyId.EXACT:
            n = 0
            tails = xs()
            for ln, vs in v_len.items():
                for v1, v2 in itertools.combinations_with_replacement(vs, 2):
                    n += 1
                    if not any(con.mask(v1, x) & con.mask(v2, x) for x in tails):
                        raise _Fail("no common tail", v1=dec(v1), v2=dec(v2))
            evidence = {"summary": "every equal-length pair shares a tail", **obligations(n)}
        elif p is PropertyId.ET:
            n = 0
            for ln, vs in v_len.items():
                for w in words:
                    if len(w) > s.L:
                        continue
                    tails = o.tails(s.L, w, cap)
                    for v1, v2 in itertools.combinations_with_replacement(vs, 2):
                        n += 1
                        if not any(con.mask(v1, x) & con.mask(v2, x) for x in tails):
                            raise _Fail("no common tail through w", v1=dec(v1), v2=dec(v2), w=dec(w))
            evidence = {"summary": "every equal-length pair shares a tail through every word",
                        **obligations(n)}
        elif p is PropertyId.SET:
            n = 0
            tails = xs()
            for ln, vs in v_len.items():
                for x in tails:
                    masks = {}
                    for v in vs:
                        masks.setdefault(con.mask(v, x), v)
                    for (m1, v1), (m2, v2) in itertools.combinations_with_replacement(masks.items(), 2):
                        n += 1
                        if not m1 & m2:
                            raise _Fail("no equal-length connectors to tail",
                                        v1=dec(v1), v2=dec(v2), x=dec(x))
            evidence = {"summary": "equal-length connectors to every tail", **obligations(n)}
        elif p is PropertyId.SPT:
            n = 0
            tails = xs()
            for ln, vs in v_len.items():
                masks: dict[int, tuple[str, str]] = {}
                for v in vs:
                    for x in tails:
                        masks.setdefault(con.mask(v, x), (v, x))
                for k in (2, 3):
                    for combo in itertools.combinations_with_replacement(masks.items(), k):
                        n += 1
                        acc = -1
                        for m, _ in combo:
                            acc &= m
                        if not acc:
                            raise _Fail(f"no common connector length for {k} word/tail pairs",
                                        pairs=[[dec(v), dec(x)] for _, (v, x) in combo])
            evidence = {"summary": "common connector lengths for pairs and triples", **obligations(n)}
        elif p is PropertyId.TM:
            n = 0
            windows = {}
            if s.K > s.H:
                raise _Fail("horizon H shorter than the demanded run K")
            for v in v_single:
                for w in w_reps:
                    n += 1
                    start = has_run(con.mask(v, w), s.K, 1)
                    if start is None:
                        raise _Fail(f"no {s.K} consecutive connector lengths", v=dec(v), w=dec(w))
                    windows[f"{dec(v)}|{dec(w)}"] = start
            evidence = {"summary": f"{s.K} consecutive connector lengths for every pair",
                        "max_window_start": max(windows.values()), **obligations(n)}
        elif p is PropertyId.LEO:
            uniform = {}
            tails = xs()
            for v in v_single:
                acc = (1 << (s.H + 1)) - 1
                for x in tails:
                    acc &= con.mask(v, x)
                    if not acc:
                        raise _Fail("no uniform connector length", v=dec(v))
                uniform[dec(v)] = lowest_bit(acc)
            evidence = {"summary": "uniform connector length for every word",
                        "uniform_lengths": uniform, **obligations(len(uniform) * len(tails))}
    except _Fail as f:
        return Verdict(Status.NO_WITNESS, s, {"summary": f.summary, **f.info})
    return Verdict(Status.WITNESS, s, evidence)


def refute_vst_bound(o: LanguageOracle, v: str, N: int, L: int, cap: int = DEFAULT_CAP) -> Verdict:
    """Look for a tail y of length L that no connector of length <= N joins to v."""
    if not o.is_legal(v):
        raise ValueError("v must be legal")
    con = o.connectors(N, cap)
    tails = o.tails(L, "", cap)
    for y in tails:
        if not con.mask(v, y):
            return Verdict(Status.REFUTED_BOUNDED, Bound(N), {
                "summary": f"tail needs a connector longer than {N}",
                "v": o.alphabet.decode(v), "y": o.alphabet.decode(y), "L": L})
    return unknown(f"every tail of length {L} admits a connector of length <= {N}",
                   v=o.alphabet.decode(v), N=N, L=L, tails_checked=len(tails))


def _primitive_word(w: str) -> bool:
    n = len(w)
    return not any(n % d == 0 and w == w[:d] * (n // d) for d in range(1, n))


def periodic_word_scan(o: LanguageOracle, P: int, K: int, cap: int = DEFAULT_CAP) -> Verdict:
    """Test w^K for every primitive legal word with |w| <= P."""
    if P < 1 or K < 1:
        raise ValueError("P and K must be >= 1")
    checked = 0
    for n in range(1, P + 1):
        for w in _dfs_words(o, n, "", cap):
            if not _primitive_word(w):
                continue
            checked += 1
            if o.is_legal(w * K):
                return Verdict(Status.WITNESS, Bound(K), {
                    "summary": f"w^{K} is legal", "w": o.alphabet.decode(w), "P": P, "K": K})
    return Verdict(Status.REFUTED_BOUNDED, Bound(P), {
        "summary": f"no periodic point of period <= {P}", "words_checked": checked, "P": P, "K": K})
