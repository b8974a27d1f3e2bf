"""Shared value types: alphabets, words, hitting-time sets, property ids and verdicts.

Words are stored as Python strings over an *encoded* alphabet: every symbol
name is mapped to a single character, so factor tests, slicing and hashing
stay cheap. Alphabets whose symbol names are already single characters use
the identity encoding.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence


class TransitivityError(Exception):
    """Base class for all errors raised by this package."""

    code = "ERROR"


class EmptySystemError(TransitivityError):
    code = "EMPTY_SYSTEM"


class CapExceededError(TransitivityError):
    code = "CAP_EXCEEDED"


class IllegalWordError(TransitivityError):
    code = "ILLEGAL_WORD"


class NotStronglyConnectedError(TransitivityError):
    code = "NOT_STRONGLY_CONNECTED"


class NonCanonicalError(TransitivityError):
    code = "NON_CANONICAL"


class OutOfDomainError(TransitivityError):
    code = "OUT_OF_DOMAIN"


# --------------------------------------------------------------------------
# Alphabets and words
# --------------------------------------------------------------------------

_PRIVATE_BASE = 0xE000


@dataclass(frozen=True)
class Alphabet:
    """Ordered finite set of symbol names with a one-character encoding."""

    symbols: tuple[str, ...]

    def __post_init__(self):
        if not self.symbols:
            raise ValueError("alphabet must be nonempty")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError(f"duplicate symbols in alphabet {self.symbols!r}")
        for s in self.symbols:
            if not isinstance(s, str) or not s:
                raise ValueError(f"symbol names must be nonempty strings, got {s!r}")

    @classmethod
    def of(cls, symbols: Iterable[str]) -> "Alphabet":
        return cls(tuple(symbols))

    @functools.cached_property
    def simple(self) -> bool:
        """True when every symbol name is a single character (identity encoding)."""
        return all(len(s) == 1 for s in self.symbols)

    @functools.cached_property
    def chars(self) -> tuple[str, ...]:
        if self.simple:
            return self.symbols
        return tuple(chr(_PRIVATE_BASE + i) for i in range(len(self.symbols)))

    def char(self, name: str) -> str:
        try:
            i = self.symbols.index(name)
        except ValueError:
            raise IllegalWordError(f"symbol {name!r} not in alphabet") from None
        return self.chars[i]

    def name(self, ch: str) -> str:
        return self.symbols[self.chars.index(ch)]

    def encode(self, word: str | Sequence[str]) -> str:
        """Encode a word given as a plain string (simple alphabets), a
        whitespace-separated string, or a sequence of symbol names."""
        if isinstance(word, str):
            if self.simple and " " not in word:
                names: Sequence[str] = list(word)
            else:
                names = word.split()
        else:
            names = list(word)
        return "".join(self.char(n) for n in names)

    def decode(self, word: str) -> str:
        if self.simple:
            return word
        return " ".join(self.name(c) for c in word)

    def __len__(self):
        return len(self.symbols)


def word_occurs_in(v: str, w: str) -> bool:
    """True iff ``v`` is a contiguous factor of ``w``."""
    return v in w


# --------------------------------------------------------------------------
# Eventually periodic subsets of the positive integers
# --------------------------------------------------------------------------


class SetClass(str, enum.Enum):
    EMPTY = "EMPTY"
    FINITE_NONEMPTY = "FINITE_NONEMPTY"
    INFINITE_NOT_SYNDETIC = "INFINITE_NOT_SYNDETIC"
    SYNDETIC_NOT_COFINITE = "SYNDETIC_NOT_COFINITE"
    COFINITE = "COFINITE"


@dataclass(frozen=True)
class EventuallyPeriodicSet:
    """A subset S of {1, 2, ...}.

    ``n < threshold`` is a member iff ``transient[n - 1]``; for
    ``n >= threshold`` membership is ``pattern[(n - threshold) % period]``.
    Instances built through :func:`epset` or :func:`epset_from_samples` are
    canonical (minimal period, then minimal threshold).
    """

    threshold: int
    transient: tuple[bool, ...]
    period: int
    pattern: tuple[bool, ...]

    def __post_init__(self):
        if self.threshold < 1 or self.period < 1:
            raise ValueError("threshold and period must be >= 1")
        if len(self.transient) != self.threshold - 1:
            raise ValueError("transient must have threshold - 1 entries")
        if len(self.pattern) != self.period:
            raise ValueError("pattern must have period entries")

    def __contains__(self, n: int) -> bool:
        return epset_member(self, n)

    @property
    def is_canonical(self) -> bool:
        return canonicalize(self) == self

    def members(self, up_to: int) -> list[int]:
        return [n for n in range(1, up_to + 1) if epset_member(self, n)]

    def to_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "transient": [int(b) for b in self.transient],
            "period": self.period,
            "pattern": [int(b) for b in self.pattern],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EventuallyPeriodicSet":
        return cls(d["threshold"], tuple(bool(b) for b in d["transient"]),
                   d["period"], tuple(bool(b) for b in d["pattern"]))

    def describe(self) -> str:
        if not any(self.pattern):
            pts = [n for n in range(1, self.threshold) if self.transient[n - 1]]
            return "{" + ", ".join(map(str, pts)) + "}" if pts else "{}"
        head = [str(n) for n in range(1, self.threshold) if self.transient[n - 1]]
        if self.period == 1:
            tail = f"n >= {self.threshold}"
        else:
            res = [str(self.threshold + r) for r in range(self.period) if self.pattern[r]]
            tail = f"n >= {self.threshold} with n = {'|'.join(res)} mod {self.period}"
        return "{" + ", ".join(head + [tail]) + "}"


def epset_member(s: EventuallyPeriodicSet, n: int) -> bool:
    if n < 1:
        raise ValueError("membership is defined for n >= 1 only")
    if n < s.threshold:
        return s.transient[n - 1]
    return s.pattern[(n - s.threshold) % s.period]


def _minimal_period(pattern: Sequence[bool]) -> int:
    p = len(pattern)
    for d in range(1, p + 1):
        if p % d == 0 and all(pattern[i] == pattern[i % d] for i in range(p)):
            return d
    return p


def canonicalize(s: EventuallyPeriodicSet) -> EventuallyPeriodicSet:
    p = _minimal_period(s.pattern)
    pattern = list(s.pattern[:p])
    m = s.threshold
    transient = list(s.transient)
    # slide the threshold left while the transient agrees with the periodic tail
    while m > 1 and transient[m - 2] == pattern[-1]:
        pattern = [pattern[-1]] + pattern[:-1]
        transient.pop()
        m -= 1
    return EventuallyPeriodicSet(m, tuple(transient), p, tuple(pattern))


def epset(transient: Sequence[bool | int], pattern: Sequence[bool | int]) -> EventuallyPeriodicSet:
    """Canonical set with the given transient bits (n = 1..m-1) and periodic tail."""
    t = tuple(bool(b) for b in transient)
    return canonicalize(EventuallyPeriodicSet(len(t) + 1, t, len(pattern),
                                              tuple(bool(b) for b in pattern)))


def epset_from_samples(bits: Sequence[bool | int], index: int, period: int) -> EventuallyPeriodicSet:
    """Build the canonical set from membership bits for n = 1..len(bits).

    ``index``/``period`` come from cycle detection: ``bits[n] == bits[n + period]``
    for all ``n >= index``. At least ``index + 2 * period - 1`` bits are needed.
    """
    b = [bool(x) for x in bits]
    if index < 1 or period < 1:
        raise ValueError("index and period must be >= 1")
    if len(b) < index + 2 * period - 1:
        raise ValueError(f"need at least {index + 2 * period - 1} samples, got {len(b)}")
    for n in range(index, len(b) - period + 1):
        if b[n - 1] != b[n - 1 + period]:
            raise ValueError(f"samples not periodic from index {index} with period {period} (n={n})")
    return epset(b[: index - 1], b[index - 1: index - 1 + period])


def epset_classify(s: EventuallyPeriodicSet) -> SetClass:
    if not s.is_canonical:
        raise NonCanonicalError("epset_classify requires a canonical set")
    if all(s.pattern):
        return SetClass.COFINITE
    if any(s.pattern):
        return SetClass.SYNDETIC_NOT_COFINITE
    if any(s.transient):
        return SetClass.FINITE_NONEMPTY
    return SetClass.EMPTY


# --------------------------------------------------------------------------
# Properties, scales, verdicts
# --------------------------------------------------------------------------


class PropertyId(str, enum.Enum):
    TT = "TT"
    ST = "ST"
    VST = "VST"
    M = "M"
    WM = "WM"
    ET = "ET"
    SET = "SET"
    SPT = "SPT"
    TM = "TM"
    LEO = "LEO"
    EXACT = "EXACT"
    FULLY_EXACT = "FULLY_EXACT"
    DENSE_PERIODIC = "DENSE_PERIODIC"
    ITER_ALMOST_OPEN = "ITER_ALMOST_OPEN"


TEN_PROPERTIES = tuple(list(PropertyId)[:10])
ALL_PROPERTIES = tuple(PropertyId)


def parse_property(name: str) -> PropertyId:
    try:
        return PropertyId(name.strip().upper())
    except ValueError:
        raise ValueError(f"unknown property {name!r}; expected one of "
                         f"{', '.join(p.value for p in PropertyId)}") from None


class Status(str, enum.Enum):
    PROVED = "PROVED"
    REFUTED = "REFUTED"
    WITNESS = "WITNESS"
    NO_WITNESS = "NO_WITNESS"
    REFUTED_BOUNDED = "REFUTED_BOUNDED"
    UNKNOWN = "UNKNOWN"

    @property
    def is_certificate(self) -> bool:
        return self in (Status.PROVED, Status.REFUTED)

    @property
    def positive(self) -> bool:
        return self in (Status.PROVED, Status.WITNESS)

    @property
    def negative(self) -> bool:
        return self in (Status.REFUTED, Status.REFUTED_BOUNDED)


@dataclass(frozen=True)
class WitnessScale:
    """Finite horizons for bounded quantifier checks on subshifts.

    ell: longest cylinder word; L: tail length standing in for points;
    H: longest connector; K: consecutive lengths demanded by mixing.
    """

    ell: int = 2
    L: int = 24
    H: int = 32
    K: int = 8

    def __post_init__(self):
        for k in ("ell", "L", "H", "K"):
            if getattr(self, k) < 1:
                raise ValueError(f"scale field {k} must be >= 1")

    def to_dict(self) -> dict:
        return {"kind": "witness", "ell": self.ell, "L": self.L, "H": self.H, "K": self.K}

    def __str__(self):
        return f"ell={self.ell},L={self.L},H={self.H},K={self.K}"


@dataclass(frozen=True)
class GridScale:
    """Closed-cell grid of width ``eps`` plus an iteration horizon."""

    eps: Fraction = Fraction(1, 64)
    horizon: int = 40

    def __post_init__(self):
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")

    def to_dict(self) -> dict:
        return {"kind": "grid", "eps": str(self.eps), "horizon": self.horizon}

    def __str__(self):
        return f"eps={self.eps},H={self.horizon}"


@dataclass(frozen=True)
class Bound:
    """A single numeric bound (e.g. connector length or period)."""

    value: int

    def to_dict(self) -> dict:
        return {"kind": "bound", "value": self.value}

    def __str__(self):
        return f"N={self.value}"


Scale = WitnessScale | GridScale | Bound


def scale_from_dict(d: dict | None) -> Scale | None:
    if d is None:
        return None
    kind = d["kind"]
    if kind == "witness":
        return WitnessScale(d["ell"], d["L"], d["H"], d["K"])
    if kind == "grid":
        return GridScale(Fraction(d["eps"]), d["horizon"])
    if kind == "bound":
        return Bound(d["value"])
    raise ValueError(f"unknown scale kind {kind!r}")


@dataclass(frozen=True)
class Provenance:
    """DIRECT, or PROPAGATED from a source property along a lattice rule."""

    kind: str = "DIRECT"
    source: tuple[str, ...] = ()
    rule: str | None = None

    @property
    def direct(self) -> bool:
        return self.kind == "DIRECT"

    def to_dict(self) -> dict:
        if self.direct:
            return {"kind": "DIRECT"}
        return {"kind": self.kind, "source": list(self.source), "rule": self.rule}

    @classmethod
    def from_dict(cls, d: dict) -> "Provenance":
        if d["kind"] == "DIRECT":
            return cls()
        return cls(d["kind"], tuple(d["source"]), d["rule"])


DIRECT = Provenance()


@dataclass(frozen=True)
class Verdict:
    status: Status
    scale: Scale | None = None
    evidence: dict[str, Any] = field(default_factory=dict)
    provenance: Provenance = DIRECT

    def __post_init__(self):
        if self.status in (Status.WITNESS, Status.NO_WITNESS, Status.REFUTED_BOUNDED) and self.scale is None:
            raise ValueError(f"{self.status.value} verdicts must carry a scale")

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "scale": self.scale.to_dict() if self.scale is not None else None,
            "evidence": self.evidence,
            "provenance": self.provenance.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Verdict":
        return cls(Status(d["status"]), scale_from_dict(d["scale"]), d["evidence"],
                   Provenance.from_dict(d["provenance"]))

    def summary(self) -> str:
        return self.evidence.get("summary", "")


def proved(summary: str, **evidence) -> Verdict:
    return Verdict(Status.PROVED, evidence={"summary": summary, **evidence})


def refuted(summary: str, **evidence) -> Verdict:
    return Verdict(Status.REFUTED, evidence={"summary": summary, **evidence})


def unknown(summary: str, **evidence) -> Verdict:
    return Verdict(Status.UNKNOWN, evidence={"summary": summary, **evidence})
