from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from transitivity.core import (
    Alphabet,
    Bound,
    EventuallyPeriodicSet,
    GridScale,
    IllegalWordError,
    NonCanonicalError,
    PropertyId,
    Provenance,
    SetClass,
    Status,
    Verdict,
    WitnessScale,
    canonicalize,
    epset,
    epset_classify,
    epset_from_samples,
    parse_property,
    scale_from_dict,
)


def test_alphabet_roundtrip_simple():
    a = Alphabet.of("01")
    assert a.simple
    assert a.encode("0110") == "0110"
    assert a.decode("0110") == "0110"


def test_alphabet_multichar_names():
    a = Alphabet.of(["(0,1)", "(1,0)"])
    assert not a.simple
    w = a.encode(["(0,1)", "(1,0)", "(0,1)"])
    assert len(w) == 3
    assert a.decode(w) == "(0,1) (1,0) (0,1)"
    assert a.encode("(0,1) (1,0)") == w[:2]


def test_alphabet_rejects_bad_input():
    with pytest.raises(ValueError):
        Alphabet.of([])
    with pytest.raises(ValueError):
        Alphabet.of("00")
    with pytest.raises(IllegalWordError):
        Alphabet.of("01").encode("012")


bits = st.lists(st.booleans(), max_size=8)
patterns = st.lists(st.booleans(), min_size=1, max_size=6)


@given(bits, patterns)
def test_epset_canonical_preserves_membership(transient, pattern):
    raw = EventuallyPeriodicSet(len(transient) + 1, tuple(transient), len(pattern), tuple(pattern))
    c = canonicalize(raw)
    assert c.is_canonical
    assert c.members(60) == raw.members(60)
    assert c.period <= raw.period and c.threshold <= raw.threshold


@given(bits, patterns, bits, patterns)
def test_epset_canonical_form_is_unique(t1, p1, t2, p2):
    a, b = epset(t1, p1), epset(t2, p2)
    same = a.members(120) == b.members(120)
    assert same == (a == b)


@given(bits, patterns)
def test_epset_dict_roundtrip(transient, pattern):
    s = epset(transient, pattern)
    assert EventuallyPeriodicSet.from_dict(s.to_dict()) == s


def test_epset_classify_cases():
    assert epset_classify(epset([], [1])) is SetClass.COFINITE
    assert epset_classify(epset([0, 0, 1], [1])) is SetClass.COFINITE
    assert epset_classify(epset([], [0, 1])) is SetClass.SYNDETIC_NOT_COFINITE
    assert epset_classify(epset([1, 0, 1], [0])) is SetClass.FINITE_NONEMPTY
    assert epset_classify(epset([], [0])) is SetClass.EMPTY


def test_epset_classify_requires_canonical():
    raw = EventuallyPeriodicSet(1, (), 2, (True, True))
    with pytest.raises(NonCanonicalError):
        epset_classify(raw)


def test_epset_from_samples_and_describe():
    s = epset_from_samples([0, 1, 0, 1, 0, 1, 0, 1], 1, 2)
    assert s.members(8) == [2, 4, 6, 8]
    assert s.describe() == "{n >= 1 with n = 2 mod 2}"
    with pytest.raises(ValueError):
        epset_from_samples([0, 1, 1, 1], 1, 2)
    with pytest.raises(ValueError):
        epset_from_samples([0, 1], 1, 2)


def test_epset_membership_domain():
    with pytest.raises(ValueError):
        0 in epset([], [1])


def test_parse_property_accepts_aliases():
    assert parse_property("tm") is PropertyId.TM
    assert parse_property("FULLY_EXACT") is PropertyId.FULLY_EXACT
    with pytest.raises(ValueError):
        parse_property("nonsense")


def test_status_polarity():
    assert Status.PROVED.is_certificate and Status.REFUTED.is_certificate
    assert not Status.WITNESS.is_certificate
    assert Status.WITNESS.positive and Status.REFUTED_BOUNDED.negative
    assert not Status.NO_WITNESS.negative and not Status.UNKNOWN.positive


@pytest.mark.parametrize("scale", [WitnessScale(3, 10, 12, 4), GridScale(Fraction(1, 128), 7), Bound(5)])
def test_scale_roundtrip(scale):
    assert scale_from_dict(scale.to_dict()) == scale


def test_scale_validation():
    with pytest.raises(ValueError):
        WitnessScale(ell=0)
    with pytest.raises(ValueError):
        GridScale(Fraction(0))


def test_verdict_roundtrip_and_scale_requirement():
    v = Verdict(Status.WITNESS, WitnessScale(), {"summary": "ok"},
                Provenance("PROPAGATED", ("LEO",), "E01"))
    assert Verdict.from_dict(v.to_dict()) == v
    with pytest.raises(ValueError):
        Verdict(Status.NO_WITNESS)
