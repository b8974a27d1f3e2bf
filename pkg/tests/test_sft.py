import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from transitivity.core import EmptySystemError, IllegalWordError, PropertyId as P, SetClass, Status, epset_classify
from transitivity.sft import (
    SftGraph,
    build_product,
    decide_property,
    essentialize,
    exact_pairs_reach_diagonal,
    graph_period,
    hitting_set,
    higher_block_recode,
    is_essential,
    is_primitive,
)
from transitivity.core import Alphabet

from .oracles import brute_hits, legal_words, random_essential_sfts

GOLDEN = SftGraph.from_names("01", [("0", "0"), ("0", "1"), ("1", "0")])
CYCLE2 = SftGraph.from_names("01", [("0", "1"), ("1", "0")])
FULL2 = SftGraph.from_names("01", [(a, b) for a in "01" for b in "01"])


def _reach_matrix(g):
    # Warshall closure, independent of networkx
    idx = {v: i for i, v in enumerate(g.vertices)}
    n = len(idx)
    r = np.zeros((n, n), dtype=bool)
    for a, b in g.edges:
        r[idx[a], idx[b]] = True
    for k in range(n):
        r |= np.outer(r[:, k], r[k, :])
    return r


def _primitive_by_powers(g):
    idx = {v: i for i, v in enumerate(g.vertices)}
    n = len(idx)
    a = np.zeros((n, n), dtype=np.int64)
    for x, y in g.edges:
        a[idx[x], idx[y]] = 1
    m = np.eye(n, dtype=np.int64)
    for _ in range((n - 1) ** 2 + 1):
        m = np.minimum(m @ a, 1)
    return bool(m.all())


def test_essentialize_prunes_dead_ends():
    g = SftGraph.from_names("012", [("0", "0"), ("0", "1"), ("2", "0")])
    e = essentialize(g)
    assert e.vertices == ("0",)
    assert is_essential(e) and not is_essential(g)


def test_essentialize_empty_raises():
    with pytest.raises(EmptySystemError):
        essentialize(SftGraph.from_names("01", [("0", "1")]))


def test_period_and_primitivity():
    assert graph_period(CYCLE2) == 2 and not is_primitive(CYCLE2)
    assert graph_period(GOLDEN) == 1 and is_primitive(GOLDEN)


def test_hitting_set_golden_mean():
    s = hitting_set(GOLDEN, "1", "1")
    assert s.members(6) == [2, 3, 4, 5, 6]
    assert epset_classify(s) is SetClass.COFINITE


def test_hitting_set_cycle_is_syndetic_not_cofinite():
    s = hitting_set(CYCLE2, "0", "0")
    assert s.members(7) == [2, 4, 6]
    assert epset_classify(s) is SetClass.SYNDETIC_NOT_COFINITE


def test_hitting_set_overlap_region():
    # u = 010 forces position 2 to be 0; v = 1 at n=1 is compatible, at n=2 not
    s = hitting_set(GOLDEN, "010", "1")
    assert 1 in s and 2 not in s and 3 in s


def test_hitting_set_rejects_illegal_word():
    with pytest.raises(IllegalWordError):
        hitting_set(GOLDEN, "11", "0")


@pytest.mark.parametrize("g", random_essential_sfts(30, seed=11), ids=lambda g: str(sorted(g.edges)))
def test_hitting_set_matches_brute_force(g):
    words = legal_words(g, 1) + legal_words(g, 2)[:4]
    for u in words:
        for v in words[:4]:
            s = hitting_set(g, u, v)
            assert s.members(40) == [n for n in range(1, 41) if brute_hits(g, u, v, n)], (u, v)


@pytest.mark.parametrize("g", random_essential_sfts(60, seed=5), ids=lambda g: str(sorted(g.edges)))
def test_decisions_match_matrix_oracles(g):
    r = _reach_matrix(g)
    sc = bool(r.all())
    prim = sc and _primitive_by_powers(g)
    assert (decide_property(g, P.TT).status is Status.PROVED) == sc
    assert (decide_property(g, P.TM).status is Status.PROVED) == prim
    assert (decide_property(g, P.LEO).status is Status.PROVED) == prim
    cycle = sc and len(g.edges) == len(g.vertices)
    assert (decide_property(g, P.M).status is Status.PROVED) == cycle


@pytest.mark.parametrize("p", [P.EXACT, P.FULLY_EXACT, P.ET])
def test_two_sided_nontrivial_is_never_exact(p):
    g = SftGraph.from_names("01", FULL2.edges, "two")
    assert decide_property(g, p).status is Status.REFUTED


def test_two_sided_st_vst_equal_m():
    for edges in (FULL2.edges, CYCLE2.edges):
        g = SftGraph.from_names("01", edges, "two")
        m = decide_property(g, P.M).status
        assert decide_property(g, P.ST).status is m
        assert decide_property(g, P.VST).status is m


def test_weak_mixing_requires_aperiodic_product():
    assert decide_property(CYCLE2, P.WM).status is Status.REFUTED
    assert decide_property(GOLDEN, P.WM).status is Status.PROVED


def test_exact_pairs_on_cycle_fail():
    ok, bad = exact_pairs_reach_diagonal(CYCLE2)
    assert not ok and bad[0] != bad[1]


def test_product_of_cycle_with_itself_splits():
    prod = build_product(CYCLE2, CYCLE2)
    assert len(prod.vertices) == 4
    assert decide_property(prod, P.TT).status is Status.REFUTED


def test_higher_block_recode_golden_mean():
    g = higher_block_recode(Alphabet.of("01"), ["11"])
    assert decide_property(g, P.TM).status is Status.PROVED
    assert len(legal_words(g, 4)) == 8  # Fibonacci count for the golden mean


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_hitting_set_is_eventually_periodic_and_canonical(seed):
    (g,) = random_essential_sfts(1, seed=seed, max_vertices=4)
    v = g.vertices[0]
    s = hitting_set(g, v, v)
    assert s.is_canonical
    assert s.members(30) == [n for n in range(1, 31) if brute_hits(g, v, v, n)]
