import pytest
from hypothesis import given, strategies as st

from transitivity.core import PropertyId as P, Status, Verdict, GridScale, proved, refuted, unknown
from transitivity.lattice import (
    NO_EXAMPLE,
    Condition,
    ContradictionError,
    SystemFlags,
    VerdictTable,
    check_consistency,
    closure,
    edge_by_id,
    edge_ledger,
    propagate,
)

LEO_CLOSURE = {P.TM, P.SPT, P.VST, P.WM, P.SET, P.ST, P.ET, P.TT, P.EXACT, P.FULLY_EXACT,
               P.DENSE_PERIODIC, P.ITER_ALMOST_OPEN}


def _proved_set(t):
    return {p for p, v in t.verdicts.items() if v.status is Status.PROVED}


def test_leo_only_closes_to_twelve_properties():
    t = propagate(VerdictTable({P.LEO: proved("given")}))
    assert _proved_set(t) - {P.LEO} == LEO_CLOSURE
    assert P.M not in t.verdicts


def test_tt_refuted_contrapositive_closure():
    t = propagate(VerdictTable({P.TT: refuted("given")}))
    refuted_set = {p for p, v in t.verdicts.items() if v.status is Status.REFUTED}
    assert {P.ST, P.VST, P.M, P.WM, P.TM, P.ET, P.SET, P.SPT, P.LEO} <= refuted_set


def test_invertible_mixing_refutes_exactness_chain():
    flags = SystemFlags(invertible=True, trivial=False)
    t = propagate(VerdictTable({P.TM: proved("given")}, flags))
    for p in (P.EXACT, P.ET, P.SET, P.SPT, P.LEO, P.FULLY_EXACT):
        assert t.verdicts[p].status is Status.REFUTED, p
    assert t.verdicts[P.TM].status is Status.PROVED


def test_trivial_invertible_system_is_not_forced_inexact():
    t = propagate(VerdictTable({}, SystemFlags(invertible=True, trivial=True)))
    assert P.EXACT not in t.verdicts


def test_conditional_edges_need_flags():
    t = propagate(VerdictTable({P.ST: proved("given")}))
    assert P.VST not in t.verdicts
    t = propagate(VerdictTable({P.ST: proved("given")}, SystemFlags(open_map=True)))
    assert t.verdicts[P.VST].status is Status.PROVED
    assert t.verdicts[P.VST].provenance.rule == "C01"


@pytest.mark.parametrize("edge", [e for e in edge_ledger()
                                  if e.condition is Condition.NONE and len(e.sources) == 1],
                         ids=lambda e: e.rule_id)
def test_contrapositive_completeness(edge):
    t = propagate(VerdictTable({edge.target: refuted("given")}))
    assert t.verdicts[edge.sources[0]].status is Status.REFUTED


def test_conjunction_edge_fires_only_with_all_sources():
    t = propagate(VerdictTable({P.FULLY_EXACT: proved("given")}))
    assert P.ET not in t.verdicts
    t = propagate(VerdictTable({P.FULLY_EXACT: proved("given"), P.TT: proved("given")}))
    assert t.verdicts[P.ET].provenance.rule == "E17"
    # contrapositive of a conjunction needs all but one source proved
    t = propagate(VerdictTable({P.ET: refuted("given"), P.TT: proved("given")}))
    assert t.verdicts[P.FULLY_EXACT].status is Status.REFUTED


def test_direct_verdicts_are_never_overwritten():
    w = Verdict(Status.WITNESS, GridScale(), {"summary": "grid"})
    t = propagate(VerdictTable({P.LEO: proved("given"), P.TM: w}))
    assert t.verdicts[P.TM] is w
    assert t.shadowed[P.TM].status is Status.PROVED
    assert t.final(P.TM).status is Status.PROVED


def test_unknown_is_replaced_by_certificate():
    t = propagate(VerdictTable({P.LEO: proved("given"), P.TM: unknown("?")}))
    assert t.verdicts[P.TM].status is Status.PROVED
    assert not t.verdicts[P.TM].provenance.direct


def test_finite_scale_verdicts_do_not_propagate():
    w = Verdict(Status.WITNESS, GridScale(), {"summary": "grid"})
    nw = Verdict(Status.NO_WITNESS, GridScale(), {"summary": "grid"})
    t = propagate(VerdictTable({P.LEO: w, P.TT: nw}))
    assert set(t.verdicts) == {P.LEO, P.TT} and not t.shadowed


def test_contradiction_reports_both_chains():
    table = VerdictTable({P.LEO: proved("given"), P.TT: refuted("given")})
    _, cs = closure(table)
    assert cs
    with pytest.raises(ContradictionError) as exc:
        propagate(table)
    assert exc.value.code == "CONTRADICTION"
    c = exc.value.contradictions[0]
    assert c.proved_chain and c.refuted_chain


def test_no_unconditional_edge_into_minimality():
    assert all(e.target is not P.M or e.condition is not Condition.NONE for e in edge_ledger())


def test_edge_lookup():
    assert edge_by_id("E01").target is P.TM
    with pytest.raises(KeyError):
        edge_by_id("Z99")


statuses = st.sampled_from([Status.PROVED, Status.REFUTED, Status.UNKNOWN])


@given(st.dictionaries(st.sampled_from(list(P)), statuses, max_size=5),
       st.booleans(), st.booleans())
def test_closure_is_idempotent_and_keeps_direct(assign, open_map, invertible):
    direct = {p: Verdict(s, None, {"summary": "given"}) for p, s in assign.items()}
    t1, c1 = closure(VerdictTable(direct, SystemFlags(open_map, invertible)))
    t2, c2 = closure(t1)
    assert t2.verdicts == t1.verdicts and t2.shadowed == t1.shadowed
    for p, v in direct.items():
        if v.status is not Status.UNKNOWN:
            assert t1.verdicts[p] == v
    for v in t1.verdicts.values():
        if not v.provenance.direct:
            assert v.status.is_certificate


def test_consistency_instantiates_vst_not_minimal():
    t = propagate(VerdictTable({P.LEO: proved("given"), P.M: refuted("given")}))
    report = check_consistency(t)
    assert 2 in [n for n, _, _ in report.instantiated]
    assert report.documented_gaps == NO_EXAMPLE


def test_unknown_triviality_blocks_nontrivial_edges():
    t = propagate(VerdictTable({P.M: proved("given")}))
    assert P.FULLY_EXACT not in t.verdicts
    t = propagate(VerdictTable({P.M: proved("given")}, SystemFlags(trivial=False)))
    assert t.verdicts[P.FULLY_EXACT].status is Status.REFUTED
    t = propagate(VerdictTable({P.TM: proved("given")}, SystemFlags(invertible=True)))
    assert P.EXACT not in t.verdicts
