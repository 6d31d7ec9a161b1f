import pytest

from cictools.bezout import build_spectrum, enumerate_nested_pairs, enumerate_v_sets, spec_ast_oracle
from cictools.criteria import (
    audit,
    check_height_bound,
    check_phi_invariance,
    cross_validate,
    spec_ast_min_criterion,
    spec_ast_topological,
)
from cictools.errors import InputError
from cictools.lgroup import Lex, Product
from cictools.poset import automorphisms, find_isomorphism
from conftest import GRID

L1, L2, L3 = Lex(1), Lex(2), Lex(3)


def topological_by_definition(spec):
    poset = spec.poset
    keep = set()
    for p in spec.points:
        through = [x.members for x in enumerate_v_sets(spec) if p in x.members]
        if all(poset.is_dense(poset.rim_closure(x)) for x in through):
            keep.add(p)
    return frozenset(keep)


def min_by_definition(spec):
    poset = spec.poset
    keep = {spec.root}
    for p in spec.nonroot():
        if all(
            poset.minimal_elements(a.members) & poset.minimal_elements(b.members)
            for a, b in enumerate_nested_pairs(spec, p)
        ):
            keep.add(p)
    return frozenset(keep)


def test_topological_examples():
    spec = build_spectrum(L2)
    assert spec_ast_topological(spec) == {"root", "P1"}
    report = cross_validate(spec)
    witness = report.witnesses["topological"]["P2"]
    assert witness["v_set"] == {"members": ["P2"], "witness": [0, 1]}
    assert witness["rim_closure"] == ["P1", "P2"]

    p11 = build_spectrum(Product((L1, L1)))
    assert spec_ast_topological(p11) == frozenset(p11.points)
    lex1 = build_spectrum(L1)
    assert spec_ast_topological(lex1) == frozenset(lex1.points)


def test_min_criterion_examples():
    spec = build_spectrum(L2)
    assert spec_ast_min_criterion(spec) == {"root", "P1"}
    witness = cross_validate(spec).witnesses["min_criterion"]["P2"]
    assert witness["I"]["witness"] == [1, 0] and witness["J"]["witness"] == [0, 1]
    assert witness["min_I"] == ["P1"] and witness["min_J"] == ["P2"]

    p11 = build_spectrum(Product((L1, L1)))
    assert spec_ast_min_criterion(p11) == frozenset(p11.points)
    assert spec_ast_min_criterion(build_spectrum(L3)) == {"root", "P1"}


@pytest.mark.parametrize("desc", GRID, ids=str)
def test_batched_criteria_match_definitions(desc):
    spec = build_spectrum(desc)
    assert spec_ast_topological(spec) == topological_by_definition(spec)
    assert spec_ast_min_criterion(spec) == min_by_definition(spec)


def test_cross_validate_examples():
    report = cross_validate(build_spectrum(L2))
    assert report.agreement and report.agreed == {"root", "P1"} and not report.cic

    report = cross_validate(build_spectrum(Product((L1, L1, L1))))
    assert report.agreement and report.cic

    spec = build_spectrum(Product((L2, L2)))
    report = cross_validate(spec)
    assert report.agreement
    assert report.agreed == {"root", "C1.P1", "C2.P1"}
    assert not report.cic


@pytest.mark.parametrize("desc", GRID, ids=str)
def test_cic_flag_equivalences(desc):
    spec = build_spectrum(desc)
    report = cross_validate(spec)
    poset = spec.poset
    # V(D) is empty and never dense; the closed sets that matter contain a prime
    all_dense = all(
        poset.is_dense(poset.rim_closure(x.members)) for x in enumerate_v_sets(spec) if x.members
    )
    all_meet = all(
        poset.minimal_elements(a.members) & poset.minimal_elements(b.members)
        for p in spec.nonroot()
        for a, b in enumerate_nested_pairs(spec, p)
    )
    assert report.cic == all_dense == all_meet


def test_height_bound_examples():
    spec = build_spectrum(Lex(5))
    report = cross_validate(spec)
    assert report.agreed == {"root", "P1"}
    assert check_height_bound(report, spec)
    for n in range(1, 5):
        spec = build_spectrum(Product((L1,) * n))
        assert check_height_bound(cross_validate(spec), spec)
    spec = build_spectrum(L1)
    assert check_height_bound(cross_validate(spec), spec)


def test_phi_invariance_examples():
    a, b = build_spectrum(L2), build_spectrum(Product((L2,)))
    assert check_phi_invariance(a, b, {"root": "root", "P1": "C1.P1", "P2": "C1.P2"})

    a, b = build_spectrum(Product((L1, L2))), build_spectrum(Product((L2, L1)))
    swap = {"root": "root", "C1.P1": "C2.P1", "C2.P1": "C1.P1", "C2.P2": "C1.P2"}
    assert check_phi_invariance(a, b, swap)

    for desc in GRID:
        spec = build_spectrum(desc)
        for auto in automorphisms(spec.poset, limit=8):
            assert check_phi_invariance(spec, spec, auto)


def test_phi_invariance_rejects_non_isomorphism():
    a, b = build_spectrum(Product((L1, L2))), build_spectrum(Product((L2, L1)))
    identity_names = {"root": "root", "C1.P1": "C1.P1", "C2.P1": "C2.P1", "C2.P2": "C1.P2"}
    with pytest.raises(InputError):
        check_phi_invariance(a, b, identity_names)
    with pytest.raises(InputError):
        check_phi_invariance(build_spectrum(L2), build_spectrum(L3), {"root": "root"})


def test_isomorphic_grid_models_found():
    a, b = build_spectrum(Product((L1, L2, L3))), build_spectrum(Product((L3, L1, L2)))
    iso = find_isomorphism(a.poset, b.poset)
    assert iso is not None and check_phi_invariance(a, b, iso)


def test_fault_injection_reports_counterexample():
    spec = build_spectrum(L2)
    report = cross_validate(spec, inject_fault="P2")
    assert not report.agreement
    [entry] = report.counterexamples()
    assert entry["point"] == "P2"
    assert entry["oracle"] == "in" and entry["topological"] == "out"
    assert "min_criterion_witness" in entry
    assert any("disagree" in msg for msg in audit(report, spec))
    with pytest.raises(InputError):
        cross_validate(spec, inject_fault="nope")


@pytest.mark.parametrize("desc", GRID, ids=str)
def test_report_invariants(desc):
    spec = build_spectrum(desc)
    report = cross_validate(spec)
    assert report.verdicts["oracle"] == spec_ast_oracle(spec)
    assert report.agreement
    assert audit(report, spec) == []
    assert report.max_height <= 1
