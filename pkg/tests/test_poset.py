import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cictools.errors import InputError
from cictools.poset import (
    SpectralPoset,
    automorphisms,
    check_qf_invariance,
    find_isomorphism,
    is_order_isomorphism,
    random_poset,
    relabel,
    to_dot,
)


def brute_rim_closure(poset, x):
    """Rim closure straight from the definition, over all point pairs."""
    x = set(x)
    out = set(x)
    for p, q in itertools.product(poset.points, repeat=2):
        if p in x or q not in x or not poset.lt(p, q):
            continue
        if not any(poset.lt(p, r) and poset.lt(r, q) for r in poset.points):
            out.add(p)
    return frozenset(out)


def test_covers_chain(chain):
    assert chain.covers("c0", "c1")
    assert not chain.covers("c0", "c2")
    for p in chain.points:
        assert not chain.covers(p, p)


def test_covers_unknown_point(chain):
    with pytest.raises(InputError):
        chain.covers("c0", "zz")


def test_redundant_cover_input_is_closed():
    poset = SpectralPoset(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")])
    assert poset.lt("a", "c")
    assert not poset.covers("a", "c")
    assert poset.cover_pairs() == [("a", "b"), ("b", "c")]


@pytest.mark.parametrize("pairs", [[("a", "b"), ("b", "a")], [("a", "a")], [("a", "zz")]])
def test_bad_order_rejected(pairs):
    with pytest.raises(InputError):
        SpectralPoset(["a", "b"], pairs)


def test_zariski_closure(chain, ytree):
    assert chain.zariski_closure({"c0"}) == {"c0", "c1", "c2"}
    assert chain.zariski_closure(set()) == frozenset()
    assert ytree.zariski_closure({"m"}) == {"m", "a", "b"}


def test_is_dense(chain, ytree):
    assert chain.is_dense({"c0"})
    assert not chain.is_dense({"c2"})
    assert not ytree.is_dense({"m"})


def test_rim_closure(chain, ytree):
    assert chain.rim_closure({"c2"}) == {"c1", "c2"}
    assert chain.rim_closure(set()) == frozenset()
    assert ytree.rim_closure({"a"}) == {"m", "a"}
    assert ytree.rim_closure({"a"}) == brute_rim_closure(ytree, {"a"})


def test_minimal_elements(chain, ytree):
    assert chain.minimal_elements({"c1", "c2"}) == {"c1"}
    assert ytree.minimal_elements({"a", "b"}) == {"a", "b"}
    assert chain.minimal_elements(set()) == frozenset()


def test_height(chain, ytree):
    assert chain.height("c2") == 2
    assert chain.height("c0") == 0
    assert ytree.height("a") == 2
    assert ytree.height("r") == 0


def test_is_tree(ytree, diamond):
    assert ytree.is_tree()
    assert not diamond.is_tree()
    assert SpectralPoset(["only"]).is_tree()


def test_qf_invariance_examples(chain):
    identity = {p: p for p in chain.points}
    for r in range(4):
        for x in itertools.combinations(chain.points, r):
            assert check_qf_invariance(chain, chain, identity, x)
    renamed = {"c0": "z0", "c1": "z1", "c2": "z2"}
    assert check_qf_invariance(chain, relabel(chain, renamed), renamed, {"c2"})


def test_qf_invariance_rejects_non_isomorphism(chain):
    flipped = {"c0": "c2", "c1": "c1", "c2": "c0"}
    with pytest.raises(InputError):
        check_qf_invariance(chain, chain, flipped, {"c0"})


def test_find_isomorphism(ytree, diamond):
    renamed = relabel(ytree, {"r": "R", "m": "M", "a": "A", "b": "B"})
    iso = find_isomorphism(ytree, renamed)
    assert iso is not None and is_order_isomorphism(ytree, renamed, iso)
    assert find_isomorphism(ytree, diamond) is None
    # swapping the two leaves is the only nontrivial automorphism
    assert len(automorphisms(ytree)) == 2


def test_to_dot(chain):
    dot = to_dot(chain)
    assert dot.startswith("digraph spectrum {")
    assert '"c0" -> "c1";' in dot and '"c1" -> "c2";' in dot
    assert '"c0" -> "c2"' not in dot


@st.composite
def posets_with_subsets(draw, max_points=12):
    seed = draw(st.integers(0, 2**32 - 1))
    n = draw(st.integers(1, max_points))
    poset = random_poset(random.Random(seed), n, density=draw(st.sampled_from([0.1, 0.3, 0.6])))
    x = draw(st.sets(st.sampled_from(poset.points)))
    y = draw(st.sets(st.sampled_from(poset.points)))
    return poset, frozenset(x), frozenset(y)


@given(posets_with_subsets())
def test_zariski_closure_is_closure_operator(data):
    poset, x, y = data
    cl = poset.zariski_closure
    assert x <= cl(x)
    assert cl(cl(x)) == cl(x)
    assert cl(x & y) <= cl(x) and cl(x) <= cl(x | y)


@given(posets_with_subsets())
def test_rim_closure_matches_definition(data):
    poset, x, _ = data
    qf = poset.rim_closure(x)
    assert x <= qf
    assert qf == brute_rim_closure(poset, x)
    covered = {p for q in x for p in poset.strictly_below(q) if poset.covers(p, q)}
    assert qf <= x | covered


@given(posets_with_subsets())
def test_minimal_of_principal_upset(data):
    poset, x, _ = data
    for p in x:
        assert poset.minimal_elements(poset.zariski_closure({p})) == {p}


@given(posets_with_subsets())
def test_dense_iff_contains_minimal_points(data):
    poset, x, _ = data
    assert poset.is_dense(x) == (poset.minimal_points() <= x)


@given(posets_with_subsets())
def test_height_is_longest_chain(data):
    poset, _, _ = data
    for p in poset.points:
        below = poset.strictly_below(p)
        expected = 0 if not below else 1 + max(poset.height(q) for q in below)
        assert poset.height(p) == expected


@settings(max_examples=50)
@given(posets_with_subsets(), st.randoms(use_true_random=False))
def test_qf_invariance_random(data, rng):
    poset, x, _ = data
    autos = automorphisms(poset, limit=16)
    auto = rng.choice(autos)
    assert check_qf_invariance(poset, poset, auto, x)
    targets = [f"y{i}" for i in range(len(poset))]
    rng.shuffle(targets)
    iso = dict(zip(poset.points, targets))
    assert check_qf_invariance(poset, relabel(poset, iso), iso, x)
