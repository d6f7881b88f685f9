"""Exact solver checks: frozen instances, then brute-force equivalence."""

import pytest
from hypothesis import given, settings, strategies as st

from mastkit import (
    TaxaMismatch,
    canonical_root_edge,
    isomorphic,
    parse_newick,
    root_at_edge,
    write_newick,
)
from mastkit.exact import (
    SizeCapExceeded,
    brute_force_mast,
    rooted_mast,
    unrooted_mast,
)
from mastkit.generators import GenSpec, generate

from conftest import rooted, unrooted


def test_three_leaf_rooted_disagreement():
    res = rooted_mast(rooted("((1,2),3);"), rooted("((1,3),2);"))
    assert res.size == 2
    assert res.agreement_set == frozenset({"2", "3"})
    assert write_newick(res.witness) == "(2,3);"


def test_reversed_caterpillars_rooted_vs_unrooted():
    # Rooted, reversing the spine breaks every triple; unrooted, the two
    # trees carry the same single quartet split.
    assert rooted_mast(rooted("(((1,2),3),4);"), rooted("(((4,3),2),1);")).size == 2
    assert unrooted_mast(unrooted("((1,2),(3,4));"),
                         unrooted("((4,3),(2,1));")).size == 4


def test_identical_trees_agree_everywhere():
    tree = unrooted("(1,2,((3,4),((5,6),(7,8))));")
    res = unrooted_mast(tree, tree)
    assert res.size == 8
    assert res.agreement_set == tree.taxa


def test_tiny_unrooted_inputs_always_agree():
    for text1, text2 in [("1;", "1;"), ("(1,2);", "(1,2);"),
                         ("(1,2,3);", "(1,2,3);")]:
        res = unrooted_mast(unrooted(text1), unrooted(text2))
        assert res.agreement_set == unrooted(text1).taxa


def test_witness_is_a_real_agreement():
    a = unrooted("(1,2,(3,((4,5),6)));")
    b = unrooted("(6,5,((4,3),(1,2)));")
    res = unrooted_mast(a, b)
    assert isomorphic(a.restrict(res.agreement_set), b.restrict(res.agreement_set))
    assert isomorphic(res.witness, a.restrict(res.agreement_set))


def test_mismatched_taxa_raise():
    with pytest.raises(TaxaMismatch):
        unrooted_mast(unrooted("(1,2,3);"), unrooted("(1,2,4);"))
    with pytest.raises(TaxaMismatch):
        rooted_mast(rooted("(1,2);"), rooted("(1,3);"))


def test_brute_force_cap():
    big = generate(GenSpec("uniform", 11, 3))
    with pytest.raises(SizeCapExceeded) as err:
        brute_force_mast(big, big)
    assert err.value.size == 11 and err.value.cap == 10
    # A raised cap admits the instance.
    assert brute_force_mast(big, big, cap=11).size == 11


@settings(max_examples=60, deadline=None)
@given(n=st.integers(min_value=4, max_value=7), seed=st.integers(0, 2**32))
def test_unrooted_dp_equals_brute_force(n, seed):
    a = generate(GenSpec("uniform", n, seed))
    b = generate(GenSpec("uniform", n, seed ^ 0x9E3779B97F4A7C15))
    assert unrooted_mast(a, b).size == brute_force_mast(a, b).size


@settings(max_examples=60, deadline=None)
@given(n=st.integers(min_value=3, max_value=7), seed=st.integers(0, 2**32))
def test_rooted_dp_equals_brute_force(n, seed):
    a = generate(GenSpec("uniform", n, seed))
    b = generate(GenSpec("uniform", n, seed + 1))
    ra = root_at_edge(a, canonical_root_edge(a))
    rb = root_at_edge(b, canonical_root_edge(b))
    dp = rooted_mast(ra, rb)
    best = dp.size
    # Brute force over the rooted restrictions directly.
    from itertools import combinations
    labels = sorted(ra.taxa)
    found = 0
    for k in range(n, 0, -1):
        for sub in combinations(labels, k):
            cut = frozenset(sub)
            if isomorphic(ra.restrict(cut), rb.restrict(cut)):
                found = k
                break
        if found:
            break
    assert best == found


@settings(max_examples=40, deadline=None)
@given(n=st.integers(min_value=4, max_value=16), seed=st.integers(0, 2**32))
def test_unrooted_result_verifies_and_is_deterministic(n, seed):
    a = generate(GenSpec("uniform", n, seed))
    b = generate(GenSpec("uniform", n, seed + 7))
    first = unrooted_mast(a, b)
    second = unrooted_mast(a, b)
    assert first.agreement_set == second.agreement_set
    assert isomorphic(a.restrict(first.agreement_set),
                      b.restrict(first.agreement_set))
