"""Core tree structure checks: restriction, traversal, shape predicates."""

import pytest
from hypothesis import given, settings, strategies as st

from mastkit import (
    RootedTree,
    TreeError,
    UnrootedTree,
    canonical_root_edge,
    deroot,
    isomorphic,
    parse_newick,
    root_at_edge,
    write_newick,
)
from mastkit.trees import (
    caterpillar_ordering,
    is_caterpillar,
    label_key,
    min_label,
    sorted_labels,
)
from mastkit.generators import GenSpec, generate

from conftest import rooted, unrooted


def test_label_ordering_is_numeric_aware():
    labels = ["10", "9", "x2", "x10", "2"]
    assert sorted_labels(labels) == ["2", "9", "10", "x10", "x2"]
    assert min_label(labels) == "2"
    assert label_key("10") > label_key("9")


def test_rooted_restriction_suppresses_pass_through_nodes():
    tree = rooted("(((1,2),3),4);")
    cut = tree.restrict({"2", "3", "4"})
    assert write_newick(cut) == "((2,3),4);"


def test_unrooted_restriction_of_quartet():
    tree = unrooted("((1,2),(3,4));")
    cut = tree.restrict({"1", "2", "3"})
    assert write_newick(cut) == "(1,2,3);"
    assert cut.num_nodes() == 4


def test_restriction_rejects_bad_sets():
    tree = rooted("(((1,2),3),4);")
    with pytest.raises(TreeError):
        tree.restrict({"2", "9"})
    with pytest.raises(TreeError):
        tree.restrict(set())


def test_restriction_to_whole_set_is_identity():
    tree = rooted("(4,(3,(1,(2,5))));")
    assert tree.restrict(tree.taxa).seq() == tree.seq()


def test_seq_is_preorder_leaf_order():
    assert rooted("(4,(3,(1,(2,5))));").seq() == ("4", "3", "1", "2", "5")


def test_lca_and_ancestry():
    tree = rooted("(4,(3,(1,(2,5))));")
    pair = tree.lca({"2", "5"})
    assert sorted(tree.leaves_under(pair)) == ["2", "5"]
    assert tree.is_ancestor(tree.root, pair)
    assert not tree.is_ancestor(pair, tree.root)
    assert tree.is_comparable(pair, tree.root)
    inner = tree.lca({"1", "2"})
    assert sorted(tree.leaves_under(inner)) == ["1", "2", "5"]


def test_mirror_reverses_seq_and_is_an_involution():
    tree = rooted("(4,(3,(1,(2,5))));")
    flipped = tree.mirror()
    assert flipped.seq() == ("5", "2", "1", "3", "4")
    assert flipped.mirror().seq() == tree.seq()
    assert isomorphic(tree, flipped)


def test_caterpillar_predicates():
    assert is_caterpillar(unrooted("(1,2,(3,(4,5)));"))
    assert not is_caterpillar(unrooted("(1,2,((3,4),((5,6),(7,8))));"))
    spine = rooted("(((1,2),3),4);")
    assert is_caterpillar(spine)
    assert caterpillar_ordering(spine) == ("4", "3", "1", "2")
    assert caterpillar_ordering(rooted("(4,(3,(1,(2,5))));")) == (
        "4", "3", "1", "2", "5")


def test_caterpillar_ordering_rejects_non_caterpillars_and_unrooted():
    bal = unrooted("(1,2,((3,4),((5,6),(7,8))));")
    tree = root_at_edge(bal, canonical_root_edge(bal))
    assert caterpillar_ordering(tree) is None
    with pytest.raises(TypeError):
        caterpillar_ordering(bal)


def test_isomorphism_ignores_child_order_but_not_labels():
    assert isomorphic(rooted("((1,2),3);"), rooted("((2,1),3);"))
    assert not isomorphic(rooted("((1,2),3);"), rooted("((1,3),2);"))
    assert isomorphic(unrooted("((1,2),(3,4));"), unrooted("((2,1),(4,3));"))
    assert not isomorphic(unrooted("((1,2),(3,4));"), unrooted("((1,3),(2,4));"))


def test_isomorphism_on_different_taxa_is_false():
    assert not isomorphic(rooted("(1,2);"), rooted("(1,3);"))


def test_canonical_root_edge_sits_at_the_smallest_leaf():
    tree = unrooted("(1,2,(3,(4,5)));")
    a, b = canonical_root_edge(tree)
    assert tree.labels[a] == "1"
    assert tree.labels[b] is None


def test_root_at_edge_orients_by_minimum_label():
    tree = unrooted("(1,2,(3,(4,5)));")
    back = root_at_edge(tree, canonical_root_edge(tree))
    assert write_newick(back) == "(1,(2,(3,(4,5))));"
    assert isomorphic(deroot(back), tree)


def test_validate_rejects_degree_two_internal():
    with pytest.raises(TreeError):
        UnrootedTree([[1], [0, 2], [1]], ["1", None, "2"]).validate()


def test_unrooted_node_counts():
    # 2n-2 nodes for n >= 2, a single node for n = 1.
    assert unrooted("1;").num_nodes() == 1
    assert unrooted("(1,2);").num_nodes() == 2
    assert unrooted("(1,2,3);").num_nodes() == 4
    assert unrooted("((1,2),(3,4));").num_nodes() == 6


@settings(max_examples=40, deadline=None)
@given(n=st.integers(min_value=2, max_value=30), seed=st.integers(0, 2**32))
def test_root_then_deroot_round_trip(n, seed):
    tree = generate(GenSpec("uniform", n, seed))
    back = deroot(root_at_edge(tree, canonical_root_edge(tree)))
    assert isomorphic(tree, back)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(min_value=4, max_value=24), seed=st.integers(0, 2**32),
       drop=st.integers(0, 2**32))
def test_restriction_drops_exactly_the_asked_taxa(n, seed, drop):
    tree = generate(GenSpec("uniform", n, seed))
    keep = frozenset(lab for lab in tree.taxa if (hash((lab, drop)) & 3) != 0)
    if len(keep) < 1:
        keep = frozenset([min_label(tree.taxa)])
    cut = tree.restrict(keep)
    assert cut.taxa == keep
    cut.validate()


@settings(max_examples=30, deadline=None)
@given(n=st.integers(min_value=3, max_value=20), seed=st.integers(0, 2**32))
def test_rooted_restriction_keeps_relative_leaf_order(n, seed):
    base = generate(GenSpec("uniform", n, seed))
    tree = root_at_edge(base, canonical_root_edge(base))
    keep = frozenset(list(sorted_labels(tree.taxa))[::2])
    cut = tree.restrict(keep)
    expected = tuple(lab for lab in tree.seq() if lab in keep)
    assert cut.seq() == expected
