"""Constructive lower bounds for maximum agreement subtrees.

Given two binary trees on the same n taxa, the routines here build an
explicit agreement set of logarithmic size.  The pipeline:

* :func:`setup` roots both trees at an edge and keeps a common monotone
  leaf subsequence (at least sqrt(n) taxa), so both restrictions list
  their leaves in the same order;
* :func:`weak_construct` peels one taxon per round off a shrinking core,
  or exits early with a greedy caterpillar, and guarantees an agreement
  of size about log n / log log n;
* :func:`main_construct` peels whole blocks found by :func:`strong_split`
  and recursing with :func:`weak_construct`, aiming at Omega(log n).

Every intermediate object is checked as it is produced: candidate pairs
are re-validated with explicit ancestor queries, splits with explicit
incomparability queries, and each final outcome is verified by restricting
both trees to the returned set and testing isomorphism.  A returned
outcome is therefore a certificate.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

from .exact import rooted_mast
from .rng import SplitMix64
from .trees import (
    RootedTree,
    TaxaMismatch,
    TreeError,
    UnrootedTree,
    canonical_root_edge,
    deroot,
    is_caterpillar,
    isomorphic,
    label_key,
    root_at_edge,
    sorted_labels,
)

ROOTED_CATERPILLAR = "rooted_caterpillar"
UNROOTED_CATERPILLAR = "unrooted_caterpillar"
BLOCK_TREE = "block_tree"

_ROOTED_KINDS = (ROOTED_CATERPILLAR, BLOCK_TREE)

Tree = Union[RootedTree, UnrootedTree]


@dataclass(frozen=True)
class GoodPair:
    """One peel step: ``pivot`` joins the output, ``survivors`` carry on.

    In both current trees the ancestor of the survivors is strictly below
    the ancestor of survivors plus pivot, which is what lets the pivot sit
    on top of whatever the survivors later produce.  ``tier`` records the
    size floor the pair was found under: ``"large"`` keeps at least a 1/C
    fraction of the core, ``"regular"`` at least 1/(2 log2 n).
    """

    pivot: str
    survivors: frozenset[str]
    tier: str


@dataclass
class IterationState:
    """The shrinking core shared by both construction loops.

    ``tree1`` and ``tree2`` are the two rooted trees restricted to
    ``taxa`` and listing their leaves in the same order.  ``agreed``
    collects everything peeled off so far, oldest first.  ``n_param`` is
    the size parameter all logarithmic thresholds refer to; it stays
    fixed while the core shrinks.
    """

    taxa: frozenset[str]
    tree1: RootedTree
    tree2: RootedTree
    agreed: list[str]
    n_param: int
    step: int = 1


@dataclass(frozen=True)
class Piece:
    """A leaf interval hanging off a spine, as positions in the common
    leaf order (1-based, inclusive) plus the subtree root node id."""

    lo: int
    hi: int
    root: int
    leaves: tuple[str, ...]

    def size(self) -> int:
        return self.hi - self.lo + 1


@dataclass(frozen=True)
class PathDecomposition:
    """Both trees cut along a spine into consecutive leaf intervals.

    ``first`` hangs off tree1's path from its left-most leaf up to the
    root, listed bottom-up, starting with the left-most leaf itself and
    ending with the root's right subtree.  ``second`` hangs off tree2's
    path from the root down to its right-most leaf, listed top-down,
    starting with the root's left subtree and ending with the right-most
    leaf itself.  Each list partitions positions 1..n of ``order``.
    """

    first: tuple[Piece, ...]
    second: tuple[Piece, ...]
    order: tuple[str, ...]


@dataclass(frozen=True)
class IncomparableSplit:
    """Two disjoint taxon sets whose ancestors are incomparable in both
    trees: ``nucleus`` is recursed on, ``survivors`` is iterated on."""

    nucleus: frozenset[str]
    survivors: frozenset[str]


@dataclass(frozen=True)
class SweepFallback:
    """A ready caterpillar agreement found instead of a split."""

    leaves: tuple[str, ...]
    claimed_bound: float
    branch: str


@dataclass(frozen=True)
class SplitDegenerate:
    """No usable structure in the middle window; callers go exact."""

    reason: str


@dataclass(frozen=True)
class ConstructionOutcome:
    """A verified agreement set plus provenance.

    ``kind`` says how to interpret the set: rooted kinds agree as rooted
    restrictions of the setup trees, the unrooted kind as restrictions of
    the original unrooted trees.  ``claimed_bound`` is the size the taken
    branch promises (a report, not an assertion).  ``setup_trees`` holds
    the rooted pair the construction ran on, for later re-verification.
    """

    agreement_set: frozenset[str]
    kind: str
    branch: str
    claimed_bound: float
    setup_trees: Optional[tuple[RootedTree, RootedTree]] = None


def _longest_increasing(values: Sequence[int]) -> list[int]:
    # Patience sorting; returns indices of one strictly increasing
    # subsequence of maximum length, deterministically.
    tails: list[int] = []
    tails_idx: list[int] = []
    prev = [-1] * len(values)
    for i, v in enumerate(values):
        j = bisect_left(tails, v)
        if j == len(tails):
            tails.append(v)
            tails_idx.append(i)
        else:
            tails[j] = v
            tails_idx[j] = i
        prev[i] = tails_idx[j - 1] if j else -1
    out: list[int] = []
    i = tails_idx[-1] if tails_idx else -1
    while i != -1:
        out.append(i)
        i = prev[i]
    out.reverse()
    return out


def common_monotone_subsequence(
        a: Sequence[str], b: Sequence[str]) -> tuple[tuple[str, ...], str]:
    """Longest subsequence of ``a`` that is also a subsequence of ``b``
    or of reversed ``b``; returns it with ``"increasing"`` or
    ``"decreasing"`` telling which.  Ties prefer increasing.

    Both sequences must enumerate the same distinct labels.  The result
    length is at least ceil(sqrt(n)): mapping each label to its position
    in ``b`` turns the question into longest monotone run in a
    permutation, and a permutation of n items always carries one.
    """
    if len(a) != len(b) or set(a) != set(b):
        raise TaxaMismatch("sequences must list the same labels")
    pos = {lab: i for i, lab in enumerate(b)}
    perm = [pos[lab] for lab in a]
    inc = _longest_increasing(perm)
    dec = _longest_increasing([-v for v in perm])
    picked = inc if len(inc) >= len(dec) else dec
    direction = "increasing" if len(inc) >= len(dec) else "decreasing"
    return tuple(a[i] for i in picked), direction


def setup(tree1: UnrootedTree, tree2: UnrootedTree,
          edge1: Optional[tuple[int, int]] = None,
          edge2: Optional[tuple[int, int]] = None,
          *, orient: str = "min_label",
          rng: Optional[SplitMix64] = None,
          ) -> tuple[IterationState, RootedTree, RootedTree]:
    """Root both trees, align their leaf orders, and cut down to a common
    monotone subsequence of size at least ceil(sqrt(n)).

    Returns the initial state plus the two rooted trees the state's
    restrictions came from (the second possibly mirrored so that both
    orders run the same way).  Rooted agreements of the restrictions are
    rooted agreements of these trees, and of the unrooted originals after
    de-rooting.
    """
    if tree1.taxa != tree2.taxa:
        raise TaxaMismatch("input trees must share their taxon set")
    n = len(tree1)
    if n < 4:
        raise TreeError("setup needs at least 4 taxa")
    if edge1 is None:
        edge1 = canonical_root_edge(tree1)
    if edge2 is None:
        edge2 = canonical_root_edge(tree2)
    rooted1 = root_at_edge(tree1, edge1, orient=orient, rng=rng)
    rooted2 = root_at_edge(tree2, edge2, orient=orient, rng=rng)
    common, direction = common_monotone_subsequence(rooted1.seq(), rooted2.seq())
    if direction == "decreasing":
        rooted2 = rooted2.mirror()
    if len(common) * len(common) < n:
        raise TreeError("internal error: common subsequence below sqrt floor")
    keep = frozenset(common)
    core1 = rooted1.restrict(keep)
    core2 = rooted2.restrict(keep)
    if core1.seq() != core2.seq():
        raise TreeError("internal error: leaf orders failed to align")
    state = IterationState(taxa=keep, tree1=core1, tree2=core2,
                           agreed=[], n_param=n)
    return state, rooted1, rooted2


def _pieces_up(tree: RootedTree) -> list[Piece]:
    # Subtrees hanging off the path left-most leaf -> root, bottom-up.
    positions = {lab: i + 1 for i, lab in enumerate(tree.seq())}
    spine = []
    node = tree.root
    while tree.left[node] != -1:
        spine.append(node)
        node = tree.left[node]
    pieces = [_piece_at(tree, node, positions)]
    for parent in reversed(spine):
        pieces.append(_piece_at(tree, tree.right[parent], positions))
    return pieces


def _pieces_down(tree: RootedTree) -> list[Piece]:
    # Subtrees hanging off the path root -> right-most leaf, top-down.
    positions = {lab: i + 1 for i, lab in enumerate(tree.seq())}
    pieces = []
    node = tree.root
    while tree.right[node] != -1:
        pieces.append(_piece_at(tree, tree.left[node], positions))
        node = tree.right[node]
    pieces.append(_piece_at(tree, node, positions))
    return pieces


def _piece_at(tree: RootedTree, node: int,
              positions: dict[str, int]) -> Piece:
    leaves = tree.leaves_under(node)
    lo = positions[leaves[0]]
    hi = positions[leaves[-1]]
    if hi - lo + 1 != len(leaves):
        raise TreeError("internal error: spine subtree is not an interval")
    return Piece(lo, hi, node, leaves)


def path_decomposition(state: IterationState) -> PathDecomposition:
    """Cut both trees of the state along their spines into leaf intervals.

    First normalizes the state in place: if tree1's left root subtree is
    smaller than its right one, both trees are mirrored (they keep equal
    leaf orders, and agreements are unaffected since child order never
    matters for isomorphism).  Afterwards tree1's left subtree holds at
    least half the leaves.
    """
    tree1, tree2 = state.tree1, state.tree2
    if len(tree1) >= 2:
        counts = tree1.leaf_counts()
        root = tree1.root
        if counts[tree1.left[root]] < counts[tree1.right[root]]:
            state.tree1 = tree1.mirror()
            state.tree2 = tree2.mirror()
            tree1, tree2 = state.tree1, state.tree2
    order = tree1.seq()
    if order != tree2.seq():
        raise TreeError("state trees disagree on their leaf order")
    first = _pieces_up(tree1)
    second = _pieces_down(tree2)
    for pieces in (first, second):
        if [p.lo for p in pieces] != [1] + [p.hi + 1 for p in pieces[:-1]]:
            raise TreeError("internal error: pieces do not tile the order")
        if pieces[-1].hi != len(order):
            raise TreeError("internal error: pieces do not cover the order")
    return PathDecomposition(tuple(first), tuple(second), order)


def check_good_pair(state: IterationState, pair: GoodPair, c: int) -> None:
    """Re-derive every promise a pair makes; raise if any fails.

    Checks membership, the strict ancestor step in both trees, and the
    tier's size floor.
    """
    if pair.pivot in pair.survivors:
        raise TreeError("pivot may not survive itself")
    if pair.pivot not in state.taxa or not pair.survivors <= state.taxa:
        raise TreeError("pair mentions taxa outside the core")
    if not pair.survivors:
        raise TreeError("survivor set is empty")
    joined = pair.survivors | {pair.pivot}
    for tree in (state.tree1, state.tree2):
        low = tree.lca(pair.survivors)
        high = tree.lca(joined)
        if low == high or not tree.is_ancestor(high, low):
            raise TreeError("pivot fails the strict ancestor step")
    size = len(pair.survivors)
    core = len(state.taxa)
    if pair.tier == "large":
        if size * c < core:
            raise TreeError("large pair below its 1/C size floor")
    elif pair.tier == "regular":
        if size * 2 * math.log2(state.n_param) < core:
            raise TreeError("regular pair below its 1/(2 log n) size floor")
    else:
        raise TreeError(f"unknown pair tier {pair.tier!r}")


def _overlap(piece: Piece, lo: int, hi: int) -> int:
    a = piece.lo if piece.lo > lo else lo
    b = piece.hi if piece.hi < hi else hi
    return b - a + 1 if b >= a else 0


def _span(order: tuple[str, ...], lo: int, hi: int) -> frozenset[str]:
    return frozenset(order[lo - 1:hi])


def find_good_pair_structural(
        state: IterationState, decomp: PathDecomposition,
        c: int = 4) -> Optional[GoodPair]:
    """Look for a pair whose survivors keep at least a 1/C fraction.

    Returns None exactly when every piece of the decomposition has size
    at most max(2n'/C, 1), where n' is the current core size; otherwise
    the first oversized piece (first list scanned left to right, then the
    second) determines the pair via interval arithmetic on the common
    leaf order.
    """
    order = decomp.order
    n = len(order)
    oversized = None
    for side, pieces in ((1, decomp.first), (2, decomp.second)):
        for idx, piece in enumerate(pieces):
            size = piece.size()
            if size > 1 and size * c > 2 * n:
                oversized = (side, idx, piece)
                break
        if oversized:
            break
    if oversized is None:
        return None
    side, idx, piece = oversized
    leftmost, rightmost = order[0], order[-1]
    left2_hi = decomp.second[0].hi           # tree2's left root subtree
    right1_lo = decomp.first[-1].lo          # tree1's right root subtree
    last1 = len(decomp.first) - 1
    if side == 1:
        if idx < last1:
            if _overlap(piece, 1, left2_hi) * c >= n:
                survivors = _span(order, piece.lo, min(piece.hi, left2_hi))
                pivot = rightmost
            else:
                survivors = _span(order, max(piece.lo, left2_hi + 1), piece.hi)
                pivot = leftmost
        else:
            right2_lo = left2_hi + 1
            if _overlap(piece, right2_lo, n) * c >= n:
                survivors = _span(order, max(piece.lo, right2_lo), piece.hi)
                pivot = leftmost
            else:
                # Both left root subtrees are large; their leaf intervals
                # are prefixes, so they overlap in a long prefix.
                survivors = _span(order, 1, min(right1_lo - 1, left2_hi))
                pivot = rightmost
    else:
        if idx == 0:
            # Normalization keeps tree1's left subtree at half the core,
            # so two long prefixes again overlap in a long prefix.
            survivors = _span(order, 1, min(right1_lo - 1, piece.hi))
            pivot = rightmost
        else:
            if _overlap(piece, right1_lo, n) * c >= n:
                survivors = _span(order, max(piece.lo, right1_lo), piece.hi)
                pivot = leftmost
            else:
                survivors = _span(order, piece.lo, min(piece.hi, right1_lo - 1))
                pivot = rightmost
    pair = GoodPair(pivot, survivors, "large")
    check_good_pair(state, pair, c)
    return pair


def find_good_pair_big_subtree(
        state: IterationState, decomp: PathDecomposition) -> GoodPair:
    """Build a pair from a piece of size at least n'/log2(n_param).

    Assumes no oversized piece in the structural sense (so pieces fit in
    half the core); survivors are the big piece's majority overlap with a
    root subtree of the other tree, which keeps at least a 1/(2 log2 n)
    fraction.  Raises if no piece reaches the floor.
    """
    order = decomp.order
    n = len(order)
    if n < 2:
        raise TreeError("need at least two taxa to form a pair")
    floor = n / math.log2(state.n_param)
    leftmost, rightmost = order[0], order[-1]
    left2_hi = decomp.second[0].hi
    right1_lo = decomp.first[-1].lo
    last1 = len(decomp.first) - 1
    for idx, piece in enumerate(decomp.first):
        if piece.size() < floor:
            continue
        if idx < last1:
            in_left = _overlap(piece, 1, left2_hi)
            if 2 * in_left >= piece.size():
                survivors = _span(order, piece.lo, min(piece.hi, left2_hi))
                pivot = rightmost
            else:
                survivors = _span(order, max(piece.lo, left2_hi + 1), piece.hi)
                pivot = leftmost
        else:
            # Top piece of tree1 versus bottom-heavy tree2: the prefix
            # under tree2's left root subtree misses the top piece, so
            # its first leaf is a valid pivot.
            survivors = frozenset(piece.leaves)
            pivot = leftmost
        pair = GoodPair(pivot, survivors, "regular")
        check_good_pair(state, pair, 0)
        return pair
    for idx, piece in enumerate(decomp.second):
        if piece.size() < floor:
            continue
        if idx == 0:
            survivors = frozenset(piece.leaves)
            pivot = rightmost
        else:
            in_right = _overlap(piece, right1_lo, n)
            if 2 * in_right >= piece.size():
                survivors = _span(order, max(piece.lo, right1_lo), piece.hi)
                pivot = leftmost
            else:
                survivors = _span(order, piece.lo, min(piece.hi, right1_lo - 1))
                pivot = rightmost
        pair = GoodPair(pivot, survivors, "regular")
        check_good_pair(state, pair, 0)
        return pair
    raise TreeError("no piece reaches the regular size floor")


def greedy_caterpillar(decomp: PathDecomposition, lo: int = 1,
                       hi: Optional[int] = None) -> tuple[str, ...]:
    """Sweep positions lo..hi, taking one leaf then skipping past both
    pieces containing it.

    The picks hit each piece of either list at most once, so restricting
    either tree to them yields a caterpillar, and both caterpillars carry
    the picks in the same spine order, hence agree once de-rooted.  If
    every piece has size below (hi-lo+1)/B the sweep returns more than B
    picks.
    """
    order = decomp.order
    n = len(order)
    if hi is None:
        hi = n
    if lo < 1 or hi > n or lo > hi:
        raise TreeError("sweep window out of range")
    end1 = [0] * (n + 1)
    end2 = [0] * (n + 1)
    for pieces, ends in ((decomp.first, end1), (decomp.second, end2)):
        for piece in pieces:
            for pos in range(piece.lo, piece.hi + 1):
                ends[pos] = piece.hi
    picks = []
    pos = lo
    while pos <= hi:
        picks.append(order[pos - 1])
        e1, e2 = end1[pos], end2[pos]
        pos = (e1 if e1 >= e2 else e2) + 1
    return tuple(picks)


def classify_iteration(
        state: IterationState, decomp: PathDecomposition,
        c: int = 4) -> tuple[str, Union[GoodPair, tuple[str, ...]]]:
    """Decide the next move: a large pair if one exists, else a regular
    pair if some piece reaches n'/log2(n_param), else a full greedy sweep
    (whose precondition now holds).  Total for cores of two or more taxa.
    """
    pair = find_good_pair_structural(state, decomp, c)
    if pair is not None:
        return "large", pair
    n = len(decomp.order)
    floor = n / math.log2(state.n_param)
    if any(p.size() >= floor for p in decomp.first + decomp.second):
        return "regular", find_good_pair_big_subtree(state, decomp)
    return "caterpillar", greedy_caterpillar(decomp)


def _apply_pair(state: IterationState, pair: GoodPair) -> None:
    state.agreed.append(pair.pivot)
    state.taxa = pair.survivors
    state.tree1 = state.tree1.restrict(pair.survivors)
    state.tree2 = state.tree2.restrict(pair.survivors)
    if state.tree1.seq() != state.tree2.seq():
        raise TreeError("internal error: restriction broke the leaf order")
    state.step += 1


def _checked_outcome(outcome: ConstructionOutcome) -> ConstructionOutcome:
    """Verify an outcome against its own setup trees before release."""
    pair = outcome.setup_trees
    if pair is None:
        raise TreeError("outcome lacks its setup trees")
    tree1, tree2 = pair
    a = outcome.agreement_set
    if not a:
        raise TreeError("empty agreement set")
    r1 = tree1.restrict(a)
    r2 = tree2.restrict(a)
    if outcome.kind in _ROOTED_KINDS:
        if not isomorphic(r1, r2):
            raise TreeError("rooted agreement failed verification")
        if outcome.kind == ROOTED_CATERPILLAR and not is_caterpillar(r1):
            raise TreeError("agreement is not a caterpillar")
    elif outcome.kind == UNROOTED_CATERPILLAR:
        if len(a) >= 2:
            u1, u2 = deroot(r1), deroot(r2)
            if not isomorphic(u1, u2):
                raise TreeError("unrooted agreement failed verification")
            if not is_caterpillar(u1):
                raise TreeError("agreement is not a caterpillar")
    else:
        raise TreeError(f"unknown outcome kind {outcome.kind!r}")
    return outcome


def weak_construct(tree1: RootedTree, tree2: RootedTree, n_param: int,
                   c: int = 4,
                   observer: Optional[Callable[..., None]] = None,
                   ) -> ConstructionOutcome:
    """Peel pivots until one taxon remains or a greedy caterpillar pays.

    Inputs are two rooted trees with identical leaf orders (as produced
    by :func:`setup`).  Each pair step keeps at least a 1/(2 log2 n_param)
    fraction, so starting from at least sqrt(n_param) taxa the rooted
    exit has size >= log2(n_param) / (2 log2(2 log2 n_param)) + 1; the
    caterpillar exit has size >= log2(n_param).  ``observer``, if given,
    is called with (state, decomposition, branch) before each move.
    """
    if tree1.taxa != tree2.taxa:
        raise TaxaMismatch("input trees must share their taxon set")
    if tree1.seq() != tree2.seq():
        raise TreeError("input trees must list their leaves identically")
    if n_param < 4:
        raise TreeError("size parameter must be at least 4")
    state = IterationState(taxa=tree1.taxa, tree1=tree1, tree2=tree2,
                           agreed=[], n_param=n_param)
    tallies = {"large": 0, "regular": 0}
    while len(state.taxa) > 1:
        decomp = path_decomposition(state)
        branch, payload = classify_iteration(state, decomp, c)
        if observer is not None:
            observer(state, decomp, branch)
        if branch == "caterpillar":
            return _checked_outcome(ConstructionOutcome(
                frozenset(payload), UNROOTED_CATERPILLAR,
                f"greedy-caterpillar(step={state.step})",
                math.log2(n_param), (tree1, tree2)))
        tallies[branch] += 1
        _apply_pair(state, payload)
    lg = math.log2(n_param)
    return _checked_outcome(ConstructionOutcome(
        frozenset(state.agreed) | state.taxa, ROOTED_CATERPILLAR,
        f"pair-chain(large={tallies['large']} regular={tallies['regular']})",
        0.5 * lg / math.log2(2 * lg) + 1, (tree1, tree2)))


def _check_split(state: IterationState, split: IncomparableSplit) -> None:
    if split.nucleus & split.survivors:
        raise TreeError("split sets overlap")
    if not split.nucleus or not split.survivors:
        raise TreeError("split sets must be non-empty")
    if len(split.nucleus) ** 16 < state.n_param:
        raise TreeError("split nucleus below its size floor")
    if len(split.survivors) * 10 * math.log2(state.n_param) < len(state.taxa):
        raise TreeError("split survivors below their size floor")
    for tree in (state.tree1, state.tree2):
        a = tree.lca(split.nucleus)
        b = tree.lca(split.survivors)
        if tree.is_comparable(a, b):
            raise TreeError("split ancestors are comparable")


def strong_split(state: IterationState, decomp: PathDecomposition,
                 c: int = 40) -> Union[IncomparableSplit, SweepFallback,
                                       SplitDegenerate]:
    """With only small pieces left, cut the core in two incomparable
    parts, or fall back to an explicit caterpillar agreement.

    Requires every piece at size at most max(2n'/C, 1).  Locates a big
    piece inside the middle fifth-to-three-fifths window (the survivors)
    and another in the far fifth on the appropriate end, then intersects
    the latter with the other tree's pieces to carve a nucleus whose
    ancestor is incomparable with the survivors' ancestor in both trees.
    When a landmark is missing the window is swept greedily instead, and
    if the other tree's pieces only graze the nucleus a transversal (one
    leaf per grazing piece) is solved exactly, which is feasible because
    the transversal restricts one tree to a caterpillar.
    """
    order = decomp.order
    n = len(order)
    n_param = state.n_param
    for piece in decomp.first + decomp.second:
        if piece.size() > 1 and piece.size() * c > 2 * n:
            raise TreeError("oversized piece: structural pair applies")
    if len(state.taxa) ** 4 < n_param:
        raise TreeError("core below the fourth-root floor")
    lg = math.log2(n_param)
    win_lo = (8 * n + 19) // 20
    win_hi = (12 * n) // 20
    inside1 = [p for p in decomp.first if p.lo >= win_lo and p.hi <= win_hi]
    inside2 = [p for p in decomp.second if p.lo >= win_lo and p.hi <= win_hi]
    if not inside1 or not inside2:
        return SplitDegenerate("no piece fits the middle window")
    lo = max(inside1[0].lo, inside2[0].lo)
    hi = min(inside1[-1].hi, inside2[-1].hi)
    if lo > hi:
        return SplitDegenerate("middle-window piece runs do not meet")
    anchor = None
    for pieces in (decomp.first, decomp.second):
        for piece in pieces:
            if piece.hi >= lo and piece.lo <= hi and piece.size() * 10 * lg >= n:
                anchor = piece
                break
        if anchor is not None:
            anchor_in_first = pieces is decomp.first
            break
    if anchor is None:
        return SweepFallback(greedy_caterpillar(decomp, lo, hi), lg,
                             f"interval-sweep(step={state.step})")
    if anchor_in_first:
        side_lo, side_hi = 1, (4 * n) // 20
        contained = lambda p: 4 * p.hi < n
    else:
        side_lo, side_hi = (16 * n + 19) // 20, n
        contained = lambda p: 4 * p.lo > 3 * n
    if side_lo > side_hi:
        return SplitDegenerate("side window is empty")
    pick = None
    for pieces in (decomp.first, decomp.second):
        for piece in pieces:
            if (piece.hi >= side_lo and piece.lo <= side_hi
                    and piece.size() * 5 * lg >= n and contained(piece)):
                pick = piece
                break
        if pick is not None:
            pick_in_first = pieces is decomp.first
            break
    if pick is None:
        return SweepFallback(greedy_caterpillar(decomp, side_lo, side_hi), lg,
                             f"side-sweep(step={state.step})")
    partners = [p for p in (decomp.second if pick_in_first else decomp.first)
                if p.hi >= pick.lo and p.lo <= pick.hi]
    for partner in partners:
        cut_lo = max(partner.lo, pick.lo)
        cut_hi = min(partner.hi, pick.hi)
        if (cut_hi - cut_lo + 1) ** 16 >= n_param:
            split = IncomparableSplit(_span(order, cut_lo, cut_hi),
                                      frozenset(anchor.leaves))
            _check_split(state, split)
            return split
    transversal = tuple(order[max(p.lo, pick.lo) - 1] for p in partners)
    sub = rooted_mast(state.tree1.restrict(transversal),
                      state.tree2.restrict(transversal))
    leaves = tuple(sorted(sub.agreement_set, key=label_key))
    return SweepFallback(
        leaves, lg / 48,
        f"transversal-exact(step={state.step} partners={len(partners)})")


def main_construct(tree1: UnrootedTree, tree2: UnrootedTree, c: int = 40,
                   *, orient: str = "min_label",
                   rng: Optional[SplitMix64] = None) -> ConstructionOutcome:
    """Build an agreement set by peeling singletons and whole blocks.

    Runs :func:`setup`, then while the core holds at least n^(1/4) taxa:
    take a structural pair if one exists, otherwise ask
    :func:`strong_split`.  A split's nucleus is handed to
    :func:`weak_construct` with size parameter |nucleus|^2 and the
    resulting chain is appended as one block; a fallback caterpillar is
    returned as-is; a degenerate window is closed out exactly.  Blocks
    stack because each block's ancestor is incomparable with the
    remaining core's ancestor in both trees.
    """
    if tree1.taxa != tree2.taxa:
        raise TaxaMismatch("input trees must share their taxon set")
    n = len(tree1)
    if n < 4:
        raise TreeError("construction needs at least 4 taxa")
    state, rooted1, rooted2 = setup(tree1, tree2, orient=orient, rng=rng)
    setup_pair = (rooted1, rooted2)
    singles = 0
    blocks = 0
    tags: list[str] = []
    consumed = False
    while len(state.taxa) ** 4 >= n:
        decomp = path_decomposition(state)
        pair = find_good_pair_structural(state, decomp, c)
        if pair is not None:
            _apply_pair(state, pair)
            singles += 1
            continue
        split = strong_split(state, decomp, c)
        if isinstance(split, SweepFallback):
            return _checked_outcome(ConstructionOutcome(
                frozenset(split.leaves), UNROOTED_CATERPILLAR, split.branch,
                split.claimed_bound, setup_pair))
        if isinstance(split, SplitDegenerate):
            sub = rooted_mast(state.tree1, state.tree2)
            state.agreed.extend(sorted(sub.agreement_set, key=label_key))
            tags.append("degenerate-exact")
            consumed = True
            break
        nested = weak_construct(state.tree1.restrict(split.nucleus),
                                state.tree2.restrict(split.nucleus),
                                n_param=len(split.nucleus) ** 2)
        if nested.kind == UNROOTED_CATERPILLAR:
            return _checked_outcome(ConstructionOutcome(
                nested.agreement_set, UNROOTED_CATERPILLAR,
                "nested:" + nested.branch, nested.claimed_bound, setup_pair))
        state.agreed.extend(sorted(nested.agreement_set, key=label_key))
        blocks += 1
        state.taxa = split.survivors
        state.tree1 = state.tree1.restrict(split.survivors)
        state.tree2 = state.tree2.restrict(split.survivors)
        if state.tree1.seq() != state.tree2.seq():
            raise TreeError("internal error: restriction broke the leaf order")
        state.step += 1
    agreed = list(state.agreed)
    if not consumed and state.taxa:
        if len(state.taxa) == 1:
            agreed.extend(state.taxa)
        else:
            sub = rooted_mast(state.tree1, state.tree2)
            if sub.agreement_set != state.taxa:
                tags.append("final-exact")
            agreed.extend(sorted(sub.agreement_set, key=label_key))
    branch = f"block-chain(singles={singles} blocks={blocks})"
    if tags:
        branch += ";" + ";".join(tags)
    return _checked_outcome(ConstructionOutcome(
        frozenset(agreed), BLOCK_TREE, branch,
        math.log2(n) / (4 * math.log2(c)), setup_pair))


def verify_agreement(tree1: Tree, tree2: Tree, leaves, kind: str) -> bool:
    """Restrict both trees to ``leaves`` and test isomorphism.

    Rooted kinds expect the rooted trees the construction ran on;
    the unrooted kind expects the unrooted originals.
    """
    rooted = kind in _ROOTED_KINDS
    want = RootedTree if rooted else UnrootedTree
    if not isinstance(tree1, want) or not isinstance(tree2, want):
        raise TypeError(f"kind {kind!r} verifies against {want.__name__} inputs")
    a = frozenset(leaves)
    if not a:
        return False
    return isomorphic(tree1.restrict(a), tree2.restrict(a))


def verify_outcome(tree1: UnrootedTree, tree2: UnrootedTree,
                   outcome: ConstructionOutcome) -> bool:
    """Re-verify an outcome against the unrooted originals.

    Unrooted kinds restrict the originals directly; rooted kinds restrict
    the outcome's attached setup trees, whose de-rooted restrictions are
    restrictions of the originals.  The setup trees may already be cut
    down to the aligned core, so their taxa only need to sit inside the
    originals'.
    """
    if outcome.kind == UNROOTED_CATERPILLAR:
        return verify_agreement(tree1, tree2, outcome.agreement_set,
                                outcome.kind)
    if outcome.setup_trees is None:
        return False
    setup1, setup2 = outcome.setup_trees
    if not (setup1.taxa <= tree1.taxa and setup2.taxa <= tree2.taxa):
        return False
    if not outcome.agreement_set <= setup1.taxa:
        return False
    return verify_agreement(setup1, setup2, outcome.agreement_set,
                            outcome.kind)
