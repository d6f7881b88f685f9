"""Binary phylogenetic trees with labeled leaves.

Two flavors are distinguished by type:

* :class:`UnrootedTree` -- every internal node has degree exactly 3, every
  leaf degree 1.  A tree on ``n`` leaves has ``2n - 2`` nodes (degenerate
  trees with 1 or 2 leaves are legal).
* :class:`RootedTree` -- a distinguished root of degree 2 plus internal
  nodes with an *ordered* (left, right) child pair.  A tree on ``n``
  leaves has ``2n - 1`` nodes (a single-leaf tree is just its root).

Nodes are small integers that are stable within one tree value.  Trees are
immutable after construction: every operation that changes shape (restrict,
mirror, rooting) returns a fresh tree and never aliases node ids of the
source.  Because instances never change, derived data (preorder numbers,
subtree sizes, depths) is computed once on demand and cached.

All traversals are iterative; trees may be path-like and deeper than the
interpreter recursion limit.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator, Optional, Sequence


class TreeError(Exception):
    """A structural invariant does not hold or an argument is malformed."""


class TaxaMismatch(TreeError):
    """Two trees that must share a taxon set do not."""


def label_key(label: str):
    """Sort key giving numeric labels numeric order and others lexicographic.

    Decimal labels sort before non-decimal ones; ties between distinct
    spellings of the same number ("7" vs "07") fall back to the text.
    """
    if label.isdigit():
        return (0, int(label), label)
    return (1, 0, label)


def min_label(labels: Iterable[str]) -> str:
    return min(labels, key=label_key)


def sorted_labels(labels: Iterable[str]) -> list[str]:
    return sorted(labels, key=label_key)


class RootedTree:
    """An ordered rooted binary tree over a set of leaf labels.

    The representation is array-based: ``parent``, ``left`` and ``right``
    map node ids to node ids (-1 where absent) and ``labels`` maps leaf
    nodes to their taxon (``None`` on internal nodes).
    """

    __slots__ = (
        "parent", "left", "right", "labels", "root",
        "_leaf_node", "_taxa", "_pre", "_prepos", "_post",
        "_nleaves", "_depth", "_seq",
    )

    def __init__(self, parent: list[int], left: list[int], right: list[int],
                 labels: list[Optional[str]], root: int, _checked: bool = False):
        self.parent = parent
        self.left = left
        self.right = right
        self.labels = labels
        self.root = root
        leaf_node: dict[str, int] = {}
        for node, lab in enumerate(labels):
            if lab is not None:
                if lab in leaf_node:
                    raise TreeError(f"duplicate leaf label {lab!r}")
                leaf_node[lab] = node
        self._leaf_node = leaf_node
        self._taxa = frozenset(leaf_node)
        self._pre = None
        self._prepos = None
        self._post = None
        self._nleaves = None
        self._depth = None
        self._seq = None
        if not _checked:
            self.validate()

    # -- basic queries ---------------------------------------------------

    def __len__(self) -> int:
        """Number of leaves."""
        return len(self._leaf_node)

    def __repr__(self) -> str:
        return f"<RootedTree leaves={len(self)} nodes={len(self.parent)}>"

    @property
    def taxa(self) -> frozenset[str]:
        return self._taxa

    def num_nodes(self) -> int:
        return len(self.parent)

    def is_leaf(self, node: int) -> bool:
        return self.left[node] == -1

    def leaf_node(self, label: str) -> int:
        try:
            return self._leaf_node[label]
        except KeyError:
            raise TreeError(f"unknown taxon {label!r}") from None

    def children(self, node: int) -> tuple[int, int]:
        return self.left[node], self.right[node]

    # -- cached traversal data -------------------------------------------

    def preorder(self) -> list[int]:
        """Nodes in preorder; within a node the left subtree comes first."""
        if self._pre is None:
            pre = []
            stack = [self.root]
            left, right = self.left, self.right
            while stack:
                v = stack.pop()
                pre.append(v)
                l = left[v]
                if l != -1:
                    stack.append(right[v])
                    stack.append(l)
            self._pre = pre
            pos = [0] * len(self.parent)
            for i, v in enumerate(pre):
                pos[v] = i
            self._prepos = pos
        return self._pre

    def preorder_position(self) -> list[int]:
        self.preorder()
        return self._prepos

    def postorder(self) -> list[int]:
        """Nodes with children always before their parent."""
        if self._post is None:
            # Reverse of a root-right-left walk.
            out = []
            stack = [self.root]
            left, right = self.left, self.right
            while stack:
                v = stack.pop()
                out.append(v)
                l = left[v]
                if l != -1:
                    stack.append(l)
                    stack.append(right[v])
            out.reverse()
            self._post = out
        return self._post

    def leaf_counts(self) -> list[int]:
        """Per node, the number of leaves in its subtree."""
        if self._nleaves is None:
            cnt = [0] * len(self.parent)
            left, right = self.left, self.right
            for v in self.postorder():
                l = left[v]
                cnt[v] = 1 if l == -1 else cnt[l] + cnt[right[v]]
            self._nleaves = cnt
        return self._nleaves

    def depths(self) -> list[int]:
        if self._depth is None:
            dep = [0] * len(self.parent)
            parent = self.parent
            for v in self.preorder():
                p = parent[v]
                dep[v] = 0 if p == -1 else dep[p] + 1
            self._depth = dep
        return self._depth

    # -- core operations ---------------------------------------------------

    def seq(self) -> tuple[str, ...]:
        """Leaf labels in preorder (left to right)."""
        if self._seq is None:
            labels = self.labels
            self._seq = tuple(labels[v] for v in self.preorder() if labels[v] is not None)
        return self._seq

    def leaves_under(self, node: int) -> tuple[str, ...]:
        """Leaf labels of the subtree at ``node``, in seq order."""
        out = []
        stack = [node]
        left, right, labels = self.left, self.right, self.labels
        while stack:
            v = stack.pop()
            l = left[v]
            if l == -1:
                out.append(labels[v])
            else:
                stack.append(right[v])
                stack.append(l)
        return tuple(out)

    def is_ancestor(self, a: int, b: int) -> bool:
        """True iff ``a`` lies on the path from ``b`` to the root (or a == b)."""
        pos = self.preorder_position()
        span = 2 * self.leaf_counts()[a] - 1
        return pos[a] <= pos[b] < pos[a] + span

    def is_comparable(self, a: int, b: int) -> bool:
        """True iff one of the nodes is an ancestor of the other."""
        return self.is_ancestor(a, b) or self.is_ancestor(b, a)

    def lca(self, labels: Iterable[str]) -> int:
        """Least common ancestor node of a non-empty set of taxa."""
        nodes = [self.leaf_node(lab) for lab in labels]
        if not nodes:
            raise TreeError("lca of an empty taxon set")
        if len(nodes) == 1:
            return nodes[0]
        pos = self.preorder_position()
        a = min(nodes, key=pos.__getitem__)
        b = max(nodes, key=pos.__getitem__)
        # The lca of a set equals the lca of its preorder-extreme leaves.
        dep = self.depths()
        parent = self.parent
        while dep[a] > dep[b]:
            a = parent[a]
        while dep[b] > dep[a]:
            b = parent[b]
        while a != b:
            a = parent[a]
            b = parent[b]
        return a

    def restrict(self, keep: Iterable[str]) -> "RootedTree":
        """Restriction to a non-empty subset of taxa.

        Nodes outside the minimal subtree spanning ``keep`` are discarded
        and nodes left with a single live child are suppressed; surviving
        internal nodes keep their child order.
        """
        keepset = frozenset(keep)
        if not keepset:
            raise TreeError("restriction to an empty taxon set")
        unknown = keepset - self._taxa
        if unknown:
            raise TreeError(f"unknown taxa in restriction: {sorted_labels(unknown)}")
        if keepset == self._taxa:
            return self
        left, right, labels = self.left, self.right, self.labels
        live = [0] * len(self.parent)  # number of live child sides (leaves: kept?)
        for v in self.postorder():
            l = left[v]
            if l == -1:
                live[v] = 1 if labels[v] in keepset else 0
            else:
                live[v] = (1 if live[l] else 0) + (1 if live[right[v]] else 0)

        def rep(v: int) -> int:
            # Descend through single-live-child chains to the surviving node.
            while True:
                l = left[v]
                if l == -1 or live[v] == 2:
                    return v
                v = l if live[l] else right[v]

        n_parent: list[int] = []
        n_left: list[int] = []
        n_right: list[int] = []
        n_labels: list[Optional[str]] = []
        stack = [(rep(self.root), -1)]
        while stack:
            old, par = stack.pop()
            new = len(n_parent)
            n_parent.append(par)
            n_left.append(-1)
            n_right.append(-1)
            n_labels.append(labels[old])
            if par != -1:
                if n_left[par] == -1:
                    n_left[par] = new
                else:
                    n_right[par] = new
            l = left[old]
            if l != -1 and live[old] == 2:
                # Push right first so the left child is numbered first.
                stack.append((rep(right[old]), new))
                stack.append((rep(l), new))
        return RootedTree(n_parent, n_left, n_right, n_labels, 0, _checked=True)

    def mirror(self) -> "RootedTree":
        """Swap the child order of every internal node."""
        return RootedTree(list(self.parent), list(self.right), list(self.left),
                          list(self.labels), self.root, _checked=True)

    def validate(self) -> None:
        """Check every structural invariant; raises :class:`TreeError`."""
        n = len(self.parent)
        if not (len(self.left) == len(self.right) == len(self.labels) == n):
            raise TreeError("array length mismatch")
        if not (0 <= self.root < n) or self.parent[self.root] != -1:
            raise TreeError("bad root")
        leaves = 0
        for v in range(n):
            l, r = self.left[v], self.right[v]
            if (l == -1) != (r == -1):
                raise TreeError(f"node {v} has exactly one child")
            if l == -1:
                leaves += 1
                if self.labels[v] is None:
                    raise TreeError(f"leaf {v} is unlabeled")
            else:
                if self.labels[v] is not None:
                    raise TreeError(f"internal node {v} carries a label")
                for c in (l, r):
                    if not (0 <= c < n) or self.parent[c] != v:
                        raise TreeError(f"child link {v}->{c} inconsistent")
            if v != self.root and not (0 <= self.parent[v] < n):
                raise TreeError(f"node {v} has no parent")
        if n != 2 * leaves - 1:
            raise TreeError(f"{n} nodes for {leaves} leaves")
        if len(self.preorder()) != n:
            raise TreeError("tree is not connected")


class UnrootedTree:
    """An unrooted binary tree: internal degree 3, leaf degree 1."""

    __slots__ = ("adj", "labels", "_leaf_node", "_taxa")

    def __init__(self, adj: list[list[int]], labels: list[Optional[str]],
                 _checked: bool = False):
        self.adj = adj
        self.labels = labels
        leaf_node: dict[str, int] = {}
        for node, lab in enumerate(labels):
            if lab is not None:
                if lab in leaf_node:
                    raise TreeError(f"duplicate leaf label {lab!r}")
                leaf_node[lab] = node
        self._leaf_node = leaf_node
        self._taxa = frozenset(leaf_node)
        if not _checked:
            self.validate()

    def __len__(self) -> int:
        """Number of leaves."""
        return len(self._leaf_node)

    def __repr__(self) -> str:
        return f"<UnrootedTree leaves={len(self)} nodes={len(self.adj)}>"

    @property
    def taxa(self) -> frozenset[str]:
        return self._taxa

    def num_nodes(self) -> int:
        return len(self.adj)

    def is_leaf(self, node: int) -> bool:
        return self.labels[node] is not None

    def leaf_node(self, label: str) -> int:
        try:
            return self._leaf_node[label]
        except KeyError:
            raise TreeError(f"unknown taxon {label!r}") from None

    def degree(self, node: int) -> int:
        return len(self.adj[node])

    def edges(self) -> Iterator[tuple[int, int]]:
        """All edges as (low id, high id) pairs, in id order."""
        for u, nbrs in enumerate(self.adj):
            for v in nbrs:
                if u < v:
                    yield (u, v)

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < len(self.adj) and v in self.adj[u]

    def restrict(self, keep: Iterable[str]) -> "UnrootedTree":
        """Restriction to a non-empty taxon subset: the minimal spanning
        subgraph with all degree-2 nodes suppressed."""
        keepset = frozenset(keep)
        if not keepset:
            raise TreeError("restriction to an empty taxon set")
        unknown = keepset - self._taxa
        if unknown:
            raise TreeError(f"unknown taxa in restriction: {sorted_labels(unknown)}")
        if keepset == self._taxa:
            return self
        adj, labels = self.adj, self.labels
        n = len(adj)
        dead = [False] * n
        deg = [len(a) for a in adj]
        drop = deque(v for v in range(n)
                     if labels[v] is not None and labels[v] not in keepset)
        for v in drop:
            dead[v] = True
        while drop:
            v = drop.popleft()
            for u in adj[v]:
                if not dead[u]:
                    deg[u] -= 1
                    if deg[u] == 1 and labels[u] is None:
                        dead[u] = True
                        drop.append(u)
        alive = [not d for d in dead]
        # Nodes kept in the final tree: alive with pruned degree != 2.
        keep_nodes = [v for v in range(n) if alive[v] and deg[v] != 2]
        idx = {v: i for i, v in enumerate(keep_nodes)}
        n_adj: list[list[int]] = [[] for _ in keep_nodes]
        n_labels = [labels[v] for v in keep_nodes]
        seen = set()
        for v in keep_nodes:
            for u in adj[v]:
                if not alive[u]:
                    continue
                prev, cur = v, u
                while deg[cur] == 2:
                    nxt = next(w for w in adj[cur] if alive[w] and w != prev)
                    prev, cur = cur, nxt
                a, b = idx[v], idx[cur]
                if (a, b) not in seen:
                    seen.add((a, b))
                    seen.add((b, a))
                    n_adj[a].append(b)
                    n_adj[b].append(a)
        return UnrootedTree(n_adj, n_labels, _checked=True)

    def validate(self) -> None:
        """Check every structural invariant; raises :class:`TreeError`."""
        n = len(self.adj)
        if len(self.labels) != n:
            raise TreeError("array length mismatch")
        nleaves = len(self._leaf_node)
        if n == 0:
            raise TreeError("empty tree")
        edge_ends = 0
        for v in range(n):
            d = len(self.adj[v])
            edge_ends += d
            for u in self.adj[v]:
                if not (0 <= u < n) or v not in self.adj[u]:
                    raise TreeError(f"asymmetric adjacency at {v}-{u}")
            if self.labels[v] is not None:
                if d not in (0, 1) or (d == 0 and n != 1):
                    raise TreeError(f"leaf {v} has degree {d}")
            else:
                if d != 3:
                    raise TreeError(f"internal node {v} has degree {d}")
        if nleaves == 1:
            expected = 1
        elif nleaves == 2:
            expected = 2
        else:
            expected = 2 * nleaves - 2
        if n != expected:
            raise TreeError(f"{n} nodes for {nleaves} leaves")
        if edge_ends != 2 * (n - 1):
            raise TreeError("edge count is not nodes - 1")
        # Connectivity.
        if n > 1:
            seen = [False] * n
            seen[0] = True
            stack = [0]
            count = 1
            while stack:
                v = stack.pop()
                for u in self.adj[v]:
                    if not seen[u]:
                        seen[u] = True
                        count += 1
                        stack.append(u)
            if count != n:
                raise TreeError("tree is not connected")


# -- rootedness conversions ------------------------------------------------


def canonical_root_edge(tree: UnrootedTree) -> tuple[int, int]:
    """The edge incident to the leaf with the smallest label."""
    if len(tree) < 2:
        raise TreeError("a single-leaf tree has no edges")
    leaf = tree.leaf_node(min_label(tree.taxa))
    return (leaf, tree.adj[leaf][0])


def root_at_edge(tree: UnrootedTree, edge: tuple[int, int], *,
                 orient: str = "min_label", rng=None) -> RootedTree:
    """Root an unrooted tree by subdividing ``edge`` with a new root node.

    ``orient`` fixes the left/right order of every child pair:

    * ``"min_label"`` (default, deterministic): the child whose subtree
      contains the smallest taxon becomes the left child;
    * ``"random"``: a coin flip per node from ``rng`` (an object with a
      ``randrange`` method).
    """
    a, b = edge
    if not tree.has_edge(a, b):
        raise TreeError(f"no edge {edge!r} in tree")
    if orient not in ("min_label", "random"):
        raise TreeError(f"unknown orientation rule {orient!r}")
    if orient == "random" and rng is None:
        raise TreeError("random orientation needs an rng")
    adj, labels = tree.adj, tree.labels
    # Orient away from the new root: parent map over original nodes.
    par: dict[int, int] = {a: -1, b: -1}
    order = [a, b]
    stack = [a, b]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u != par[v] and not (v == a and u == b) and not (v == b and u == a):
                par[u] = v
                order.append(u)
                stack.append(u)
    kids: dict[int, list[int]] = {v: [] for v in order}
    for v in order:
        p = par[v]
        if p != -1:
            kids[p].append(v)
    # Smallest taxon below each oriented node, for deterministic child order.
    best: dict[int, str] = {}
    for v in reversed(order):
        if labels[v] is not None:
            best[v] = labels[v]
        else:
            best[v] = min((best[c] for c in kids[v]), key=label_key)
    def ordered(pair: list[int]) -> tuple[int, int]:
        x, y = pair
        if orient == "random":
            return (y, x) if rng.randrange(2) else (x, y)
        if label_key(best[x]) <= label_key(best[y]):
            return (x, y)
        return (y, x)

    n_parent = [-1]
    n_left = [-1]
    n_right = [-1]
    n_labels: list[Optional[str]] = [None]
    stack2: list[tuple[int, int]] = []
    ra, rb = ordered([a, b])
    stack2.append((rb, 0))
    stack2.append((ra, 0))
    while stack2:
        old, parnew = stack2.pop()
        new = len(n_parent)
        n_parent.append(parnew)
        n_left.append(-1)
        n_right.append(-1)
        n_labels.append(labels[old])
        if n_left[parnew] == -1:
            n_left[parnew] = new
        else:
            n_right[parnew] = new
        if kids[old]:
            cl, cr = ordered(kids[old])
            stack2.append((cr, new))
            stack2.append((cl, new))
    return RootedTree(n_parent, n_left, n_right, n_labels, 0, _checked=True)


def deroot(tree: RootedTree) -> UnrootedTree:
    """Suppress the root, joining its two child subtrees by an edge."""
    if len(tree) < 2:
        raise TreeError("cannot deroot a single-leaf tree")
    root = tree.root
    old_ids = [v for v in range(tree.num_nodes()) if v != root]
    idx = {v: i for i, v in enumerate(old_ids)}
    n_adj: list[list[int]] = [[] for _ in old_ids]
    n_labels = [tree.labels[v] for v in old_ids]
    def connect(u: int, v: int) -> None:
        n_adj[idx[u]].append(idx[v])
        n_adj[idx[v]].append(idx[u])
    for v in old_ids:
        p = tree.parent[v]
        if p != root and p != -1:
            connect(v, p)
    connect(tree.left[root], tree.right[root])
    return UnrootedTree(n_adj, n_labels, _checked=True)


# -- shape predicates --------------------------------------------------------


def is_caterpillar(tree) -> bool:
    """True iff every internal node (root included) is adjacent to a leaf."""
    if isinstance(tree, RootedTree):
        # A parent is never a leaf, so adjacency means a leaf child.
        for v in range(tree.num_nodes()):
            l = tree.left[v]
            if l != -1 and not tree.is_leaf(l) and not tree.is_leaf(tree.right[v]):
                return False
        return True
    if isinstance(tree, UnrootedTree):
        for v in range(tree.num_nodes()):
            if tree.labels[v] is None:
                if not any(tree.labels[u] is not None for u in tree.adj[v]):
                    return False
        return True
    raise TypeError(f"not a tree: {tree!r}")


def caterpillar_ordering(tree: RootedTree) -> Optional[tuple[str, ...]]:
    """The canonical peel order of a rooted caterpillar, else ``None``.

    Walking the internal spine from the root down, each spine node
    contributes its leaf child; the bottom node contributes both leaves in
    left-right order.  The returned ordering ``s`` satisfies, for every
    ``i``, that ``s[i]`` is incomparable with ``lca(s[i+1:])``.
    """
    if not isinstance(tree, RootedTree):
        raise TypeError("caterpillar ordering is defined on rooted trees")
    if not is_caterpillar(tree):
        return None
    if len(tree) == 1:
        return (tree.labels[tree.root],)
    out = []
    cur = tree.root
    while True:
        l, r = tree.left[cur], tree.right[cur]
        l_leaf, r_leaf = tree.is_leaf(l), tree.is_leaf(r)
        if l_leaf and r_leaf:
            out.append(tree.labels[l])
            out.append(tree.labels[r])
            return tuple(out)
        if l_leaf:
            out.append(tree.labels[l])
            cur = r
        else:
            out.append(tree.labels[r])
            cur = l


# -- isomorphism -------------------------------------------------------------


def _canon_id(tree: RootedTree, table: dict) -> int:
    """Hash-consed canonical id of a rooted tree, child order ignored."""
    ids = [0] * tree.num_nodes()
    left, right, labels = tree.left, tree.right, tree.labels
    for v in tree.postorder():
        if left[v] == -1:
            key = labels[v]
        else:
            a, b = ids[left[v]], ids[right[v]]
            key = (a, b) if a <= b else (b, a)
        cached = table.get(key)
        if cached is None:
            cached = len(table)
            table[key] = cached
        ids[v] = cached
    return ids[tree.root]


def isomorphic(a, b) -> bool:
    """Label-preserving isomorphism; child order is not significant.

    Both arguments must share rootedness.  Different taxon sets compare
    unequal rather than raising.
    """
    if isinstance(a, RootedTree) and isinstance(b, RootedTree):
        if a.taxa != b.taxa:
            return False
        table: dict = {}
        return _canon_id(a, table) == _canon_id(b, table)
    if isinstance(a, UnrootedTree) and isinstance(b, UnrootedTree):
        if a.taxa != b.taxa:
            return False
        if len(a) <= 2:
            return True
        pivot = min_label(a.taxa)
        ra = root_at_edge(a, (a.leaf_node(pivot), a.adj[a.leaf_node(pivot)][0]))
        rb = root_at_edge(b, (b.leaf_node(pivot), b.adj[b.leaf_node(pivot)][0]))
        table = {}
        return _canon_id(ra, table) == _canon_id(rb, table)
    raise TypeError("isomorphism needs two trees of the same rootedness")


def restrict(tree, keep: Iterable[str]):
    """Rootedness-generic restriction (dispatches to the tree's method)."""
    return tree.restrict(keep)


def seq(tree: RootedTree) -> tuple[str, ...]:
    """Leaf labels of a rooted tree in preorder."""
    if not isinstance(tree, RootedTree):
        raise TypeError("seq is defined for rooted trees")
    return tree.seq()
