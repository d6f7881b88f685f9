"""Seeded tree generators for tests and experiments.

All generators are deterministic functions of their spec: the same model,
size, and seed always produce the same tree, node ids included.  Labels
are the decimal strings "1".."n".
"""

from __future__ import annotations

from dataclasses import dataclass

from .rng import SplitMix64, mix64
from .trees import RootedTree, TreeError, UnrootedTree, deroot

MODELS = ("uniform", "caterpillar", "balanced")


@dataclass(frozen=True)
class GenSpec:
    model: str
    n: int
    seed: int = 0


def _labels(n: int) -> list[str]:
    return [str(i) for i in range(1, n + 1)]


def _from_edges(num_nodes: int, edges: list[tuple[int, int]],
                labels: list) -> UnrootedTree:
    adj: list[list[int]] = [[] for _ in range(num_nodes)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    return UnrootedTree(adj, labels)


def _uniform(n: int, seed: int) -> UnrootedTree:
    # Attaching each new leaf to a uniformly chosen existing edge makes
    # every binary shape on the labels equally likely: a shape on k leaves
    # arises from exactly one shape on k-1 leaves and one of its 2k-5
    # edges, matching the (2n-5)!! count.
    rng = SplitMix64(seed)
    order = _labels(n)
    rng.shuffle(order)
    if n == 1:
        return UnrootedTree([[]], order)
    labels: list = [order[0], order[1]]
    edges: list[tuple[int, int]] = [(0, 1)]
    for i in range(2, n):
        pick = rng.randrange(len(edges))
        u, v = edges[pick]
        mid = len(labels)
        labels.append(None)
        leaf = len(labels)
        labels.append(order[i])
        edges[pick] = (u, mid)
        edges.append((mid, v))
        edges.append((mid, leaf))
    return _from_edges(len(labels), edges, labels)


def _caterpillar(n: int) -> UnrootedTree:
    # Spine reads the labels in numeric order end to end.
    labels: list = _labels(n)
    if n == 1:
        return UnrootedTree([[]], labels)
    if n == 2:
        return _from_edges(2, [(0, 1)], labels)
    labels += [None] * (n - 2)
    edges = [(0, n), (1, n), (n - 1, 2 * n - 3)]
    for j in range(1, n - 2):
        spine = n + j
        edges.append((spine - 1, spine))
        edges.append((j + 1, spine))
    return _from_edges(2 * n - 2, edges, labels)


def _balanced(n: int) -> UnrootedTree:
    if n & (n - 1) or n < 1:
        raise TreeError("balanced shape needs a power-of-two leaf count")
    if n == 1:
        return UnrootedTree([[]], _labels(1))
    # Heap layout: internals 0..n-2, leaves n-1..2n-2 left to right, so
    # in-order labeling is just counting off the leaf block.
    total = 2 * n - 1
    parent = [-1] * total
    left = [-1] * total
    right = [-1] * total
    labels: list = [None] * total
    for i in range(n - 1):
        left[i] = 2 * i + 1
        right[i] = 2 * i + 2
        parent[2 * i + 1] = i
        parent[2 * i + 2] = i
    for i in range(n - 1, total):
        labels[i] = str(i - n + 2)
    return deroot(RootedTree(parent, left, right, labels, 0))


def generate(spec: GenSpec) -> UnrootedTree:
    """Build the tree a spec describes."""
    if spec.n < 1:
        raise TreeError("need at least one taxon")
    if spec.model == "uniform":
        return _uniform(spec.n, spec.seed)
    if spec.model == "caterpillar":
        return _caterpillar(spec.n)
    if spec.model == "balanced":
        return _balanced(spec.n)
    raise TreeError(f"unknown model {spec.model!r}")


def adversarial_pair(n: int, seed: int = 0) -> tuple[UnrootedTree, UnrootedTree]:
    """The hard instance: a balanced tree against a caterpillar.

    Their maximum agreement is O(log n), so constructions can be checked
    against a matching upper bound.  ``n`` must be a power of two, at
    least 4; ``seed`` is accepted for interface uniformity but the pair
    is fully determined by ``n``.
    """
    if n < 4 or n & (n - 1):
        raise TreeError("adversarial pair needs a power-of-two size, at least 4")
    return _balanced(n), _caterpillar(n)
